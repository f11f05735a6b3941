#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "airmax/airlink.hpp"
#include "airmax/baseband.hpp"
#include "airmax/channel.hpp"
#include "airmax/graph.hpp"
#include "airmax/protocols.hpp"

namespace airmax {

inline constexpr int kScenarioVersion = 1;

struct RandomTopologySpec {
    std::size_t n = 0;
    double density = 0.3;
    std::optional<std::uint64_t> seed;  // falls back to the scenario seed
};

/// x0 drawn uniformly from S, one value per agent.
struct UniformStatesSpec {};

enum class LinkKind { airlink, baseband };

/// Complete description of one experiment. Everything random is derived from
/// `seed`, so a config and seed fix every output byte.
struct ScenarioConfig {
    int version = kScenarioVersion;
    std::variant<DirectedTopology, RandomTopologySpec> topology = RandomTopologySpec{4, 0.3, {}};
    std::variant<std::vector<double>, UniformStatesSpec> x0 = UniformStatesSpec{};
    ChannelModel channel = ChannelModel::rayleigh(1.0);
    Protocol protocol = Protocol::ftc;
    LinkKind link = LinkKind::airlink;
    BasebandConfig baseband;  // ranges are overwritten by `ranges`
    SignalRanges ranges = SignalRanges::defaults();
    double rel_tol = 1e-9;
    std::uint64_t max_iters = 10000;
    std::uint64_t seed = 0;
};

/// Parses and validates a scenario document. Throws ConfigError naming the
/// offending field.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// Reads and parses a scenario file; unreadable or malformed files raise
/// ConfigError.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Seed from the AIRMAX_SEED environment variable, when set. Throws
/// ConfigError if it is not an unsigned integer.
std::optional<std::uint64_t> seed_from_env();

/// Concrete topology and initial states after expanding random specs.
struct ResolvedScenario {
    DirectedTopology topology;
    std::vector<double> x0;
};

ResolvedScenario resolve(const ScenarioConfig& cfg);

/// Builds the link and delegates to run(). Deterministic per (config, seed).
RunResult run_scenario(const ScenarioConfig& cfg);

/// Root stream for a scenario seed.
inline Stream scenario_stream(std::uint64_t seed) { return Stream(mix64(seed)); }

struct BatchOutcome {
    std::filesystem::path scenario;
    bool ok = false;
    std::string error;
    std::filesystem::path trace_csv;
    std::filesystem::path summary_json;
};

/// Runs every *.json scenario in `dir` (sorted by name) on up to `workers`
/// threads, writing <stem>.trace.csv and <stem>.summary.json to `out_dir`.
std::vector<BatchOutcome> run_batch(const std::filesystem::path& dir,
                                    const std::filesystem::path& out_dir, unsigned workers,
                                    std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace airmax
