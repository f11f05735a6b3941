#include "airmax/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "airmax/error.hpp"
#include "airmax/trace_io.hpp"

namespace airmax {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {"version", "topology", "x0",      "channel",
                                             "protocol", "link",    "baseband", "ranges",
                                             "rel_tol",  "max_iters", "seed"};

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field, "expected a number");
    return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ConfigError(field, "expected a non-negative integer");
}

BasebandConfig baseband_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("baseband", "expected an object");
    BasebandConfig cfg;
    for (const auto& [key, value] : j.items()) {
        const std::string field = "baseband." + key;
        if (key == "m") {
            const auto m = get_unsigned(value, field);
            if (m < 1 || m > 1'000'000) throw ConfigError(field, "must lie in [1, 1000000]");
            cfg.m = static_cast<int>(m);
        } else if (key == "noise_sigma2") {
            cfg.noise_sigma2 = get_number(value, field);
            if (!(cfg.noise_sigma2 >= 0.0)) throw ConfigError(field, "must be non-negative");
        } else if (key == "pilot_noise_sigma2") {
            cfg.pilot_noise_sigma2 = get_number(value, field);
            if (!(cfg.pilot_noise_sigma2 >= 0.0)) throw ConfigError(field, "must be non-negative");
        } else {
            throw ConfigError(field, "unknown key");
        }
    }
    // the pilot noise defaults to the data-channel noise
    if (!j.contains("pilot_noise_sigma2")) cfg.pilot_noise_sigma2 = cfg.noise_sigma2;
    return cfg;
}

std::variant<DirectedTopology, RandomTopologySpec> topology_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("topology", "expected an object");
    if (!j.contains("random")) return topology_from_json(j);
    const json& r = j["random"];
    if (!r.is_object()) throw ConfigError("topology.random", "expected an object");
    RandomTopologySpec spec;
    for (const auto& [key, value] : r.items()) {
        const std::string field = "topology.random." + key;
        if (key == "n") {
            spec.n = get_unsigned(value, field);
            if (spec.n < 2) throw ConfigError(field, "need at least 2 agents");
        } else if (key == "density") {
            spec.density = get_number(value, field);
            if (!(spec.density > 0.0 && spec.density <= 1.0))
                throw ConfigError(field, "must lie in (0, 1]");
        } else if (key == "seed") {
            spec.seed = get_unsigned(value, field);
        } else {
            throw ConfigError(field, "unknown key");
        }
    }
    if (!r.contains("n")) throw ConfigError("topology.random.n", "missing");
    return spec;
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
    for (const auto& [key, value] : j.items())
        if (!kTopLevelKeys.contains(key)) throw ConfigError(key, "unknown key");

    ScenarioConfig cfg;
    if (!j.contains("version")) throw ConfigError("version", "missing");
    if (!j["version"].is_number_integer() || j["version"].get<int>() != kScenarioVersion)
        throw ConfigError("version", "unsupported version (expected 1)");

    if (!j.contains("topology")) throw ConfigError("topology", "missing");
    cfg.topology = topology_spec_from_json(j["topology"]);

    if (j.contains("ranges")) cfg.ranges = ranges_from_json(j["ranges"]);

    if (j.contains("x0")) {
        const json& x = j["x0"];
        if (x.is_array()) {
            std::vector<double> x0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const std::string field = "x0[" + std::to_string(i) + "]";
                const double v = get_number(x[i], field);
                if (!cfg.ranges.contains(v))
                    throw ConfigError(field, "value " + std::to_string(v) + " outside S");
                x0.push_back(v);
            }
            cfg.x0 = std::move(x0);
        } else if (x.is_object() && x.size() == 1 && x.contains("random") &&
                   x["random"] == "uniform") {
            cfg.x0 = UniformStatesSpec{};
        } else {
            throw ConfigError("x0", "expected an array of states or {\"random\": \"uniform\"}");
        }
    }

    if (j.contains("channel")) cfg.channel = channel_from_json(j["channel"]);

    if (j.contains("protocol")) {
        if (!j["protocol"].is_string()) throw ConfigError("protocol", "expected a string");
        const auto p = protocol_from_string(j["protocol"].get<std::string>());
        if (!p) throw ConfigError("protocol", "expected \"standard\", \"asymptotic\" or \"ftc\"");
        cfg.protocol = *p;
    }

    if (j.contains("link")) {
        const json& l = j["link"];
        if (l == "airlink")
            cfg.link = LinkKind::airlink;
        else if (l == "baseband")
            cfg.link = LinkKind::baseband;
        else
            throw ConfigError("link", "expected \"airlink\" or \"baseband\"");
    }
    if (j.contains("baseband")) {
        cfg.baseband = baseband_from_json(j["baseband"]);
        if (!j.contains("link")) cfg.link = LinkKind::baseband;
    }
    cfg.baseband.ranges = cfg.ranges;

    if (j.contains("rel_tol")) {
        cfg.rel_tol = get_number(j["rel_tol"], "rel_tol");
        if (!(cfg.rel_tol > 0.0)) throw ConfigError("rel_tol", "must be positive");
    }
    if (j.contains("max_iters")) {
        cfg.max_iters = get_unsigned(j["max_iters"], "max_iters");
        if (cfg.max_iters < 1) throw ConfigError("max_iters", "must be >= 1");
    }
    if (j.contains("seed")) cfg.seed = get_unsigned(j["seed"], "seed");

    if (const auto* g = std::get_if<DirectedTopology>(&cfg.topology)) {
        if (const auto* x0 = std::get_if<std::vector<double>>(&cfg.x0); x0 && x0->size() != g->node_count())
            throw ConfigError("x0", "has " + std::to_string(x0->size()) + " entries for " +
                                        std::to_string(g->node_count()) + " agents");
    } else if (const auto* x0 = std::get_if<std::vector<double>>(&cfg.x0)) {
        const auto& spec = std::get<RandomTopologySpec>(cfg.topology);
        if (x0->size() != spec.n)
            throw ConfigError("x0", "has " + std::to_string(x0->size()) + " entries for " +
                                        std::to_string(spec.n) + " agents");
    }
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["version"] = cfg.version;
    if (const auto* g = std::get_if<DirectedTopology>(&cfg.topology)) {
        j["topology"] = *g;
    } else {
        const auto& spec = std::get<RandomTopologySpec>(cfg.topology);
        json r = {{"n", spec.n}, {"density", spec.density}};
        if (spec.seed) r["seed"] = *spec.seed;
        j["topology"] = {{"random", r}};
    }
    if (const auto* x0 = std::get_if<std::vector<double>>(&cfg.x0))
        j["x0"] = *x0;
    else
        j["x0"] = {{"random", "uniform"}};
    j["channel"] = cfg.channel;
    j["protocol"] = std::string(to_string(cfg.protocol));
    j["link"] = cfg.link == LinkKind::airlink ? "airlink" : "baseband";
    if (cfg.link == LinkKind::baseband)
        j["baseband"] = {{"m", cfg.baseband.m},
                         {"noise_sigma2", cfg.baseband.noise_sigma2},
                         {"pilot_noise_sigma2", cfg.baseband.pilot_noise_sigma2}};
    j["ranges"] = cfg.ranges;
    j["rel_tol"] = cfg.rel_tol;
    j["max_iters"] = cfg.max_iters;
    j["seed"] = cfg.seed;
    return j;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("AIRMAX_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (errno != 0 || *end != '\0' || raw[0] == '-')
        throw ConfigError("AIRMAX_SEED", "expected an unsigned integer");
    return static_cast<std::uint64_t>(v);
}

ResolvedScenario resolve(const ScenarioConfig& cfg) {
    const Stream root = scenario_stream(cfg.seed);
    DirectedTopology topology = [&] {
        if (const auto* g = std::get_if<DirectedTopology>(&cfg.topology)) return *g;
        const auto& spec = std::get<RandomTopologySpec>(cfg.topology);
        const Stream s = spec.seed ? scenario_stream(*spec.seed) : root;
        return random_strongly_connected(spec.n, spec.density, s.split("topology"));
    }();
    std::vector<double> x0;
    if (const auto* given = std::get_if<std::vector<double>>(&cfg.x0)) {
        x0 = *given;
    } else {
        Stream s = root.split("x0");
        x0.resize(topology.node_count());
        for (double& v : x0)
            v = std::min(cfg.ranges.s_max(),
                         cfg.ranges.s_min() + (cfg.ranges.s_max() - cfg.ranges.s_min()) * s.uniform());
    }
    return {std::move(topology), std::move(x0)};
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    auto [topology, x0] = resolve(cfg);
    const Stream channel = scenario_stream(cfg.seed).split("channel");
    std::shared_ptr<const Link> link;
    if (cfg.link == LinkKind::airlink) {
        link = std::make_shared<AirLink>(cfg.channel, cfg.ranges, channel);
    } else {
        BasebandConfig bb = cfg.baseband;
        bb.ranges = cfg.ranges;
        link = std::make_shared<BasebandLink>(bb, cfg.channel, channel);
    }
    return run(RunSpec{std::move(topology), std::move(x0), cfg.protocol, std::move(link),
                       cfg.rel_tol, cfg.max_iters});
}

std::vector<BatchOutcome> run_batch(const std::filesystem::path& dir,
                                    const std::filesystem::path& out_dir, unsigned workers,
                                    std::optional<std::uint64_t> seed_override) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError(dir.string(), "not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            entry.path().filename().string().find(".summary.") == std::string::npos)
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    fs::create_directories(out_dir);

    std::vector<BatchOutcome> outcomes(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            BatchOutcome& o = outcomes[i];
            o.scenario = files[i];
            const std::string stem = files[i].stem().string();
            o.trace_csv = out_dir / (stem + ".trace.csv");
            o.summary_json = out_dir / (stem + ".summary.json");
            try {
                ScenarioConfig cfg = load_scenario(files[i]);
                if (seed_override) cfg.seed = *seed_override;
                const RunResult result = run_scenario(cfg);
                std::ofstream trace(o.trace_csv);
                write_trace_csv(trace, result.trace);
                std::ofstream summary(o.summary_json);
                summary << summary_json(result, cfg.protocol).dump(2) << '\n';
                o.ok = static_cast<bool>(trace) && static_cast<bool>(summary);
                if (!o.ok) o.error = "failed to write outputs";
            } catch (const std::exception& e) {
                o.error = e.what();
            }
        }
    };
    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(files.size())));
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t + 1 < count; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    return outcomes;
}

}  // namespace airmax
