#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "airmax/error.hpp"
#include "airmax/nomographic.hpp"
#include "airmax/scenario.hpp"
#include "airmax/tdma.hpp"
#include "airmax/trace_io.hpp"

namespace airmax {
namespace {

constexpr int kFailure = 2;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("failed writing " + path);
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

int cmd_run(const std::string& scenario, const std::string& trace_path,
            const std::string& summary_path) {
    ScenarioConfig cfg = load_scenario(scenario);
    if (auto seed = seed_from_env()) cfg.seed = *seed;
    const RunResult result = run_scenario(cfg);
    const std::string summary = summary_json(result, cfg.protocol).dump(2) + "\n";
    if (!trace_path.empty()) {
        std::ostringstream csv;
        write_trace_csv(csv, result.trace);
        write_file(trace_path, csv.str());
    }
    if (!summary_path.empty())
        write_file(summary_path, summary);
    else if (trace_path.empty())
        std::cout << summary;
    return 0;
}

int cmd_batch(const std::string& dir, std::string out_dir, unsigned workers) {
    if (out_dir.empty()) out_dir = dir;
    const auto outcomes = run_batch(dir, out_dir, workers, seed_from_env());
    int status = 0;
    for (const auto& o : outcomes) {
        if (o.ok) {
            std::cout << o.scenario.filename().string() << ": ok\n";
        } else {
            std::cerr << o.scenario.filename().string() << ": " << o.error << '\n';
            status = kFailure;
        }
    }
    if (outcomes.empty()) std::cerr << "batch: no scenario files in " << dir << '\n';
    return status;
}

int cmd_compare(std::size_t n_min, std::size_t n_max, std::size_t trials, std::uint64_t seed,
                double density, double mean_degree, unsigned workers, const std::string& out) {
    if (n_min > n_max) throw InvalidArgument("--n-min must not exceed --n-max");
    CompareOptions opt;
    opt.sizes = size_range(n_min, n_max);
    opt.trials_per_n = trials;
    opt.base_seed = seed_from_env().value_or(seed);
    opt.density = density;
    opt.mean_degree = mean_degree;
    opt.workers = workers;
    std::ostringstream csv;
    write_comparison_csv(csv, compare_tdma(opt));
    if (out.empty())
        std::cout << csv.str();
    else
        write_file(out, csv.str());
    return 0;
}

int cmd_demo(const std::string& which_name, std::vector<double> ps, std::vector<double> xs,
             double noise, std::uint64_t seed, const std::string& out) {
    Approximation which;
    if (which_name == "log-sum-exp")
        which = Approximation::log_sum_exp;
    else if (which_name == "sum-of-powers")
        which = Approximation::sum_of_powers;
    else
        throw InvalidArgument("--approximation must be log-sum-exp or sum-of-powers");
    const SignalRanges ranges = SignalRanges::defaults();
    if (noise < 0) noise = default_demo_noise(ranges);
    const auto cfg = NomographicConfig::uniform(1.0, xs.size());
    const auto rows = demo_failure_under_pipeline(xs, ps, cfg, which, ranges, noise,
                                                  Stream(mix64(seed_from_env().value_or(seed))));
    std::ostringstream csv;
    write_demo_csv(csv, rows);
    if (out.empty())
        std::cout << csv.str();
    else
        write_file(out, csv.str());
    return 0;
}

int cmd_validate(const std::string& path) {
    load_scenario(path);
    std::cout << "ok\n";
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Max-consensus over a fading multiple-access channel"};
    app.require_subcommand(1);

    std::string scenario, trace_path, summary_path;
    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("scenario", scenario, "Scenario JSON file")->required();
    run->add_option("--trace", trace_path, "Write the trace CSV here");
    run->add_option("--summary", summary_path, "Write the summary JSON here");

    std::string batch_dir, batch_out;
    unsigned workers = default_workers();
    auto* batch = app.add_subcommand("batch", "Run every *.json scenario in a directory");
    batch->add_option("dir", batch_dir, "Scenario directory")->required();
    batch->add_option("--out", batch_out, "Output directory (default: the scenario directory)");
    batch->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));

    std::size_t n_min = 3, n_max = 30, trials = 5;
    std::uint64_t seed = 0;
    double density = CompareOptions{}.density;
    double mean_degree = CompareOptions{}.mean_degree;
    std::string compare_out;
    auto* compare = app.add_subcommand("compare-tdma", "TDMA versus over-the-air slot counts");
    compare->add_option("--n-min", n_min, "Smallest network size")->check(CLI::Range(3, 100));
    compare->add_option("--n-max", n_max, "Largest network size")->check(CLI::Range(3, 100));
    compare->add_option("--trials", trials, "Trials per size")->check(CLI::PositiveNumber);
    compare->add_option("--seed", seed, "Base seed");
    auto* density_opt = compare->add_option("--density", density, "Fixed extra-arc probability")
                            ->check(CLI::Range(0.0, 1.0));
    compare->add_option("--mean-degree", mean_degree, "Mean number of extra in-neighbors (default 2)")
        ->check(CLI::PositiveNumber)
        ->excludes(density_opt);
    compare->add_option("--workers", workers, "Worker threads")->check(CLI::Range(1u, 1024u));
    compare->add_option("--out", compare_out, "Comparison CSV (default: stdout)");

    std::string approximation = "log-sum-exp", demo_out;
    std::vector<double> ps{1, 2, 5, 10, 20, 50, 100, 200};
    std::vector<double> xs{1, 2, 3};
    double noise = -1;
    std::uint64_t demo_seed = 0;
    auto* demo = app.add_subcommand("demo-nomographic",
                                    "Approximation error of a smooth max through the analog link");
    demo->add_option("--approximation", approximation, "log-sum-exp or sum-of-powers");
    demo->add_option("--p", ps, "Sharpness values")->delimiter(',')->check(CLI::PositiveNumber);
    demo->add_option("--x", xs, "Inputs")->delimiter(',');
    demo->add_option("--noise", noise, "Power-domain noise deviation (default 1e-3 of |P|)");
    demo->add_option("--seed", demo_seed, "Noise seed");
    demo->add_option("--out", demo_out, "Demo CSV (default: stdout)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("scenario", validate_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kFailure;
    }

    try {
        if (*run) return cmd_run(scenario, trace_path, summary_path);
        if (*batch) return cmd_batch(batch_dir, batch_out, workers);
        if (*compare && density_opt->count() > 0) mean_degree = 0.0;
        if (*compare) return cmd_compare(n_min, n_max, trials, seed, density, mean_degree, workers, compare_out);
        if (*demo) return cmd_demo(approximation, ps, xs, noise, demo_seed, demo_out);
        if (*validate) return cmd_validate(validate_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    } catch (...) {
        std::cerr << "error: unexpected failure\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace airmax
