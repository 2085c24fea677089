// Command-line entry point: scenario runs and standalone oracle suites.

#include "rendezvous/analysis.hpp"
#include "rendezvous/config.hpp"
#include "rendezvous/csv.hpp"
#include "rendezvous/output.hpp"
#include "rendezvous/sim.hpp"
#include "rendezvous/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

namespace fs = std::filesystem;
using rendezvous::ScenarioConfig;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out.flush()) {
        throw std::runtime_error("write failure on '" + path.string() + "'");
    }
}

int do_run(const std::string& scenario, std::optional<std::uint64_t> seed,
           std::optional<int> runs, std::string out_dir, bool dump_gains,
           const std::string& mode, bool compare_modes) {
    ScenarioConfig config = rendezvous::resolve_scenario(scenario);
    if (seed) config.master_seed = *seed;
    if (runs) config.monte_carlo_runs = *runs;
    if (mode == "local") config.gain_mode = rendezvous::GainMode::Local;
    if (mode == "global") config.gain_mode = rendezvous::GainMode::Global;
    config.validate();

    if (out_dir.empty()) {
        const char* env = std::getenv("RENDEZVOUS_OUT_DIR");
        out_dir = env ? env : "out";
    }
    fs::create_directories(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    const rendezvous::GainSchedule schedule = config.synthesize_gains();
    std::vector<rendezvous::EpisodeTrace> first;
    const rendezvous::BatchStats stats = rendezvous::run_monte_carlo(config, schedule, &first);

    std::vector<std::string> outputs;
    const fs::path trace_path = fs::path(out_dir) / "trace_run000.csv";
    rendezvous::emit_trace_csv(first.front(), trace_path.string());
    outputs.push_back(trace_path.string());

    std::optional<rendezvous::GainModeComparison> mode_check;
    if (compare_modes) {
        mode_check = rendezvous::compare_gain_modes(config);
    }

    const fs::path summary_path = fs::path(out_dir) / "summary.json";
    write_text(summary_path,
               rendezvous::build_summary(config, stats, schedule, first.front(), mode_check)
                       .dump(2) +
                   "\n");
    outputs.push_back(summary_path.string());

    if (dump_gains) {
        const fs::path gains_path = fs::path(out_dir) / "gains.csv";
        rendezvous::dump_gain_schedule_csv(schedule, gains_path.string());
        outputs.push_back(gains_path.string());
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const fs::path manifest_path = fs::path(out_dir) / "manifest.json";
    write_text(manifest_path,
               rendezvous::build_manifest(config, outputs, wall).dump(2) + "\n");

    int converged = 0;
    for (int step : stats.convergence_steps) {
        if (step >= 0) ++converged;
    }
    std::cout << "scenario " << config.name << ": " << stats.runs << " run(s), "
              << converged << " converged; outputs in " << out_dir << "\n";
    return 0;
}

int do_verify(const std::string& suite) {
    const rendezvous::SuiteResult result = rendezvous::run_suite(suite);
    for (const std::string& line : result.lines) {
        std::cout << "  " << line << "\n";
    }
    std::cout << "suite " << result.name << ": " << (result.pass ? "PASS" : "FAIL") << "\n";
    return result.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed LQG rendezvous simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    std::string mode;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    bool dump_gains = false;
    bool compare_modes = false;

    CLI::App* run = app.add_subcommand("run", "simulate a scenario");
    run->add_option("--scenario", scenario, "preset name or config file path")->required();
    run->add_option("--seed", seed, "master seed override");
    run->add_option("--runs", runs, "Monte Carlo run count override");
    run->add_option("--out", out_dir, "output directory (default $RENDEZVOUS_OUT_DIR or ./out)");
    run->add_option("--mode", mode, "gain mode override")
        ->check(CLI::IsMember({"local", "global"}));
    run->add_flag("--dump-gains", dump_gains, "write the synthesized gain schedule");
    run->add_flag("--compare-modes", compare_modes,
                  "include a local-vs-global gain consistency check in the summary");

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a standalone oracle suite");
    verify->add_option("--suite", suite, "kalman | riccati | lemma1 | bound")
        ->required()
        ->check(CLI::IsMember({"kalman", "riccati", "lemma1", "bound"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return do_run(scenario, seed, runs, out_dir, dump_gains, mode, compare_modes);
        }
        return do_verify(suite);
    } catch (const rendezvous::ConfigError& e) {
        std::cerr << "CONFIG_ERROR: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "RUNTIME_ERROR: " << e.what() << "\n";
        return 1;
    }
}
