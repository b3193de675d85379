#include <cstdlib>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "muskin/cli.hpp"
#include "muskin/errors.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

/// --threads, then MU_SKIN_THREADS, then the config, then the hardware.
int resolve_threads(int flag, int from_config) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("MU_SKIN_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw muskin::ConfigError(std::string("MU_SKIN_THREADS must be a positive integer, got '") + env + "'");
        return static_cast<int>(v);
    }
    if (from_config > 0) return from_config;
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-analytic Maxwell solver and boundary-layer verification harness for high-permeability conductors"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    bool verbose = false;
    const std::pair<const char*, const char*> kinds[] = {
        {"rates", "convergence rates of the composite expansion against the exact solution"},
        {"profiles", "boundary-layer profiles and their recurrence residuals"},
        {"scalar", "uniform estimate sweep for the scalar transmission problem"},
        {"stability", "whole-domain stability quotient over a permeability sweep"},
        {"constants", "stability constants, curl bound and div(mu H) check"},
        {"exact", "exact modal solution sampled at points"},
    };
    for (const auto& [name, help] : kinds) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
        sub->add_option("-o,--out", out_dir, "output directory (default: out/<experiment>)");
        sub->add_option("-j,--threads", threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("-v,--verbose", verbose, "echo the summary to stderr");
    }
    CLI11_PARSE(app, argc, argv);

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        const muskin::ExperimentKind kind = muskin::parse_kind(name);
        const muskin::ExperimentConfig cfg =
            config_path.empty() ? muskin::ExperimentConfig{} : muskin::load_config(config_path);
        if (out_dir.empty()) out_dir = "out/" + name;
        const int n = resolve_threads(threads, cfg.threads);
        const muskin::RunResult r = muskin::run_experiment(kind, cfg, out_dir, n, verbose);
        std::cout << r.summary;
        std::cout << "outputs written to " << out_dir << "\n";
        return r.pass ? 0 : kExitFail;
    } catch (const muskin::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        // Parameter-domain and compatibility errors: the inputs, not the solver, are at fault.
        std::cerr << "input error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}
