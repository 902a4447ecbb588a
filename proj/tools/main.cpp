#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ksns/experiment.hpp"
#include "ksns/plots.hpp"
#include "ksns/verify.hpp"

namespace {

// Transform execution is serial per trajectory; the env var is validated as
// a cap on internal parallelism.
int thread_cap_from_env() {
    const char* env = std::getenv("KSNS_THREADS");
    if (!env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
        throw ksns::ConfigError("KSNS_THREADS must be a positive integer");
    return static_cast<int>(v);
}

void ensure_dir(const std::string& out) {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + out);
}

void print_outcome(const ksns::RunOutcome& o) {
    std::cout << ksns::to_string(o.kind) << " t_final=" << o.t_final << " (" << o.reason << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keller-Segel / buoyant-flow channel simulator"};
    app.require_subcommand(1);

    std::string config, out = ".";
    int workers = 0;
    long seed = -1;
    std::vector<std::string> csvs;

    auto* run = app.add_subcommand("run", "integrate one trajectory from a config");
    run->add_option("--config", config, "INI config path")->required();
    run->add_option("--out", out, "output directory");
    run->add_option("--seed", seed, "override the datum seed");

    auto* compare = app.add_subcommand(
        "compare", "lockstep Navier-Stokes vs static-law runs over the [sweep] B values");
    compare->add_option("--config", config, "INI config path (with [sweep] B_values)")->required();
    compare->add_option("--out", out, "output directory");
    compare->add_option("--seed", seed, "override the datum seed");

    auto* sweep = app.add_subcommand("sweep", "one trajectory per (g, B) cell");
    sweep->add_option("--config", config, "INI config path (with [sweep])")->required();
    sweep->add_option("--out", out, "output directory");
    sweep->add_option("--workers", workers, "worker thread count override");
    sweep->add_option("--seed", seed, "override the datum seed");

    auto* plot = app.add_subcommand("plot", "emit SVG plots from CSV artifacts");
    plot->add_option("csv", csvs, "CSV files (diagnostics / comparison / sweep)")->required();
    plot->add_option("--out", out, "output directory");

    auto* verify = app.add_subcommand("verify", "run the built-in correctness suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        (void)thread_cap_from_env();

        if (run->parsed()) {
            ksns::RunConfig cfg = ksns::parse_run_config_file(config);
            if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);
            ensure_dir(out);
            print_outcome(ksns::run_single(cfg, out));
        } else if (compare->parsed()) {
            const ksns::SweepConfig sc = ksns::parse_sweep_config_file(config);
            ksns::RunConfig cfg = sc.base;
            if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);
            ensure_dir(out);
            for (const auto& p : ksns::run_comparison(cfg, sc.B_values, out))
                std::cout << "B=" << p.B << " sup_r_sq=" << p.sup_r_sq
                          << " sup_v_sq=" << p.sup_v_sq << "\n";
        } else if (sweep->parsed()) {
            ksns::SweepConfig sc = ksns::parse_sweep_config_file(config);
            if (seed >= 0) sc.base.seed = static_cast<unsigned>(seed);
            ensure_dir(out);
            const int n = workers > 0 ? workers : sc.workers;
            const auto rows = ksns::run_sweep(sc, out, n);
            std::cout << "sweep: " << rows.size() << " cells -> " << out << "/sweep.csv\n";
        } else if (plot->parsed()) {
            ensure_dir(out);
            for (const auto& p : ksns::emit_plots(csvs, out)) std::cout << p << "\n";
        } else if (verify->parsed()) {
            return ksns::print_verify(ksns::run_verify(), std::cout) ? 0 : 1;
        }
    } catch (const ksns::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
