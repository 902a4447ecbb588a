#pragma once

// Config-driven experiment front end: datum presets, single runs, the
// full-vs-static comparison, parameter sweeps.

#include <string>
#include <vector>

#include "ksns/diagnostics.hpp"
#include "ksns/state.hpp"
#include "ksns/timeint.hpp"

namespace ksns {

// Configuration problems (unknown keys, bad values, missing presets).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatumSpec {
    std::string preset = "constant";  // constant|single_mode|gaussian_bump|random_band
    double mass = 2.0 * pi * pi;      // sets rho_m = mass / (2 pi^2)
    double amplitude = 0.0;
    int k1 = 1, k2 = 1;                         // single_mode
    double center_x1 = 0.0, center_x2 = pi / 2.0;  // gaussian_bump
    double sigma = 0.3;
    int band_k1 = 4, band_k2 = 4;  // random_band
    bool omega_from_static = false;  // NS only: curl of the static-law velocity
};

struct RunConfig {
    ModelParams params;  // grid, g, B, dt policy, detector thresholds
    FlowVariant variant = FlowVariant::NoFlow;
    Scheme scheme = Scheme::ImexCNAB2;
    double t_end = 1.0;
    double sample_every = 0.01;
    DatumSpec datum;
    unsigned seed = 0;
    std::string raw_text;  // verbatim config echo for outcome.json
};

struct SweepConfig {
    RunConfig base;
    std::vector<double> g_values;
    std::vector<double> B_values;
    int workers = 1;
};

// INI parsing ([run], [datum], [detector], [sweep] sections). Throws
// ConfigError on unknown sections/keys or malformed values.
RunConfig parse_run_config(const std::string& text);
SweepConfig parse_sweep_config(const std::string& text);
RunConfig parse_run_config_file(const std::string& path);
SweepConfig parse_sweep_config_file(const std::string& path);

// Initial density from the preset; throws ConfigError if the result is
// negative on the grid or the preset is unknown.
Density build_datum(const DatumSpec& spec, const Grid& grid, unsigned seed);
SimState initial_state(const RunConfig& cfg);

struct RunResult {
    RunOutcome outcome;
    std::vector<DiagnosticsRecord> series;
    SimState final_state;
};

// In-memory trajectory: adaptive dt, detector, periodic sampling.
RunResult run_trajectory(const RunConfig& cfg);

// run_trajectory + diagnostics.csv, final.ckpt, outcome.json under out_dir.
RunOutcome run_single(const RunConfig& cfg, const std::string& out_dir);

struct ComparisonPoint {
    double B;
    double sup_r_sq;  // sup_t ||rho_full - rho_static||^2
    double sup_v_sq;  // sup_t ||u_full - u_static||^2
};

// Lockstep full-NS vs static trajectories from the same datum, one pair per
// B; writes compare_B*.csv files plus compare_summary.csv when out_dir is
// nonempty.
std::vector<ComparisonPoint> run_comparison(const RunConfig& cfg,
                                            const std::vector<double>& B_list,
                                            const std::string& out_dir);

struct SweepRow {
    double g;
    double B;
    RunOutcome outcome;
    double max_E2;
    double max_rho_inf;
};

// One trajectory per (g, B) cell; rows deterministic and sorted by (g, B)
// regardless of worker count. Writes sweep.csv when out_dir is nonempty.
std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const std::string& out_dir,
                                int workers);

}  // namespace ksns
