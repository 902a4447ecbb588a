#include "ksns/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ksns/chemotaxis.hpp"
#include "ksns/operators.hpp"
#include "ksns/transforms.hpp"
#include "ksns/velocity.hpp"

namespace ksns {

namespace {

// ---------------------------------------------------------------- INI parsing

struct IniData {
    // section -> key -> value, plus insertion-order bookkeeping for errors
    std::map<std::string, std::map<std::string, std::string>> sections;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

IniData parse_ini(const std::string& text) {
    IniData ini;
    std::istringstream in(text);
    std::string line, section;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line.substr(0, line.find_first_of("#;")));
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("config line " + std::to_string(lineno) +
                                                   ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            ini.sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
        ini.sections[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return ini;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d) throw ConfigError("config: expected integer for " + key);
    return i;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(v);
    while (in >> item) {
        if (!item.empty() && item.back() == ',') item.pop_back();
        if (item.empty()) continue;
        out.push_back(to_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

FlowVariant variant_from(const std::string& v) {
    if (v == "noflow") return FlowVariant::NoFlow;
    if (v == "darcy") return FlowVariant::Darcy;
    if (v == "static_stokes") return FlowVariant::StaticStokes;
    if (v == "navier_stokes") return FlowVariant::NavierStokes;
    throw ConfigError("config: unknown variant '" + v + "'");
}

Scheme scheme_from(const std::string& v) {
    if (v == "imex_euler") return Scheme::ImexEuler;
    if (v == "imex_cnab2") return Scheme::ImexCNAB2;
    throw ConfigError("config: unknown scheme '" + v + "'");
}

void apply_run_section(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    int n1 = cfg.params.grid.n1 ? cfg.params.grid.n1 : 128;
    int n2 = cfg.params.grid.n2 ? cfg.params.grid.n2 : 65;
    for (const auto& [k, v] : kv) {
        if (k == "grid_n1") n1 = to_int(k, v);
        else if (k == "grid_n2") n2 = to_int(k, v);
        else if (k == "variant") cfg.variant = variant_from(v);
        else if (k == "scheme") cfg.scheme = scheme_from(v);
        else if (k == "g") cfg.params.g = to_double(k, v);
        else if (k == "B") cfg.params.B = to_double(k, v);
        else if (k == "t_end") cfg.t_end = to_double(k, v);
        else if (k == "sample_every") cfg.sample_every = to_double(k, v);
        else if (k == "dt_init") cfg.params.dt_init = to_double(k, v);
        else if (k == "dt_min") cfg.params.dt_min = to_double(k, v);
        else if (k == "dt_max") cfg.params.dt_max = to_double(k, v);
        else if (k == "cfl_safety") cfg.params.cfl_safety = to_double(k, v);
        else if (k == "seed") cfg.seed = static_cast<unsigned>(to_int(k, v));
        else throw ConfigError("config: unknown key [run] " + k);
    }
    try {
        cfg.params.grid = Grid(n1, n2);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (cfg.params.g <= 0.0 || cfg.params.B <= 0.0)
        throw ConfigError("config: g and B must be positive");
    if (cfg.t_end <= 0.0 || cfg.sample_every <= 0.0)
        throw ConfigError("config: t_end and sample_every must be positive");
}

void apply_datum_section(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    DatumSpec& d = cfg.datum;
    for (const auto& [k, v] : kv) {
        if (k == "preset") d.preset = v;
        else if (k == "mass") d.mass = to_double(k, v);
        else if (k == "amplitude") d.amplitude = to_double(k, v);
        else if (k == "k1") d.k1 = to_int(k, v);
        else if (k == "k2") d.k2 = to_int(k, v);
        else if (k == "center_x1") d.center_x1 = to_double(k, v);
        else if (k == "center_x2") d.center_x2 = to_double(k, v);
        else if (k == "sigma") d.sigma = to_double(k, v);
        else if (k == "band_k1") d.band_k1 = to_int(k, v);
        else if (k == "band_k2") d.band_k2 = to_int(k, v);
        else if (k == "omega_from_static") d.omega_from_static = to_bool(k, v);
        else throw ConfigError("config: unknown key [datum] " + k);
    }
    if (d.mass <= 0.0) throw ConfigError("config: datum mass must be positive");
}

void apply_detector_section(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "rho_inf_max") cfg.params.rho_inf_max = to_double(k, v);
        else if (k == "tail_frac_max") cfg.params.tail_frac_max = to_double(k, v);
        else if (k == "dt_pin_steps") cfg.params.dt_pin_steps = to_int(k, v);
        else throw ConfigError("config: unknown key [detector] " + k);
    }
}

RunConfig run_config_from_ini(const IniData& ini, const std::string& text,
                              bool allow_sweep_section) {
    RunConfig cfg;
    cfg.raw_text = text;
    for (const auto& [name, kv] : ini.sections) {
        if (name == "run") apply_run_section(cfg, kv);
        else if (name == "datum") apply_datum_section(cfg, kv);
        else if (name == "detector") apply_detector_section(cfg, kv);
        else if (name == "sweep" && allow_sweep_section) continue;
        else throw ConfigError("config: unknown section [" + name + "]");
    }
    if (!ini.sections.count("run")) throw ConfigError("config: missing [run] section");
    // cross-section validation (section application order is alphabetical)
    if (cfg.datum.omega_from_static && cfg.variant != FlowVariant::NavierStokes)
        throw ConfigError("config: omega_from_static requires variant navier_stokes");
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// ------------------------------------------------------------------- presets

// Gaussian periodized over x1 in T = [-pi, pi) and even-reflected over the
// x2 walls (period 2 pi in the reflected coordinate), so it lies in CosY.
double reflected_gaussian(double x1, double x2, const DatumSpec& d) {
    double v1 = 0.0, v2 = 0.0;
    const double s2 = 2.0 * d.sigma * d.sigma;
    for (int m = -4; m <= 4; ++m) {
        const double dx1 = x1 - d.center_x1 + 2.0 * pi * m;
        v1 += std::exp(-dx1 * dx1 / s2);
        const double dm = x2 - d.center_x2 + 2.0 * pi * m;
        const double dp = x2 + d.center_x2 + 2.0 * pi * m;
        v2 += std::exp(-dm * dm / s2) + std::exp(-dp * dp / s2);
    }
    return v1 * v2;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    return run_config_from_ini(parse_ini(text), text, /*allow_sweep_section=*/false);
}

SweepConfig parse_sweep_config(const std::string& text) {
    const IniData ini = parse_ini(text);
    SweepConfig sweep;
    sweep.base = run_config_from_ini(ini, text, /*allow_sweep_section=*/true);
    const auto it = ini.sections.find("sweep");
    if (it == ini.sections.end()) throw ConfigError("config: missing [sweep] section");
    for (const auto& [k, v] : it->second) {
        if (k == "g_values") sweep.g_values = to_list(k, v);
        else if (k == "B_values") sweep.B_values = to_list(k, v);
        else if (k == "workers") sweep.workers = to_int(k, v);
        else throw ConfigError("config: unknown key [sweep] " + k);
    }
    if (sweep.g_values.empty() || sweep.B_values.empty())
        throw ConfigError("config: sweep axes must be nonempty");
    if (sweep.workers < 1) throw ConfigError("config: workers must be >= 1");
    return sweep;
}

RunConfig parse_run_config_file(const std::string& path) {
    return parse_run_config(read_file(path));
}

SweepConfig parse_sweep_config_file(const std::string& path) {
    return parse_sweep_config(read_file(path));
}

Density build_datum(const DatumSpec& spec, const Grid& grid, unsigned seed) {
    const double rho_m = spec.mass / (2.0 * pi * pi);
    SpectralField f(grid, BasisTag::CosY);

    if (spec.preset == "constant") {
        f.coef(0, 0) = rho_m;
    } else if (spec.preset == "single_mode") {
        if (spec.k1 < 0 || spec.k1 >= grid.n1 / 2 || spec.k2 < 0 || spec.k2 >= grid.n2)
            throw ConfigError("datum: single_mode wavenumber out of range");
        f.coef(0, 0) = rho_m;
        // physical amplitude: account for the conjugate k1 partner
        const double c = (spec.k1 == 0) ? spec.amplitude : spec.amplitude / 2.0;
        f.coef(spec.k1, spec.k2) += c;
    } else if (spec.preset == "gaussian_bump") {
        std::vector<double> vals(static_cast<size_t>(grid.n1) * grid.n2);
        for (int i = 0; i < grid.n1; ++i)
            for (int j = 0; j < grid.n2; ++j)
                vals[static_cast<size_t>(i) * grid.n2 + j] =
                    reflected_gaussian(grid.x1(i), grid.x2(j), spec);
        SpectralField bump = to_spectral(vals, grid, BasisTag::CosY);
        const double bump_mean = bump.coef(0, 0).real();
        if (bump_mean <= 0.0) throw ConfigError("datum: degenerate gaussian bump");
        bump *= rho_m / bump_mean;  // all mass carried by the bump
        f = bump;
    } else if (spec.preset == "random_band") {
        if (spec.band_k1 < 1 || spec.band_k2 < 1)
            throw ConfigError("datum: random_band limits must be >= 1");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        SpectralField fluct(grid, BasisTag::CosY);
        for (int k1 = 0; k1 <= std::min(spec.band_k1, grid.n1 / 2 - 1); ++k1)
            for (int k2 = 0; k2 <= std::min(spec.band_k2, grid.n2 - 1); ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                const double re = dist(rng), im = dist(rng);
                fluct.coef(k1, k2) = complex{re, k1 == 0 ? 0.0 : im};
            }
        const double sup = max_abs_phys(fluct);
        if (sup > 0.0 && spec.amplitude > 0.0) fluct *= spec.amplitude / sup;
        // nonnegativity scaling: keep the datum a valid density
        const double lo = min_phys(fluct);
        if (rho_m + lo < 0.0) fluct *= 0.99 * rho_m / (-lo);
        f = fluct;
        f.coef(0, 0) = rho_m;
    } else {
        throw ConfigError("datum: unknown preset '" + spec.preset + "'");
    }

    const Density rho{f};
    if (min_phys(rho.field) < -1e-12 * std::max(1.0, rho_m))
        throw ConfigError("datum: resulting density is negative on the grid");
    return rho;
}

SimState initial_state(const RunConfig& cfg) {
    SimState s;
    s.params = cfg.params;
    s.flow.variant = cfg.variant;
    s.density = build_datum(cfg.datum, cfg.params.grid, cfg.seed);
    if (cfg.variant == FlowVariant::NavierStokes) {
        if (cfg.datum.omega_from_static) {
            const Velocity u = static_stokes_velocity(s.density, cfg.params.g);
            s.flow.omega = vorticity_of(u);
        } else {
            s.flow.omega = SpectralField(cfg.params.grid, BasisTag::SinY);
        }
    }
    return s;
}

RunResult run_trajectory(const RunConfig& cfg) {
    RunResult res;
    Integrator integ(initial_state(cfg), StepController::from_params(cfg.params, cfg.scheme));
    BlowupDetector detector;

    double next_sample = 0.0;
    double dt = cfg.params.dt_init;
    res.series.push_back(sample(integ.state(), std::nullopt, dt));
    next_sample += cfg.sample_every;

    res.outcome.kind = RunOutcome::Kind::CompletedHorizon;
    while (integ.state().t < cfg.t_end - 1e-12) {
        dt = choose_dt(integ.state(), integ.controller());
        const bool pinned = dt <= cfg.params.dt_min * (1.0 + 1e-12);
        dt = std::min(dt, cfg.t_end - integ.state().t);
        integ.step(dt);

        if (auto stop = detector.update(integ.state(), dt, pinned)) {
            res.outcome = *stop;
            break;
        }
        if (integ.state().t >= next_sample - 1e-12 || integ.state().t >= cfg.t_end - 1e-12) {
            res.series.push_back(sample(integ.state(), std::nullopt, dt));
            while (next_sample <= integ.state().t + 1e-12) next_sample += cfg.sample_every;
        }
    }
    if (res.outcome.kind == RunOutcome::Kind::CompletedHorizon) {
        res.outcome.t_final = integ.state().t;
        res.outcome.reason = "reached t_end";
        res.outcome.metric = "t";
        res.outcome.value = integ.state().t;
    } else if (res.series.back().t < integ.state().t && integ.state().density.field.is_finite()) {
        res.series.push_back(sample(integ.state(), std::nullopt, dt));
    }
    res.final_state = integ.state();
    return res;
}

namespace {

void write_outcome_json(const RunOutcome& o, const RunConfig& cfg, const std::string& path) {
    nlohmann::json j;
    j["kind"] = to_string(o.kind);
    j["t_final"] = o.t_final;
    j["reason"] = o.reason;
    j["metric"] = o.metric;
    j["value"] = o.value;
    j["config"] = cfg.raw_text;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

RunOutcome run_single(const RunConfig& cfg, const std::string& out_dir) {
    const RunResult res = run_trajectory(cfg);
    write_csv(res.series, out_dir + "/diagnostics.csv");
    checkpoint_write_file(res.final_state, out_dir + "/final.ckpt");
    write_outcome_json(res.outcome, cfg, out_dir + "/outcome.json");
    return res.outcome;
}

std::vector<ComparisonPoint> run_comparison(const RunConfig& cfg,
                                            const std::vector<double>& B_list,
                                            const std::string& out_dir) {
    std::vector<ComparisonPoint> summary;
    for (const double B : B_list) {
        RunConfig full = cfg;
        full.variant = FlowVariant::NavierStokes;
        full.params.B = B;
        RunConfig stat = cfg;
        stat.variant = FlowVariant::StaticStokes;
        stat.params.B = B;

        Integrator fi(initial_state(full), StepController::from_params(full.params, full.scheme));
        Integrator si(initial_state(stat), StepController::from_params(stat.params, stat.scheme));

        std::ofstream csv;
        if (!out_dir.empty()) {
            char name[64];
            std::snprintf(name, sizeof name, "/compare_B%g.csv", B);
            csv.open(out_dir + name, std::ios::binary);
            if (!csv) throw std::runtime_error("cannot open comparison csv");
            csv << "t,r_sq,v_sq\n";
        }

        ComparisonPoint point{B, 0.0, 0.0};
        auto log_point = [&]() {
            const SpectralField r = fi.state().density.field - si.state().density.field;
            const Velocity uf = velocity_of(fi.state());
            const Velocity us = velocity_of(si.state());
            const double r_sq = l2_norm_sq(r);
            const double v_sq = l2_norm_sq(uf.u1 - us.u1) + l2_norm_sq(uf.u2 - us.u2);
            point.sup_r_sq = std::max(point.sup_r_sq, r_sq);
            point.sup_v_sq = std::max(point.sup_v_sq, v_sq);
            if (csv.is_open()) {
                char row[128];
                std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", fi.state().t, r_sq, v_sq);
                csv << row;
            }
        };

        log_point();
        while (fi.state().t < cfg.t_end - 1e-12) {
            // lockstep: both trajectories take the smaller of the two CFL steps
            double dt = std::min(choose_dt(fi.state(), fi.controller()),
                                 choose_dt(si.state(), si.controller()));
            dt = std::min(dt, cfg.t_end - fi.state().t);
            fi.step(dt);
            si.step(dt);
            if (!fi.state().density.field.is_finite() || !si.state().density.field.is_finite())
                break;
            log_point();
        }
        summary.push_back(point);
    }

    if (!out_dir.empty()) {
        std::ofstream csv(out_dir + "/compare_summary.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open comparison summary");
        csv << "B,sup_r_sq,sup_v_sq\n";
        for (const auto& p : summary) {
            char row[128];
            std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g\n", p.B, p.sup_r_sq, p.sup_v_sq);
            csv << row;
        }
    }
    return summary;
}

std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const std::string& out_dir,
                                int workers) {
    struct Cell {
        size_t gi, bi;
    };
    std::vector<Cell> cells;
    for (size_t gi = 0; gi < sweep.g_values.size(); ++gi)
        for (size_t bi = 0; bi < sweep.B_values.size(); ++bi) cells.push_back({gi, bi});

    std::vector<SweepRow> rows(cells.size());
    std::mutex next_mtx;
    size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            size_t idx;
            {
                std::lock_guard<std::mutex> lock(next_mtx);
                if (next >= cells.size()) return;
                idx = next++;
            }
            const Cell c = cells[idx];
            RunConfig cfg = sweep.base;
            cfg.params.g = sweep.g_values[c.gi];
            cfg.params.B = sweep.B_values[c.bi];
            SweepRow row{cfg.params.g, cfg.params.B, {}, 0.0, 0.0};
            try {
                const RunResult res = run_trajectory(cfg);
                row.outcome = res.outcome;
                for (const auto& r : res.series) {
                    row.max_E2 = std::max(row.max_E2, r.E2);
                    row.max_rho_inf = std::max(row.max_rho_inf, r.rho_inf);
                }
            } catch (const std::exception& e) {
                row.outcome.kind = RunOutcome::Kind::BlowupDetected;
                row.outcome.reason = std::string("run failed: ") + e.what();
                row.outcome.metric = "error";
            }
            rows[idx] = row;
        }
    };

    const int n = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // deterministic output order regardless of completion order
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.g != b.g ? a.g < b.g : a.B < b.B;
    });

    if (!out_dir.empty()) {
        std::ofstream csv(out_dir + "/sweep.csv", std::ios::binary);
        if (!csv) throw std::runtime_error("cannot open sweep.csv");
        csv << "g,B,outcome,t_final,max_E2,max_rho_inf\n";
        for (const auto& r : rows) {
            char row[192];
            std::snprintf(row, sizeof row, "%.17g,%.17g,%s,%.17g,%.17g,%.17g\n", r.g, r.B,
                          to_string(r.outcome.kind), r.outcome.t_final, r.max_E2, r.max_rho_inf);
            csv << row;
        }
    }
    return rows;
}

}  // namespace ksns
