#include "ksns/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ksns/chemotaxis.hpp"
#include "ksns/operators.hpp"
#include "ksns/transforms.hpp"
#include "ksns/velocity.hpp"

namespace ksns {

namespace {

SpectralField fluctuation(const Density& rho) {
    SpectralField f = rho.field;
    f.coef(0, 0) = complex{0.0, 0.0};
    return f;
}

}  // namespace

DiagnosticsRecord sample(const SimState& state, const std::optional<DiagnosticsRecord>&, double dt) {
    const Density& rho = state.density;
    const double rm = mean(rho);
    DiagnosticsRecord r;
    r.t = state.t;
    r.rho_m = rm;
    r.mass = 2.0 * pi * pi * rm;
    r.min_rho = min_phys(rho.field);
    r.dt = dt;

    const SpectralField fluct = fluctuation(rho);
    r.rho_inf = max_abs_phys(fluct);
    r.E2 = l2_norm_sq(fluct);
    const Seminorms rho_semi = sobolev_seminorms(rho.field);
    r.grad_rho_sq = rho_semi.grad_sq;

    const auto [bar, tilde] = split_bar_tilde(rho);
    r.Ebar = bar.fluct_l2_sq();
    r.Etilde = l2_norm_sq(tilde);

    const SpectralField p = cos_to_sin(ddx1(rho.field));
    const SpectralField mix = inv_laplace_dirichlet(p, 1);
    r.mix_sq = l2_norm_sq(mix);
    r.h1neg_sq = inner(p, mix);

    const Velocity u = velocity_of(state);
    r.u_l2_sq = l2_norm_sq(u.u1) + l2_norm_sq(u.u2);
    const Seminorms s1 = sobolev_seminorms(u.u1);
    const Seminorms s2 = sobolev_seminorms(u.u2);
    r.grad_u_sq = s1.grad_sq + s2.grad_sq;
    {
        const auto v1 = to_physical(u.u1);
        const auto v2 = to_physical(u.u2);
        double m = 0.0;
        for (size_t i = 0; i < v1.size(); ++i)
            m = std::max(m, std::hypot(v1[i], v2[i]));
        r.u_inf = m;
    }

    r.res_ks_energy = inner(ks_rhs(rho, u), fluct) + r.grad_rho_sq - 0.5 * cubic_integral(rho);

    // ||Delta u||^2 by operator composition vs ||grad^2 u||^2 by Parseval multipliers
    const double lap_u_sq = l2_norm_sq(laplacian(u.u1)) + l2_norm_sq(laplacian(u.u2));
    r.res_hessian_identity = (s1.hess_sq + s2.hess_sq) - lap_u_sq;

    if (state.flow.variant == FlowVariant::StaticStokes) {
        r.res_static_identity = state.params.g * r.mix_sq - inner_mixed(rho.field, u.u2);
    }
    if (state.flow.variant == FlowVariant::NavierStokes) {
        const double B = state.params.B, g = state.params.g;
        const SpectralField psi = stream_from_vorticity(*state.flow.omega);
        // <d/dt u, u> = -<d/dt omega, psi>
        r.res_ns_energy = -inner(ns_vorticity_rhs(state), psi) + B * r.grad_u_sq -
                          B * g * inner_mixed(rho.field, u.u2);
    }

    r.tail_frac = tail_fraction(rho.field);
    r.moment_x2 = moment_x2(rho);
    return r;
}

std::vector<DoublingEvent> doubling_report(const std::vector<DiagnosticsRecord>& series,
                                           double level) {
    if (series.empty()) throw std::invalid_argument("doubling_report: empty series");
    std::vector<DoublingEvent> events;
    const double target = 2.0 * level;
    size_t i = 0;
    bool below = series.front().E2 < level;
    while (i < series.size()) {
        // find an up-crossing of `level`
        for (; i < series.size(); ++i) {
            if (series[i].E2 < level) below = true;
            else if (below) break;
        }
        if (i >= series.size()) break;
        const double t_hit = series[i].t;
        // elapsed time until E2 first reaches 2*level
        size_t j = i;
        for (; j < series.size() && series[j].E2 < target; ++j) {}
        if (j < series.size()) events.push_back({t_hit, series[j].t - t_hit});
        below = false;
        ++i;
    }
    return events;
}

namespace {

constexpr const char* kHeader =
    "t,mass,rho_m,min_rho,rho_inf,E2,grad_rho_sq,Ebar,Etilde,mix_sq,h1neg_sq,"
    "u_l2_sq,grad_u_sq,u_inf,res_ks_energy,res_ns_energy,res_static_identity,"
    "res_hessian_identity,dt,tail_frac,moment_x2";

std::string format_row(const DiagnosticsRecord& r) {
    const double v[] = {r.t, r.mass, r.rho_m, r.min_rho, r.rho_inf, r.E2, r.grad_rho_sq,
                        r.Ebar, r.Etilde, r.mix_sq, r.h1neg_sq, r.u_l2_sq, r.grad_u_sq,
                        r.u_inf, r.res_ks_energy, r.res_ns_energy, r.res_static_identity,
                        r.res_hessian_identity, r.dt, r.tail_frac, r.moment_x2};
    std::string row;
    char buf[40];
    for (size_t i = 0; i < std::size(v); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) row += ',';
        row += buf;
    }
    return row;
}

DiagnosticsRecord parse_row(const std::string& line, size_t lineno) {
    double v[21];
    const char* p = line.c_str();
    for (int i = 0; i < 21; ++i) {
        char* end = nullptr;
        v[i] = std::strtod(p, &end);
        if (end == p) throw std::runtime_error("csv: malformed row at line " + std::to_string(lineno));
        p = end;
        if (i < 20) {
            if (*p != ',') throw std::runtime_error("csv: malformed row at line " + std::to_string(lineno));
            ++p;
        }
    }
    DiagnosticsRecord r;
    r.t = v[0]; r.mass = v[1]; r.rho_m = v[2]; r.min_rho = v[3]; r.rho_inf = v[4];
    r.E2 = v[5]; r.grad_rho_sq = v[6]; r.Ebar = v[7]; r.Etilde = v[8]; r.mix_sq = v[9];
    r.h1neg_sq = v[10]; r.u_l2_sq = v[11]; r.grad_u_sq = v[12]; r.u_inf = v[13];
    r.res_ks_energy = v[14]; r.res_ns_energy = v[15]; r.res_static_identity = v[16];
    r.res_hessian_identity = v[17]; r.dt = v[18]; r.tail_frac = v[19]; r.moment_x2 = v[20];
    return r;
}

}  // namespace

void write_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    out << kHeader << '\n';
    for (const auto& r : records) out << format_row(r) << '\n';
    if (!out) throw std::runtime_error("csv: write failed: " + path);
}

std::vector<DiagnosticsRecord> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw std::runtime_error("csv: malformed header in " + path);
    std::vector<DiagnosticsRecord> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        out.push_back(parse_row(line, lineno));
    }
    return out;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("csv: cannot open " + path);
    }
    impl_->out << kHeader << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::append(const DiagnosticsRecord& r) { impl_->out << format_row(r) << '\n'; }

}  // namespace ksns
