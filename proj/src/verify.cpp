#include "ksns/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <random>

#include "ksns/diagnostics.hpp"
#include "ksns/experiment.hpp"
#include "ksns/operators.hpp"
#include "ksns/timeint.hpp"
#include "ksns/velocity.hpp"

namespace ksns {

namespace {

SpectralField random_field(const Grid& g, BasisTag tag, unsigned seed) {
    SpectralField f(g, tag);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) {
            const double re = dist(rng), im = dist(rng);
            const bool real_line = (k1 == 0 || k1 == g.n1 / 2);
            f.at(k1, j) = complex{re, real_line ? 0.0 : im};
        }
    return f;
}

// analytic L2 change-of-basis matrix: sin row k (1..n2), cos column m (0..n2-1)
double cos_to_sin_entry(int k, int m) {
    if (((k + m) & 1) == 0) return 0.0;
    return (2.0 / pi) * k * 2.0 / static_cast<double>(k * k - m * m);
}

double max_col_diff(const SpectralField& f, int k1, const std::vector<complex>& want) {
    double worst = 0.0;
    for (int j = 0; j < f.n2(); ++j) worst = std::max(worst, std::abs(f.at(k1, j) - want[j]));
    return worst;
}

void add(std::vector<CheckResult>& out, const std::string& name, double value, double tol,
         const std::string& detail) {
    out.push_back({name, value <= tol, value, tol, detail});
}

// ------------------------------------------------------------- A1: operators

void check_operators(std::vector<CheckResult>& out) {
    const Grid g(16, 9);
    const int n2 = g.n2;
    const SpectralField rc = random_field(g, BasisTag::CosY, 37);
    const SpectralField rs = random_field(g, BasisTag::SinY, 41);
    const SpectralField d2c = ddx2(rc), d2s = ddx2(rs);
    const SpectralField iln = inv_laplace_neumann(rc);
    const SpectralField ild2 = inv_laplace_dirichlet(rs, 2);
    const SpectralField c2s = cos_to_sin(rc);

    double worst = 0.0;
    std::vector<complex> want(n2);
    for (int k1 = 0; k1 < g.n1k(); ++k1) {
        // ddx2 CosY -> SinY: sin row k gets -k * c_k
        for (int k = 1; k <= n2; ++k) want[k - 1] = (k <= n2 - 1) ? -double(k) * rc.at(k1, k) : 0.0;
        worst = std::max(worst, max_col_diff(d2c, k1, want));

        // ddx2 SinY -> CosY: cos row k gets +k * s_k
        for (int k = 0; k <= n2 - 1; ++k) want[k] = (k >= 1) ? double(k) * rs.at(k1, k - 1) : 0.0;
        worst = std::max(worst, max_col_diff(d2s, k1, want));

        // inverse Neumann Laplacian: diagonal 1/(k1^2+k2^2), mean annihilated
        for (int k2 = 0; k2 < n2; ++k2)
            want[k2] = (k1 == 0 && k2 == 0) ? complex{} : rc.at(k1, k2) / double(k1 * k1 + k2 * k2);
        worst = std::max(worst, max_col_diff(iln, k1, want));

        // inverse Dirichlet Laplacian squared: diagonal 1/(k1^2+k2^2)^2
        for (int k2 = 1; k2 <= n2; ++k2) {
            const double ev = k1 * k1 + k2 * k2;
            want[k2 - 1] = rs.at(k1, k2 - 1) / (ev * ev);
        }
        worst = std::max(worst, max_col_diff(ild2, k1, want));

        // change of basis: dense analytic matrix row sums
        for (int k = 1; k <= n2; ++k) {
            complex acc{};
            for (int m = 0; m < n2; ++m) acc += cos_to_sin_entry(k, m) * rc.at(k1, m);
            want[k - 1] = acc;
        }
        worst = std::max(worst, max_col_diff(c2s, k1, want));
    }
    add(out, "A1 dense operator equivalence (16x9)", worst, 1e-12, "max coefficient deviation");

    // eigenfunction examples
    SpectralField f(g, BasisTag::CosY);
    f.coef(1, 1) = 0.5;  // cos(x1)cos(x2)
    SpectralField r = inv_laplace_neumann(f);
    SpectralField half = f;
    half *= 0.5;
    r -= half;
    double eig = 0.0;
    for (int k1 = 0; k1 < r.n1k(); ++k1)
        for (int j = 0; j < r.n2(); ++j) eig = std::max(eig, std::abs(r.at(k1, j)));

    SpectralField s(g, BasisTag::SinY);
    s.coef(2, 3) = complex{0.0, -0.5};  // sin(2 x1) sin(3 x2)
    SpectralField q = inv_laplace_dirichlet(s, 2);
    SpectralField scaled = s;
    scaled *= 1.0 / 169.0;
    q -= scaled;
    for (int k1 = 0; k1 < q.n1k(); ++k1)
        for (int j = 0; j < q.n2(); ++j) eig = std::max(eig, std::abs(q.at(k1, j)));
    add(out, "A1 inverse-Laplacian eigenfunctions", eig, 1e-13, "cos cos / sin2x1 sin3x2");
}

// ------------------------------------------------------- A2: static Stokes law

void check_static_law(std::vector<CheckResult>& out) {
    const Grid g(16, 9);
    const int n2 = g.n2;
    const double gval = 3.0;
    SpectralField rho_f = dealias(random_field(g, BasisTag::CosY, 11));
    rho_f *= 0.2;
    rho_f.coef(0, 0) = 1.0;
    const Density rho{rho_f};
    const Velocity u = static_stokes_velocity(rho, gval);

    // dense solve of the coupled system {-Lap w = d1(g rho), Lap psi = w}
    double worst = 0.0;
    std::vector<complex> psi(n2), want(n2);
    for (int k1 = 0; k1 < g.n1k(); ++k1) {
        const complex ik1{0.0, double(k1)};
        for (int k = 1; k <= n2; ++k) {
            complex curl{};
            for (int m = 0; m < n2; ++m) curl += cos_to_sin_entry(k, m) * rho_f.at(k1, m);
            curl *= ik1 * gval;
            const double ev = double(k1 * k1 + k * k);
            const complex w = curl / ev;
            psi[k - 1] = -w / ev;
        }
        for (int k = 0; k < n2; ++k) want[k] = (k >= 1) ? -double(k) * psi[k - 1] : complex{};
        worst = std::max(worst, max_col_diff(u.u1, k1, want));
        for (int k = 1; k <= n2; ++k) want[k - 1] = ik1 * psi[k - 1];
        worst = std::max(worst, max_col_diff(u.u2, k1, want));
    }
    add(out, "A2 static law vs dense coupled solve", worst, 1e-8, "per-mode velocity deviation");

    // Lions boundary values: u2 and d2 u1 on both walls
    const SpectralField du1 = ddx2(u.u1);
    double bc = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (double x2 : {0.0, pi}) {
            bc = std::max(bc, std::abs(eval_point(u.u2, g.x1(i), x2)));
            bc = std::max(bc, std::abs(eval_point(du1, g.x1(i), x2)));
        }
    add(out, "A2 Lions boundary conditions", bc, 1e-12, "sup |u2|, |d2 u1| on the walls");

    add(out, "A2 incompressibility", divergence_l2(u), 1e-11, "||div u||_L2");

    SimState s;
    s.params.grid = g;
    s.params.g = gval;
    s.flow.variant = FlowVariant::StaticStokes;
    s.density = rho;
    const DiagnosticsRecord d = sample(s);
    add(out, "A2 Hessian-Laplacian identity of the static law",
        std::abs(d.res_hessian_identity) / std::max(d.grad_u_sq, 1e-30), 1e-12,
        "| ||hess u||^2 - ||lap u||^2 | / ||grad u||^2");
}

// ---------------------------------------------- A3: identities along an NS run

RunConfig smooth_config(FlowVariant v) {
    RunConfig cfg;
    cfg.params.grid = Grid(128, 65);
    cfg.params.g = 50.0;
    cfg.params.B = 100.0;
    cfg.variant = v;
    cfg.t_end = 1.0;
    cfg.sample_every = 0.05;
    cfg.datum.preset = "single_mode";
    cfg.datum.mass = 1.5 * 2.0 * pi * pi;  // rho_m = 1.5, subcritical
    cfg.datum.amplitude = 0.3;
    cfg.datum.k1 = 1;
    cfg.datum.k2 = 1;
    return cfg;
}

void check_identities(std::vector<CheckResult>& out, double& mass_drift) {
    const RunResult full = run_trajectory(smooth_config(FlowVariant::NavierStokes));
    const RunResult stat = run_trajectory(smooth_config(FlowVariant::StaticStokes));

    double ks = 0.0, pyth = 0.0, cs = 0.0, st = 0.0;
    for (const auto& r : full.series) {
        const double scale = std::max({std::abs(r.grad_rho_sq), r.E2, 1.0});
        ks = std::max(ks, std::abs(r.res_ks_energy) / scale);
        pyth = std::max(pyth, std::abs(2.0 * pi * r.Ebar + r.Etilde - r.E2) / std::max(r.E2, 1.0));
        cs = std::max(cs, r.h1neg_sq - std::sqrt(r.grad_rho_sq * r.mix_sq));
        mass_drift = std::max(mass_drift, std::abs(r.mass - full.series.front().mass));
    }
    for (const auto& r : stat.series) {
        st = std::max(st, std::abs(r.res_static_identity) / std::max(50.0 * r.mix_sq, 1e-12));
        mass_drift = std::max(mass_drift, std::abs(r.mass - stat.series.front().mass));
        const double scale = std::max({std::abs(r.grad_rho_sq), r.E2, 1.0});
        ks = std::max(ks, std::abs(r.res_ks_energy) / scale);
    }
    add(out, "A3 chemotaxis energy identity", ks, 1e-8, "per-sample relative residual");
    add(out, "A3 static-law velocity identity", st, 1e-10, "g ||mix||^2 = int rho u2");
    add(out, "A3 bar/tilde Pythagoras", pyth, 1e-10, "2 pi Ebar + Etilde = E2");
    add(out, "A3 Cauchy-Schwarz chain", std::max(cs, 0.0), 1e-12,
        "h1neg_sq <= sqrt(grad_rho_sq * mix_sq)");
}

// ----------------------------------------- A4: conservation / order / spectrum

SpectralField run_fixed_dt(double dt, double t_end) {
    const Grid g(32, 17);
    SimState s;
    s.params.grid = g;
    s.params.g = 5.0;
    s.flow.variant = FlowVariant::StaticStokes;
    SpectralField f(g, BasisTag::CosY);
    f.coef(0, 0) = 1.5;
    f.coef(1, 1) = 0.05;   // 0.1 cos(x1)cos(x2)
    f.coef(0, 2) = 0.05;   // 0.05 cos(2 x2)
    s.density = Density(f);
    StepController ctrl;
    ctrl.scheme = Scheme::ImexCNAB2;
    Integrator integ(std::move(s), ctrl);
    const long n = std::lround(t_end / dt);
    for (long i = 0; i < n; ++i) integ.step(dt);
    return integ.state().density.field;
}

void check_conservation(std::vector<CheckResult>& out, double mass_drift) {
    add(out, "A4 mass conservation", mass_drift, 1e-8, "max |M(t) - M(0)| over the runs");

    const double t_end = 0.5;
    const SpectralField ref = run_fixed_dt(1.5625e-4, t_end);
    double errs[3];
    const double dts[3] = {1e-2, 5e-3, 2.5e-3};
    for (int i = 0; i < 3; ++i) {
        SpectralField diff = run_fixed_dt(dts[i], t_end);
        diff -= ref;
        errs[i] = std::sqrt(l2_norm_sq(diff));
    }
    const double p1 = std::log2(errs[0] / errs[1]);
    const double p2 = std::log2(errs[1] / errs[2]);
    const double order = std::min(p1, p2);
    out.push_back({"A4 CNAB2 self-convergence order", order >= 1.8, order, 1.8,
                   "min observed order over dt halvings (pass: >= tol)"});

    RunConfig cfg = smooth_config(FlowVariant::NoFlow);
    cfg.datum.amplitude = 0.1;
    const RunResult res = run_trajectory(cfg);
    double tail = 0.0;
    for (const auto& r : res.series) tail = std::max(tail, r.tail_frac);
    add(out, "A4 spectral tail of the smooth run", tail, 1e-10, "max tail fraction over samples");
}

}  // namespace

std::vector<CheckResult> run_verify() {
    std::vector<CheckResult> out;
    check_operators(out);
    check_static_law(out);
    double mass_drift = 0.0;
    check_identities(out, mass_drift);
    check_conservation(out, mass_drift);
    return out;
}

bool print_verify(const std::vector<CheckResult>& results, std::ostream& out) {
    bool all = true;
    for (const auto& r : results) {
        char line[256];
        std::snprintf(line, sizeof line, "%-42s %s  value=%.3e  tol=%.3e  (%s)\n", r.name.c_str(),
                      r.pass ? "PASS" : "FAIL", r.value, r.tolerance, r.detail.c_str());
        out << line;
        all = all && r.pass;
    }
    out << (all ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return all;
}

}  // namespace ksns
