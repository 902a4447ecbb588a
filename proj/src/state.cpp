#include "ksns/state.hpp"

#include <algorithm>
#include <cmath>

#include "ksns/operators.hpp"
#include "ksns/transforms.hpp"

namespace ksns {

const char* to_string(FlowVariant v) {
    switch (v) {
        case FlowVariant::NoFlow: return "noflow";
        case FlowVariant::Darcy: return "darcy";
        case FlowVariant::StaticStokes: return "static_stokes";
        case FlowVariant::NavierStokes: return "navier_stokes";
    }
    return "?";
}

double mean(const Density& rho) { return rho.field.coef(0, 0).real(); }

std::pair<BarProfile, SpectralField> split_bar_tilde(const Density& rho) {
    const SpectralField& f = rho.field;
    BarProfile bar;
    bar.cos_coeffs.resize(f.n2());
    for (int j = 0; j < f.n2(); ++j) bar.cos_coeffs[j] = f.at(0, j).real();
    SpectralField tilde = f;
    for (int j = 0; j < f.n2(); ++j) tilde.at(0, j) = complex{0.0, 0.0};
    return {bar, tilde};
}

double l2_norm_sq(const SpectralField& f) {
    double s = 0.0;
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) s += parseval_weight(f, k1, j) * std::norm(f.at(k1, j));
    return s;
}

double inner(const SpectralField& f, const SpectralField& g) {
    if (f.grid() != g.grid() || f.tag() != g.tag())
        throw std::invalid_argument("inner: grid/tag mismatch");
    double s = 0.0;
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j)
            s += parseval_weight(f, k1, j) * (f.at(k1, j) * std::conj(g.at(k1, j))).real();
    return s;
}

double inner_mixed(const SpectralField& f_cos, const SpectralField& g_sin) {
    if (f_cos.tag() != BasisTag::CosY || g_sin.tag() != BasisTag::SinY)
        throw std::invalid_argument("inner_mixed: expects (CosY, SinY)");
    // cos_to_sin is the L2 projection onto the sine span, which contains g.
    return inner(cos_to_sin(f_cos), g_sin);
}

Seminorms sobolev_seminorms(const SpectralField& f) {
    Seminorms s{0.0, 0.0, 0.0};
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) {
            const double w = parseval_weight(f, k1, j) * std::norm(f.at(k1, j));
            const double a = static_cast<double>(k1) * k1, b = [&] {
                const int k2 = f.k2_of(j);
                return static_cast<double>(k2) * k2;
            }();
            s.grad_sq += (a + b) * w;
            s.hess_sq += (a * a + 2.0 * a * b + b * b) * w;
            s.lap_sq += (a + b) * (a + b) * w;
        }
    return s;
}

double max_abs_phys(const SpectralField& f) {
    const auto v = to_physical(f);
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double min_phys(const SpectralField& f) {
    const auto v = to_physical(f);
    return *std::min_element(v.begin(), v.end());
}

SpectralField pad_to(const SpectralField& f, const Grid& fine) {
    if (fine.n1 < f.grid().n1 || fine.n2 < f.grid().n2)
        throw std::invalid_argument("pad_to: target grid must be at least as fine");
    SpectralField out(fine, f.tag());
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) out.coef(k1, f.k2_of(j)) = f.at(k1, j);
    return out;
}

double cubic_integral(const Density& rho) {
    const Grid& g = rho.field.grid();
    const Grid fine(2 * g.n1, 2 * g.n2);
    const auto v = to_physical(pad_to(rho.field, fine));
    const double rm = mean(rho);
    const double w = fine.dx1() * fine.dx2();
    double s = 0.0;
    for (double x : v) s += x * x * (x - rm);
    return w * s;
}

double moment_x2(const Density& rho) {
    const Grid& g = rho.field.grid();
    const auto v = to_physical(rho.field);
    const double w = g.dx1() * g.dx2();
    double s = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) s += g.x2(j) * v[static_cast<size_t>(i) * g.n2 + j];
    return w * s;
}

double tail_fraction(const SpectralField& f) {
    const Grid& g = f.grid();
    const double kx_cut = (2.0 / 3.0) * (g.n1 / 3.0);
    const double ky_cut = (2.0 / 3.0) * (2.0 * g.n2 / 3.0);
    double total = 0.0, tail = 0.0;
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) {
            const int k2 = f.k2_of(j);
            if (k1 == 0 && k2 == 0) continue;  // fluctuation energy only
            const double e = parseval_weight(f, k1, j) * std::norm(f.at(k1, j));
            total += e;
            if (k1 > kx_cut || k2 > ky_cut) tail += e;
        }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace ksns
