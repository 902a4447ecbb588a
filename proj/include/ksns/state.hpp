#pragma once

// Typed wrappers for the physical unknowns, the bar/tilde decomposition,
// norms and the simulation state record.

#include <optional>
#include <utility>
#include <vector>

#include "ksns/spectral.hpp"

namespace ksns {

enum class FlowVariant { NoFlow, Darcy, StaticStokes, NavierStokes };

const char* to_string(FlowVariant v);

// Cell density rho, Neumann parity.
struct Density {
    SpectralField field;

    Density() = default;
    explicit Density(SpectralField f) : field(std::move(f)) {
        if (field.tag() != BasisTag::CosY)
            throw std::invalid_argument("Density: requires CosY field");
    }
};

// Fluid state: only the Navier-Stokes variant carries a degree of freedom
// (the vorticity); the other laws are slaved to the density.
struct FlowState {
    FlowVariant variant = FlowVariant::NoFlow;
    std::optional<SpectralField> omega;  // SinY, present iff NavierStokes
};

struct ModelParams {
    double g = 1.0;  // buoyancy amplitude
    double B = 1.0;  // viscosity (unused for NoFlow/Darcy/StaticStokes)
    Grid grid;

    // step control
    double dt_init = 1e-3;
    double dt_min = 1e-7;
    double dt_max = 1e-2;
    double cfl_safety = 0.4;

    // blowup / resolution detector thresholds
    double rho_inf_max = 1e6;
    double tail_frac_max = 0.1;
    int dt_pin_steps = 10;  // consecutive dt_min steps with growing E2
};

struct SimState {
    double t = 0.0;
    Density density;
    FlowState flow;
    ModelParams params;
};

// Mean of rho over Omega (the (0,0) coefficient).
double mean(const Density& rho);

// Horizontal average (k1 = 0 cosine coefficients, a function of x2 only)
// and the fluctuation (k1 != 0 modes). bar + tilde reconstructs rho.
struct BarProfile {
    std::vector<double> cos_coeffs;  // k2 = 0..n2-1

    // ||bar - mean||^2 in the 1D L2([0,pi]) convention
    double fluct_l2_sq() const {
        double s = 0.0;
        for (size_t k = 1; k < cos_coeffs.size(); ++k) s += cos_coeffs[k] * cos_coeffs[k] * pi / 2.0;
        return s;
    }
};
std::pair<BarProfile, SpectralField> split_bar_tilde(const Density& rho);

// Parseval integrals.
double l2_norm_sq(const SpectralField& f);
double inner(const SpectralField& f, const SpectralField& g);  // same tag
// Exact cross-parity inner product int f*g for f CosY, g SinY.
double inner_mixed(const SpectralField& f_cos, const SpectralField& g_sin);

struct Seminorms {
    double grad_sq;  // ||grad f||^2
    double hess_sq;  // ||grad^2 f||^2
    double lap_sq;   // ||Delta f||^2
};
Seminorms sobolev_seminorms(const SpectralField& f);

// Grid-sup and grid-min of the pointwise values.
double max_abs_phys(const SpectralField& f);
double min_phys(const SpectralField& f);

// int_Omega rho^2 (rho - rho_m), evaluated on a 2x zero-padded grid where
// the midpoint quadrature of the cubic is exact for in-band fields.
double cubic_integral(const Density& rho);

// int_Omega x2 * rho by midpoint quadrature (x2 is in neither basis).
double moment_x2(const Density& rho);

// Fluctuation-energy fraction carried by the outer third of the retained
// (dealias-band) modes; out-of-band modes count toward the tail.
double tail_fraction(const SpectralField& f);

// Zero-extend coefficients onto a finer grid (band limits preserved).
SpectralField pad_to(const SpectralField& f, const Grid& fine);

}  // namespace ksns
