#pragma once

// The four velocity closures and the stream-function machinery shared by
// all of them. Sign conventions: nabla^perp = (-d2, d1), Delta psi = omega,
// u = nabla^perp psi.

#include "ksns/state.hpp"

namespace ksns {

struct Velocity {
    SpectralField u1;  // CosY
    SpectralField u2;  // SinY

    static Velocity zero(const Grid& g) {
        return {SpectralField(g, BasisTag::CosY), SpectralField(g, BasisTag::SinY)};
    }
};

// u = nabla^perp psi = (-d2 psi, d1 psi); divergence-free by construction.
Velocity velocity_from_stream(const SpectralField& psi);

// omega = nabla^perp . u = d1 u2 - d2 u1 (SinY).
SpectralField vorticity_of(const Velocity& u);

// psi with Delta psi = omega, homogeneous Dirichlet (psi = -(-Delta_D)^{-1} omega).
SpectralField stream_from_vorticity(const SpectralField& omega);

// u = -g nabla^perp (-Delta_D)^{-2} d1 rho  (static Stokes closure)
Velocity static_stokes_velocity(const Density& rho, double g);

// u = +g nabla^perp (-Delta_D)^{-1} d1 rho  (Darcy closure, sign as printed)
Velocity darcy_velocity(const Density& rho, double g);

// d/dt omega = -u . grad omega + B Delta omega + B g d1 rho, with u
// recovered from omega via the stream solve; the product is dealiased.
SpectralField ns_vorticity_rhs(const SimState& state);

// Dispatch over the velocity laws for the current state.
Velocity velocity_of(const SimState& state);

// ||d1 u1 + d2 u2||_{L2}
double divergence_l2(const Velocity& u);

}  // namespace ksns
