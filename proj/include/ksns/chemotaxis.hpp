#pragma once

// The Keller-Segel right-hand side
//   d/dt rho = -u . grad rho + Delta rho - div(rho grad (-Delta_N)^{-1}(rho - rho_m))
// assembled in divergence form so the mean coefficient is conserved exactly.

#include "ksns/state.hpp"
#include "ksns/velocity.hpp"

namespace ksns {

// c = (-Delta_N)^{-1}(rho - rho_m), mean zero, Neumann parity.
struct ChemPotential {
    SpectralField c;
};
ChemPotential chem_potential(const Density& rho);

SpectralField ks_rhs(const Density& rho, const Velocity& u);

// The explicitly integrated part of the right-hand side (everything except
// the diffusion term): -u . grad rho - div(rho grad c), dealiased.
SpectralField ks_explicit(const Density& rho, const Velocity& u);

}  // namespace ksns
