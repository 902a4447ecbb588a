#include "ksns/chemotaxis.hpp"

#include "ksns/operators.hpp"

namespace ksns {

ChemPotential chem_potential(const Density& rho) {
    // inv_laplace_neumann already ignores the mean and returns a mean-zero field
    return {inv_laplace_neumann(rho.field)};
}

SpectralField ks_explicit(const Density& rho, const Velocity& u) {
    const SpectralField& r = rho.field;
    if (u.u1.grid() != r.grid()) throw std::invalid_argument("ks_explicit: grid mismatch");
    const ChemPotential c = chem_potential(rho);

    // advection: u1 d1(rho) (CosY*CosY) + u2 d2(rho) (SinY*SinY)
    SpectralField adv = multiply(u.u1, ddx1(r)) + multiply(u.u2, ddx2(r));

    // aggregation in divergence form: d1(rho d1 c) + d2(rho d2 c)
    SpectralField agg = ddx1(multiply(r, ddx1(c.c))) + ddx2(multiply(r, ddx2(c.c)));

    adv += agg;
    adv *= -1.0;
    return dealias(adv);
}

SpectralField ks_rhs(const Density& rho, const Velocity& u) {
    return dealias(laplacian(rho.field)) + ks_explicit(rho, u);
}

}  // namespace ksns
