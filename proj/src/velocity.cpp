#include "ksns/velocity.hpp"

#include "ksns/operators.hpp"

namespace ksns {

Velocity velocity_from_stream(const SpectralField& psi) {
    if (psi.tag() != BasisTag::SinY)
        throw std::invalid_argument("velocity_from_stream: psi must be SinY");
    SpectralField u1 = ddx2(psi);
    u1 *= -1.0;
    return {std::move(u1), ddx1(psi)};
}

SpectralField vorticity_of(const Velocity& u) { return ddx1(u.u2) - ddx2(u.u1); }

SpectralField stream_from_vorticity(const SpectralField& omega) {
    SpectralField psi = inv_laplace_dirichlet(omega, 1);
    psi *= -1.0;
    return psi;
}

Velocity static_stokes_velocity(const Density& rho, double g) {
    SpectralField psi = inv_laplace_dirichlet(cos_to_sin(ddx1(rho.field)), 2);
    psi *= -g;
    return velocity_from_stream(psi);
}

Velocity darcy_velocity(const Density& rho, double g) {
    SpectralField psi = inv_laplace_dirichlet(cos_to_sin(ddx1(rho.field)), 1);
    psi *= g;
    return velocity_from_stream(psi);
}

SpectralField ns_vorticity_rhs(const SimState& state) {
    if (state.flow.variant != FlowVariant::NavierStokes || !state.flow.omega)
        throw std::invalid_argument("ns_vorticity_rhs: state has no vorticity");
    const SpectralField& omega = *state.flow.omega;
    const double B = state.params.B, g = state.params.g;

    const Velocity u = velocity_from_stream(stream_from_vorticity(omega));
    SpectralField rhs = multiply(u.u1, ddx1(omega)) + multiply(u.u2, ddx2(omega));
    rhs *= -1.0;
    rhs += B * laplacian(omega);
    rhs += (B * g) * cos_to_sin(ddx1(state.density.field));
    return rhs;
}

Velocity velocity_of(const SimState& state) {
    switch (state.flow.variant) {
        case FlowVariant::NoFlow:
            return Velocity::zero(state.params.grid);
        case FlowVariant::Darcy:
            return darcy_velocity(state.density, state.params.g);
        case FlowVariant::StaticStokes:
            return static_stokes_velocity(state.density, state.params.g);
        case FlowVariant::NavierStokes:
            if (!state.flow.omega)
                throw std::invalid_argument("velocity_of: NavierStokes state has no vorticity");
            return velocity_from_stream(stream_from_vorticity(*state.flow.omega));
    }
    throw std::logic_error("velocity_of: unknown variant");
}

double divergence_l2(const Velocity& u) {
    return std::sqrt(l2_norm_sq(ddx1(u.u1) + ddx2(u.u2)));
}

}  // namespace ksns
