#include "ksns/timeint.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <limits>

#include "ksns/operators.hpp"
#include "ksns/transforms.hpp"

namespace ksns {

const char* to_string(RunOutcome::Kind k) {
    switch (k) {
        case RunOutcome::Kind::CompletedHorizon: return "completed_horizon";
        case RunOutcome::Kind::BlowupDetected: return "blowup_detected";
        case RunOutcome::Kind::ResolutionLoss: return "resolution_loss";
    }
    return "?";
}

double choose_dt(const SimState& state, const StepController& ctrl) {
    const Grid& g = state.params.grid;
    const Velocity u = velocity_of(state);
    const ChemPotential c = chem_potential(state.density);

    // safety factor scales only the advective limit, not dt_max itself
    double cfl_dt = std::numeric_limits<double>::infinity();
    auto constrain = [&cfl_dt](double dx, double speed) {
        if (speed > 0.0) cfl_dt = std::min(cfl_dt, dx / speed);
    };
    constrain(g.dx1(), max_abs_phys(u.u1));
    constrain(g.dx2(), max_abs_phys(u.u2));
    constrain(g.dx1(), max_abs_phys(ddx1(c.c)));
    constrain(g.dx2(), max_abs_phys(ddx2(c.c)));
    return std::clamp(std::min(ctrl.cfl_safety * cfl_dt, ctrl.dt_max), ctrl.dt_min, ctrl.dt_max);
}

namespace {

double fluctuation_energy(const Density& rho) {
    SpectralField f = rho.field;
    f.coef(0, 0) = complex{0.0, 0.0};
    return l2_norm_sq(f);
}

}  // namespace

std::optional<RunOutcome> detect(const SimState& state, const ModelParams& params) {
    const SpectralField& rho = state.density.field;
    if (!rho.is_finite() || (state.flow.omega && !state.flow.omega->is_finite())) {
        return RunOutcome{RunOutcome::Kind::BlowupDetected, state.t,
                          "non-finite coefficients", "finite", 0.0};
    }
    const double rho_inf = max_abs_phys(rho);
    if (rho_inf > params.rho_inf_max) {
        return RunOutcome{RunOutcome::Kind::BlowupDetected, state.t,
                          "sup-norm threshold exceeded", "rho_inf", rho_inf};
    }
    const double tail = tail_fraction(rho);
    if (tail > params.tail_frac_max) {
        return RunOutcome{RunOutcome::Kind::ResolutionLoss, state.t,
                          "spectral tail saturated", "tail_frac", tail};
    }
    return std::nullopt;
}

std::optional<RunOutcome> BlowupDetector::update(const SimState& state, double dt, bool dt_pinned) {
    const SpectralField& rho = state.density.field;
    if (!rho.is_finite() || (state.flow.omega && !state.flow.omega->is_finite())) {
        return RunOutcome{RunOutcome::Kind::BlowupDetected, state.t,
                          "non-finite coefficients", "finite", 0.0};
    }
    const double e2 = fluctuation_energy(state.density);
    const bool growing = last_e2_ >= 0.0 && e2 > last_e2_;
    pinned_count_ = (dt_pinned && growing) ? pinned_count_ + 1 : 0;
    last_e2_ = e2;

    const double rho_inf = max_abs_phys(rho);
    if (rho_inf > state.params.rho_inf_max) {
        return RunOutcome{RunOutcome::Kind::BlowupDetected, state.t,
                          "sup-norm threshold exceeded", "rho_inf", rho_inf};
    }
    if (pinned_count_ >= state.params.dt_pin_steps) {
        return RunOutcome{RunOutcome::Kind::BlowupDetected, state.t,
                          "dt pinned at dt_min with growing fluctuation energy", "dt", dt};
    }
    const double tail = tail_fraction(rho);
    if (tail > state.params.tail_frac_max) {
        return RunOutcome{RunOutcome::Kind::ResolutionLoss, state.t,
                          "spectral tail saturated", "tail_frac", tail};
    }
    return std::nullopt;
}

Integrator::Integrator(SimState state, StepController ctrl)
    : state_(std::move(state)), ctrl_(ctrl) {}

SpectralField Integrator::advance_imex(const SpectralField& f, const SpectralField& expl,
                                       std::optional<SpectralField>& prev, double dt,
                                       double kappa) {
    SpectralField out(f.grid(), f.tag());
    const bool cnab2 = ctrl_.scheme == Scheme::ImexCNAB2;
    // variable-step Adams-Bashforth weights; first step falls back to Euler
    double a = 1.0, b = 0.0;
    if (cnab2 && prev && prev_dt_ > 0.0) {
        const double r = dt / prev_dt_;
        a = 1.0 + 0.5 * r;
        b = -0.5 * r;
    }
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) {
            const int k2 = f.k2_of(j);
            const double lam = kappa * static_cast<double>(k1 * k1 + k2 * k2);
            complex n = a * expl.at(k1, j);
            if (b != 0.0) n += b * prev->at(k1, j);
            if (cnab2) {
                out.at(k1, j) = ((1.0 - 0.5 * dt * lam) * f.at(k1, j) + dt * n) / (1.0 + 0.5 * dt * lam);
            } else {
                out.at(k1, j) = (f.at(k1, j) + dt * n) / (1.0 + dt * lam);
            }
        }
    prev = expl;
    return out;
}

void Integrator::step(double dt) {
    const Velocity u = velocity_of(state_);
    const SpectralField expl_rho = ks_explicit(state_.density, u);

    std::optional<SpectralField> expl_omega;
    if (state_.flow.variant == FlowVariant::NavierStokes) {
        const SpectralField& omega = *state_.flow.omega;
        SpectralField adv = multiply(u.u1, ddx1(omega)) + multiply(u.u2, ddx2(omega));
        adv *= -1.0;
        adv += (state_.params.B * state_.params.g) * cos_to_sin(ddx1(state_.density.field));
        expl_omega = std::move(adv);
    }

    state_.density.field = advance_imex(state_.density.field, expl_rho, prev_rho_rhs_, dt, 1.0);
    if (expl_omega) {
        *state_.flow.omega =
            advance_imex(*state_.flow.omega, *expl_omega, prev_omega_rhs_, dt, state_.params.B);
    }
    state_.t += dt;
    prev_dt_ = dt;
}

namespace {

constexpr char kMagic[4] = {'K', 'S', 'N', 'S'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    out.insert(out.end(), raw, raw + sizeof(T));  // little-endian host
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw std::runtime_error("checkpoint: truncated");
    T v;
    std::memcpy(&v, in.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
}

std::uint8_t variant_byte(FlowVariant v) { return static_cast<std::uint8_t>(v); }

FlowVariant variant_from_byte(std::uint8_t b) {
    if (b > 3) throw std::runtime_error("checkpoint: bad variant byte");
    return static_cast<FlowVariant>(b);
}

void put_field(std::vector<std::uint8_t>& out, const SpectralField& f) {
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) {
            put<double>(out, f.at(k1, j).real());
            put<double>(out, f.at(k1, j).imag());
        }
}

SpectralField get_field(const std::vector<std::uint8_t>& in, size_t& pos, const Grid& g,
                        BasisTag tag) {
    SpectralField f(g, tag);
    for (int k1 = 0; k1 < f.n1k(); ++k1)
        for (int j = 0; j < f.n2(); ++j) {
            const double re = get<double>(in, pos);
            const double im = get<double>(in, pos);
            f.at(k1, j) = complex{re, im};
        }
    return f;
}

}  // namespace

std::vector<std::uint8_t> checkpoint_save(const SimState& state) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(state.params.grid.n1));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(state.params.grid.n2));
    out.push_back(variant_byte(state.flow.variant));
    put<double>(out, state.t);
    put<double>(out, state.params.g);
    put<double>(out, state.params.B);
    put_field(out, state.density.field);
    if (state.flow.variant == FlowVariant::NavierStokes) put_field(out, *state.flow.omega);
    return out;
}

SimState checkpoint_load(const std::vector<std::uint8_t>& bytes) {
    size_t pos = 0;
    if (bytes.size() < 5 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw std::runtime_error("checkpoint: bad magic");
    pos = 4;
    const std::uint8_t version = get<std::uint8_t>(bytes, pos);
    if (version != kVersion) throw std::runtime_error("checkpoint: unsupported version");
    const auto n1 = get<std::uint32_t>(bytes, pos);
    const auto n2 = get<std::uint32_t>(bytes, pos);
    const FlowVariant variant = variant_from_byte(get<std::uint8_t>(bytes, pos));
    const double t = get<double>(bytes, pos);
    const double g = get<double>(bytes, pos);
    const double B = get<double>(bytes, pos);

    SimState s;
    s.t = t;
    s.params.g = g;
    s.params.B = B;
    s.params.grid = Grid(static_cast<int>(n1), static_cast<int>(n2));
    s.density = Density(get_field(bytes, pos, s.params.grid, BasisTag::CosY));
    s.flow.variant = variant;
    if (variant == FlowVariant::NavierStokes)
        s.flow.omega = get_field(bytes, pos, s.params.grid, BasisTag::SinY);
    if (pos != bytes.size()) throw std::runtime_error("checkpoint: trailing bytes");
    return s;
}

void checkpoint_write_file(const SimState& state, const std::string& path) {
    const auto bytes = checkpoint_save(state);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

SimState checkpoint_read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return checkpoint_load(bytes);
}

}  // namespace ksns
