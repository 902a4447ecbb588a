#pragma once

// IMEX time advance (implicit diagonal diffusion, explicit transport /
// chemotaxis / forcing), CFL step control, blowup and resolution-loss
// detection, and binary checkpoints.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksns/chemotaxis.hpp"
#include "ksns/state.hpp"
#include "ksns/velocity.hpp"

namespace ksns {

enum class Scheme { ImexEuler, ImexCNAB2 };

struct StepController {
    double dt = 1e-3;
    double dt_min = 1e-7;
    double dt_max = 1e-2;
    double cfl_safety = 0.4;
    Scheme scheme = Scheme::ImexCNAB2;

    static StepController from_params(const ModelParams& p, Scheme s) {
        return {p.dt_init, p.dt_min, p.dt_max, p.cfl_safety, s};
    }
};

struct RunOutcome {
    enum class Kind { CompletedHorizon, BlowupDetected, ResolutionLoss };
    Kind kind = Kind::CompletedHorizon;
    double t_final = 0.0;
    std::string reason;   // triggering metric and its value for detector stops
    std::string metric;
    double value = 0.0;
};

const char* to_string(RunOutcome::Kind k);

// CFL step: the fluid velocity and the chemotactic drift grad c are both
// treated as advecting velocities.
double choose_dt(const SimState& state, const StepController& ctrl);

// Single-shot detector conditions (sup-norm blowup, non-finite state,
// spectral-tail saturation). The dt-pinning branch needs history and lives
// in BlowupDetector.
std::optional<RunOutcome> detect(const SimState& state, const ModelParams& params);

// Stateful detector accumulating the dt_min-pinning count.
class BlowupDetector {
  public:
    std::optional<RunOutcome> update(const SimState& state, double dt, bool dt_pinned);

  private:
    int pinned_count_ = 0;
    double last_e2_ = -1.0;
};

// Advances a trajectory. Owns the Adams-Bashforth history; variable-step
// AB2 coefficients are used when the CFL controller changes dt.
class Integrator {
  public:
    Integrator(SimState state, StepController ctrl);

    // One IMEX step of size dt (caller chooses dt; see choose_dt).
    void step(double dt);

    const SimState& state() const { return state_; }
    SimState& state() { return state_; }
    const StepController& controller() const { return ctrl_; }
    StepController& controller() { return ctrl_; }

  private:
    SpectralField advance_imex(const SpectralField& f, const SpectralField& expl,
                               std::optional<SpectralField>& prev, double dt, double kappa);

    SimState state_;
    StepController ctrl_;
    std::optional<SpectralField> prev_rho_rhs_;
    std::optional<SpectralField> prev_omega_rhs_;
    double prev_dt_ = 0.0;
};

// Checkpoint wire format: magic "KSNS", version byte 1, little-endian
// u32 n1, u32 n2, u8 variant, f64 t, f64 g, f64 B, then rho coefficients as
// interleaved f64 (re, im) in (k1-major, k2-minor) order over the
// conjugate-reduced range, then omega likewise iff variant = NavierStokes.
std::vector<std::uint8_t> checkpoint_save(const SimState& state);
SimState checkpoint_load(const std::vector<std::uint8_t>& bytes);
void checkpoint_write_file(const SimState& state, const std::string& path);
SimState checkpoint_read_file(const std::string& path);

}  // namespace ksns
