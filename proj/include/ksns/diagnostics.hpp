#pragma once

// Per-sample norms, identity residuals and detector inputs, plus the CSV
// sink. Residuals use instantaneous pairings against the right-hand side,
// not finite-differenced time derivatives.

#include <optional>
#include <string>
#include <vector>

#include "ksns/state.hpp"

namespace ksns {

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double rho_m = 0.0;
    double min_rho = 0.0;
    double rho_inf = 0.0;       // ||rho - rho_m||_inf on the collocation grid
    double E2 = 0.0;            // ||rho - rho_m||^2_{L2(Omega)}
    double grad_rho_sq = 0.0;
    double Ebar = 0.0;          // ||bar rho - rho_m||^2_{L2[0,pi]}
    double Etilde = 0.0;        // ||tilde rho||^2_{L2(Omega)}
    double mix_sq = 0.0;        // ||(-Delta_D)^{-1} d1 rho||^2
    double h1neg_sq = 0.0;      // int d1 rho (-Delta_D)^{-1} d1 rho
    double u_l2_sq = 0.0;
    double grad_u_sq = 0.0;
    double u_inf = 0.0;
    double res_ks_energy = 0.0;
    double res_ns_energy = 0.0;
    double res_static_identity = 0.0;
    double res_hessian_identity = 0.0;
    double dt = 0.0;
    double tail_frac = 0.0;
    double moment_x2 = 0.0;
};

DiagnosticsRecord sample(const SimState& state,
                         const std::optional<DiagnosticsRecord>& prev = std::nullopt,
                         double dt = 0.0);

// For each up-crossing of E2 through level N, the elapsed time until E2
// first reaches 2N (entries without a subsequent doubling are omitted).
struct DoublingEvent {
    double t_hit;
    double t_double;  // elapsed time from t_hit to first reach 2N
};
std::vector<DoublingEvent> doubling_report(const std::vector<DiagnosticsRecord>& series,
                                           double level);

void write_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path);
std::vector<DiagnosticsRecord> read_csv(const std::string& path);

// Streaming variant used by long runs: writes the header on open, one row
// per append, full f64 round-trip precision.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;
    void append(const DiagnosticsRecord& r);

  private:
    struct Impl;
    Impl* impl_;
};

}  // namespace ksns
