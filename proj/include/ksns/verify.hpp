#pragma once

// Self-contained correctness suite behind the `verify` CLI verb: dense
// operator oracles, the static-law coupled-system solve, per-sample exact
// identities on a short Navier-Stokes run, and conservation / convergence
// checks. Designed to finish in well under two minutes.

#include <iosfwd>
#include <string>
#include <vector>

namespace ksns {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured quantity (residual, order, ...)
    double tolerance = 0.0;  // pass threshold for the value
    std::string detail;
};

std::vector<CheckResult> run_verify();

// Prints one line per check; returns true iff all passed.
bool print_verify(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace ksns
