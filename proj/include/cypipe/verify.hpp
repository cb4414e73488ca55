#pragma once

/// Built-in verification fixtures: oracle- and property-based checks of the
/// whole pipeline (flux inversion round trips, the Newtonian analytic
/// steady case, existence-threshold straddles, steady residuals, unsteady
/// fixed points, bound monitors, the local-existence horizon, regularization
/// convergence, determinism, and total runtime). The same fixtures back the
/// `verify` CLI command and the acceptance test binary.

#include <string>
#include <vector>

namespace cypipe::verify {

struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Runs every fixture; scratch_dir receives the determinism-check outputs.
std::vector<CheckOutcome> run_acceptance(const std::string& scratch_dir);

}  // namespace cypipe::verify
