#pragma once

/// Explicit a-priori constants K1..K7, eta0, zeta0 and the local-existence
/// horizon lambda, computed from the problem data, plus the per-step bound
/// monitors that verify the corresponding estimates on discrete fields.
///
/// All constants are independent of eps: only the cap eps0 enters.

#include <optional>
#include <string>
#include <vector>

#include "cypipe/initial.hpp"
#include "cypipe/model.hpp"
#include "cypipe/pressure.hpp"

namespace cypipe {

/// Case split of the global/local existence statement.
enum class SolvabilityCase {
    GlobalParabolic,       ///< n > 0 with kappa != 0, or kappa = 0 (case i)
    FiniteHorizonZeroN,    ///< n = 0, kappa != 0 (case ii)
    LocalHorizonNegativeN  ///< n < 0, kappa != 0 (case iii)
};

std::string to_string(SolvabilityCase c);

SolvabilityCase classify_case(const ModelParams& params);

double compute_k1(const InitialCondition& ic, const PressureProfile& profile, double R);
double compute_k2(const InitialCondition& ic, const PressureProfile& profile,
                  const ModelParams& params);
double compute_k3(double K2, const PressureProfile& profile, const ModelParams& params);
/// Gradient bound for case (i); the kappa = 0 branch drops the power term.
double compute_k4(double K3, const ModelParams& params);
/// max{ sup|b'|/(8 beta^2), sup|Psi'|, Finv(b0 (R+eps0)/2) }. Throws
/// OutOfRangeError when the flux inverse argument is inadmissible (n <= 0).
double compute_k5(const InitialCondition& ic, const PressureProfile& profile,
                  const ModelParams& params);
/// Curvature bound for case (i); divides by Phi(K4) when 0 < n < 1.
double compute_k6(const ModelParams& params, double b0, double K3,
                  std::optional<double> K4);
/// Curvature bound on a finite horizon T0 (cases ii and iii).
double compute_k7(const ModelParams& params, double b0, double K3, double K5,
                  double T0);
/// Open upper bound ln(eta0 / K5) on the local-existence horizon; present
/// only for n < 0, kappa != 0, K5 < eta0.
std::optional<double> compute_lambda(double K5, const ModelParams& params);

struct BoundsSet {
    double K1 = 0.0;
    double K2 = 0.0;
    double K3 = 0.0;
    std::optional<double> K4, K5, K6, K7;
    std::optional<double> eta0, zeta0, lambda;
    /// Finv(b0 (R+eps0)/2) when admissible; slope of the linear velocity
    /// envelope and third K5 term.
    std::optional<double> linear_envelope_slope;
    SolvabilityCase solvability_case = SolvabilityCase::GlobalParabolic;
    /// Exponential-envelope factor c in |U_Y| <= c K5 e^T; configurable,
    /// and the unit-factor margin is monitored alongside.
    double exp_factor = 1.0;
    /// Finite horizon used for K7 (cases ii/iii).
    std::optional<double> horizon;
    /// True when the |U| <= (R-Y) Finv(...) and exponential envelopes are
    /// in force (cases ii/iii hypotheses verified).
    bool envelope_hypotheses_hold = false;
};

/// Assemble every constant applicable to the parameter case. T0 is the
/// finite horizon for cases ii/iii (ignored for case i).
BoundsSet compute_bounds(const InitialCondition& ic, const PressureProfile& profile,
                         const ModelParams& params, double T0);

struct BoundCheck {
    std::string name;
    bool enabled = false;
    bool pass = true;
    double bound = 0.0;     ///< binding right-hand side (at the worst point)
    double observed = 0.0;  ///< left-hand side at the worst point
    double margin = 0.0;    ///< bound - observed, minimized over the field
};

struct BoundReport {
    long step = 0;
    double T = 0.0;
    double dt = 0.0;
    std::vector<BoundCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (c.enabled && !c.pass) return false;
        return true;
    }
};

/// Verify every enabled estimate on a discrete field snapshot. Each bound
/// carries the grid slack 10 h^2 on its right-hand side.
///
/// U has N+1 nodal values, U_Y_face the N face difference quotients, U_T the
/// nodal time-derivative estimates.
BoundReport monitor_bounds(const std::vector<double>& U,
                           const std::vector<double>& U_Y_face,
                           const std::vector<double>& U_T, double T, double dt,
                           long step, double h, const BoundsSet& bounds,
                           const ModelParams& params, double b0);

}  // namespace cypipe
