#pragma once

/// Pure evaluation of the Carreau-Yasuda flux nonlinearity: the viscosity
/// factor Phi, the flux function F, its derivative, critical points, the
/// guarded inverse on the increasing branch, and regime classification.
///
/// All functions are pure and safe for concurrent use.

#include <optional>
#include <utility>

#include "cypipe/model.hpp"

namespace cypipe {

/// Viscosity factor Phi(eta) = (1 + n k^a eta^a) (1 + k^a eta^a)^((n-1-a)/a)
/// for shear rate eta >= 0. Phi(0) = 1; identically 1 for n = 1 or kappa = 0.
/// For n < 0 it vanishes at the critical shear rate and is negative beyond.
double viscosity_factor(double eta, const ModelParams& p);

/// Dimensionless viscosity mu/mu0 = (1 + k^a |eta|^a)^((n-1)/a), the
/// Carreau-Yasuda law itself; also the ratio F(eta)/eta.
double viscosity_ratio(double eta, const ModelParams& p);

/// Flux function F(eta) = (1 + k^a |eta|^a)^((n-1)/a) * eta. Odd in eta.
double flux(double eta, const ModelParams& p);

/// F'(eta) = (1 + k^a |eta|^a)^((n-1-a)/a) (1 + n k^a |eta|^a).
/// Coincides with viscosity_factor(|eta|). F'(0) = 1.
double flux_derivative(double eta, const ModelParams& p);

/// Critical shear rate eta0 = (1/kappa) (-1/n)^(1/alpha) where F' changes
/// sign. Present only for n < 0 and kappa != 0; otherwise F is strictly
/// increasing on [0, inf).
std::optional<double> critical_shear_rate(const ModelParams& p);

struct FluxSupremum {
    double value = 0.0;
    bool attained = false;  ///< true when the supremum is a maximum (n < 0)
};

/// Supremum of F on the increasing branch:
///   n < 0, kappa != 0  -> zeta0 = F(eta0), attained;
///   n = 0, kappa != 0  -> 1/kappa, not attained;
///   n > 0 or kappa = 0 -> none (F is unbounded).
std::optional<FluxSupremum> flux_max(const ModelParams& p);

struct InvertResult {
    double eta = 0.0;
    double residual = 0.0;        ///< |F(eta) - zeta|
    double condition = 1.0;       ///< 1/F'(eta), local sensitivity of the inverse
    bool degenerate_boundary = false;  ///< zeta hit the flux maximum (n < 0)
};

/// Inverse of F on the increasing branch for zeta >= 0. The tolerance is on
/// the flux residual |F(eta) - zeta|; near the flux maximum the inverse is
/// ill-conditioned in eta, which the condition field reports.
///
/// For n < 0, zeta within tol of zeta0 returns eta0 flagged
/// degenerate_boundary. Throws OutOfRangeError when zeta exceeds the
/// admissible range (nonexistence of a classical steady solution).
InvertResult invert_flux(double zeta, const ModelParams& p, double tol = 1e-12);

/// Classify the equation per the parameter ranges. For n < 0 the class
/// depends on the gradient magnitudes: below eta0 the equation is uniformly
/// parabolic, at or beyond eta0 it is backward (ill posed forward in time).
/// Without a gradient range the n < 0 case is reported as backward, since
/// no bound on |U_Y| is available.
RegimeClass classify_regime(const ModelParams& p,
                            std::optional<std::pair<double, double>> gradient_range = {});

}  // namespace cypipe
