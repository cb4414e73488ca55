#pragma once

#include <optional>
#include <string>

namespace cypipe {

/// Rheological and dynamical parameters of the pipe flow problem.
///
/// The viscosity law is mu ~ (1 + kappa^alpha |shear|^alpha)^((n-1)/alpha)
/// with power index n, transition sharpness alpha and Carreau number kappa.
/// beta couples the time derivative through 8*beta^2 = Re*St. eps is the
/// axis regularization shift, capped by eps0 << R.
struct ModelParams {
    double n = 1.0;       ///< power index, any real
    double alpha = 2.0;   ///< transition exponent, > 0
    double kappa = 0.0;   ///< Carreau number, >= 0
    double beta = 0.5;    ///< 8*beta^2 = Re*St, > 0
    double R = 1.0;       ///< pipe radius, > 0
    double eps = 1e-3;    ///< regularization, 0 < eps <= eps0
    double eps0 = 1e-2;   ///< regularization cap, eps0 < R

    /// Throws ValidationError naming the offending field if any constraint
    /// (alpha > 0, beta > 0, kappa >= 0, R > 0, 0 < eps <= eps0 < R) fails.
    void validate() const;

    double eight_beta_sq() const { return 8.0 * beta * beta; }
};

/// Structural classification of the velocity equation.
enum class RegimeTag {
    NonuniformlyParabolic,       ///< n > 1, kappa != 0
    LinearParabolic,             ///< n = 1 or kappa = 0
    DegenerateAtInfinity,        ///< n in [0,1), kappa != 0
    UniformlyParabolicBelowEta0, ///< n < 0, gradients confined below eta0
    BackwardParabolic            ///< n < 0, gradients reach eta0
};

std::string to_string(RegimeTag tag);

struct RegimeClass {
    RegimeTag tag;
    /// Critical shear rate, present only for n < 0, kappa != 0.
    std::optional<double> eta0;
};

}  // namespace cypipe
