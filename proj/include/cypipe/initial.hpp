#pragma once

/// Initial velocity profiles Psi(Y) with derivative access up to order 2,
/// plus the compatibility check linking Psi to the boundary and pressure
/// data: Psi'(0) = 0, Psi(R) = 0, Psi'(R) = 0, Psi''(R) + b(R) = 0.

#include <memory>
#include <string>
#include <vector>

#include "cypipe/model.hpp"
#include "cypipe/numerics.hpp"
#include "cypipe/pressure.hpp"

namespace cypipe {

enum class InitialKind { Zero, CompatibleQuartic, Polynomial, Tabulated };

class InitialCondition {
public:
    /// Psi identically zero (compatible only when b(R) = 0).
    static InitialCondition zero();

    /// The quartic family Psi(Y) = -b(R) (R^2 - Y^2)^2 / (8 R^2), compatible
    /// with any profile by construction.
    static InitialCondition compatible_quartic(const PressureProfile& profile, double R);

    static InitialCondition polynomial(std::vector<double> coefficients);

    /// Tabulated samples interpolated by a clamped C2 cubic spline.
    static InitialCondition tabulated(std::vector<double> y, std::vector<double> psi);

    double psi(double Y) const;
    double dpsi(double Y) const;
    double d2psi(double Y) const;
    InitialKind kind() const { return kind_; }
    std::string kind_name() const;

private:
    InitialCondition() = default;
    InitialKind kind_ = InitialKind::Zero;
    double quartic_scale_ = 0.0;  // -b(R) / (8 R^2)
    double R_ = 1.0;
    numerics::Polynomial poly_, dpoly_, d2poly_;
    std::shared_ptr<numerics::CubicSpline> spline_;
};

struct CompatibilityReport {
    bool accepted = false;
    /// Residuals of the four conditions, in order:
    /// Psi'(0), Psi(R), Psi'(R), Psi''(R) + b(R).
    double residuals[4] = {0.0, 0.0, 0.0, 0.0};
    double tolerance = 0.0;
    std::string message;
};

/// Checks the four compatibility conditions within 1e-8 * max(1, b0).
CompatibilityReport validate_initial(const InitialCondition& ic,
                                     const PressureProfile& profile,
                                     const ModelParams& params);

}  // namespace cypipe
