#pragma once

/// Pressure gradient profiles b(Y) on [0, R], their validation, and the
/// weighted running integral B_eps(Y) = 1/(Y+eps) * int_0^Y (s+eps) b(s) ds
/// that carries the flux of the steady solution.

#include <memory>
#include <string>
#include <vector>

#include "cypipe/model.hpp"
#include "cypipe/numerics.hpp"

namespace cypipe {

enum class ProfileKind { Constant, Polynomial, Tabulated };

/// Immutable pressure-gradient profile with value and derivative access.
/// Tabulated data is interpolated by a clamped C2 cubic spline.
class PressureProfile {
public:
    static PressureProfile constant(double value, double b0);
    static PressureProfile polynomial(std::vector<double> coefficients, double b0);
    static PressureProfile tabulated(std::vector<double> y, std::vector<double> b,
                                     double b0);

    double value(double Y) const;
    double derivative(double Y) const;
    /// Curvature bound of the interpolant (tabulated profiles; 0 otherwise
    /// for constants, exact for polynomials on demand).
    double max_abs_second_derivative() const;
    double b0() const { return b0_; }
    ProfileKind kind() const { return kind_; }
    std::string kind_name() const;

private:
    PressureProfile() = default;
    ProfileKind kind_ = ProfileKind::Constant;
    double b0_ = 0.0;
    double constant_ = 0.0;
    numerics::Polynomial poly_, poly_deriv_;
    std::shared_ptr<numerics::CubicSpline> spline_;
};

struct ProfileIssue {
    enum class Code { NegativePressure, ExceedsBound, IdenticallyZero };
    Code code;
    double location = 0.0;  ///< offending Y (meaningless for IdenticallyZero)
    double value = 0.0;
    std::string message;
};

struct ProfileValidation {
    bool accepted = false;
    std::vector<ProfileIssue> issues;
    double max_value = 0.0;
    double min_value = 0.0;
    double max_abs_second_derivative = 0.0;  ///< tabulated profiles only
};

/// Accepts iff 0 <= b <= b0 on a dense grid (>= 4096 points) and b is not
/// identically zero. Tabulated profiles additionally report the spline's
/// second-derivative bound.
ProfileValidation validate_profile(const PressureProfile& profile,
                                   const ModelParams& params);

/// B_eps(Y) by adaptive quadrature, error <= 1e-10 * (1 + b0 * R).
/// B_eps(0) = 0 exactly. eps = 0 evaluates the unregularized limit.
double b_integral(double Y, double eps, const PressureProfile& profile);

struct SupResult {
    double value = 0.0;
    double location = 0.0;
};

/// sup of B_eps over [0, R] by dense sampling (>= 4096 points) plus
/// golden-section refinement of the best bracket (1e-12 tolerance in Y).
SupResult b_integral_sup(double eps, const PressureProfile& profile, double R);

/// Cumulative antiderivative A(Y) = int_0^Y (s+eps) b(s) ds cached on the
/// solver half-grid (nodes and faces of an N-cell uniform grid), built with
/// composite Simpson, together with the supremum of B_eps over [0, R].
/// Shared by the steady solve and the residual check.
class PressureIntegral {
public:
    PressureIntegral(const PressureProfile& profile, const ModelParams& params, int n_cells);

    int cells() const { return n_cells_; }
    double spacing() const { return h_; }
    double eps() const { return eps_; }
    double sup_value() const { return sup_.value; }
    double sup_location() const { return sup_.location; }

    double node(int i) const { return static_cast<double>(i) * h_; }
    double face(int i) const { return (static_cast<double>(i) + 0.5) * h_; }

    /// A at node i (grid index 0..N).
    double antiderivative_node(int i) const { return A_[2 * i]; }
    /// A at face i+1/2 (face index 0..N-1).
    double antiderivative_face(int i) const { return A_[2 * i + 1]; }

    /// B_eps at node i.
    double at_node(int i) const { return A_[2 * i] / (node(i) + eps_); }
    /// B_eps at face i+1/2.
    double at_face(int i) const { return A_[2 * i + 1] / (face(i) + eps_); }

    /// Largest cached B_eps value over nodes and faces.
    double max_cached() const;

private:
    int n_cells_ = 0;
    double h_ = 0.0;
    double eps_ = 0.0;
    std::vector<double> A_;  // antiderivative on the half grid, size 2N+1
    SupResult sup_;
};

}  // namespace cypipe
