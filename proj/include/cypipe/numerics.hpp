#pragma once

/// Small numerical kernels shared across the solver: adaptive and cumulative
/// Simpson quadrature, safeguarded bracketing root finding, golden-section
/// maximization, cubic splines and dense polynomials.

#include <functional>
#include <vector>

namespace cypipe::numerics {

/// Adaptive composite Simpson quadrature of f over [a, b] with absolute
/// tolerance tol. Exact for cubics; subdivides until the local Richardson
/// estimate meets the tolerance share.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 60);

/// Cumulative Simpson antiderivative of f on the given sorted nodes:
/// result[k] = integral of f from nodes[0] to nodes[k], each interval
/// integrated by a single Simpson rule with midpoint evaluation.
std::vector<double> cumulative_simpson(const std::function<double(double)>& f,
                                       const std::vector<double>& nodes);

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

/// Safeguarded bracketing root finder (bisection with secant / inverse
/// quadratic acceleration, Brent style). Requires f(lo) and f(hi) of
/// opposite sign or zero. Converges to |interval| <= xtol + 4*eps*|x|.
RootResult brent_root(const std::function<double(double)>& f, double lo, double hi,
                      double xtol = 0.0, int max_iter = 200);

/// Golden-section maximization of f on [a, b] to interval tolerance xtol.
/// Returns (argmax, max value).
std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             double a, double b, double xtol);

/// Natural/clamped C2 cubic spline on strictly increasing abscissae.
class CubicSpline {
public:
    CubicSpline() = default;

    /// Clamped spline with prescribed end slopes.
    CubicSpline(std::vector<double> x, std::vector<double> y, double slope_lo,
                double slope_hi);

    /// Clamped spline with end slopes estimated by one-sided 3-point
    /// differences of the data.
    static CubicSpline with_estimated_slopes(std::vector<double> x,
                                             std::vector<double> y);

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    double max_abs_second_derivative() const;

    const std::vector<double>& abscissae() const { return x_; }

private:
    int interval(double x) const;
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

/// Dense polynomial with ascending coefficients.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    double value(double x) const;
    Polynomial derivative() const;
    const std::vector<double>& coefficients() const { return c_; }

private:
    std::vector<double> c_;
};

/// Solve a tridiagonal system in place (Thomas algorithm).
/// lower[0] and upper[n-1] are ignored. Overwrites rhs with the solution.
void solve_tridiagonal(const std::vector<double>& lower, std::vector<double>& diag,
                       const std::vector<double>& upper, std::vector<double>& rhs);

}  // namespace cypipe::numerics
