#include "cypipe/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cypipe/errors.hpp"

namespace cypipe {

PressureProfile PressureProfile::constant(double value, double b0) {
    PressureProfile p;
    p.kind_ = ProfileKind::Constant;
    p.constant_ = value;
    p.b0_ = b0;
    return p;
}

PressureProfile PressureProfile::polynomial(std::vector<double> coefficients, double b0) {
    PressureProfile p;
    p.kind_ = ProfileKind::Polynomial;
    p.poly_ = numerics::Polynomial(std::move(coefficients));
    p.poly_deriv_ = p.poly_.derivative();
    p.b0_ = b0;
    return p;
}

PressureProfile PressureProfile::tabulated(std::vector<double> y, std::vector<double> b,
                                           double b0) {
    PressureProfile p;
    p.kind_ = ProfileKind::Tabulated;
    p.spline_ = std::make_shared<numerics::CubicSpline>(
        numerics::CubicSpline::with_estimated_slopes(std::move(y), std::move(b)));
    p.b0_ = b0;
    return p;
}

double PressureProfile::value(double Y) const {
    switch (kind_) {
        case ProfileKind::Constant: return constant_;
        case ProfileKind::Polynomial: return poly_.value(Y);
        case ProfileKind::Tabulated: return spline_->value(Y);
    }
    return 0.0;
}

double PressureProfile::derivative(double Y) const {
    switch (kind_) {
        case ProfileKind::Constant: return 0.0;
        case ProfileKind::Polynomial: return poly_deriv_.value(Y);
        case ProfileKind::Tabulated: return spline_->derivative(Y);
    }
    return 0.0;
}

double PressureProfile::max_abs_second_derivative() const {
    if (kind_ == ProfileKind::Tabulated) return spline_->max_abs_second_derivative();
    return 0.0;
}

std::string PressureProfile::kind_name() const {
    switch (kind_) {
        case ProfileKind::Constant: return "constant";
        case ProfileKind::Polynomial: return "polynomial";
        case ProfileKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

ProfileValidation validate_profile(const PressureProfile& profile,
                                   const ModelParams& params) {
    constexpr int kGridPoints = 4097;
    ProfileValidation report;
    const double b0 = profile.b0();
    const double tol = 1e-12 * std::max(1.0, b0);
    double max_v = -std::numeric_limits<double>::infinity();
    double min_v = std::numeric_limits<double>::infinity();
    double worst_neg = 0.0, worst_neg_y = 0.0;
    double worst_exc = 0.0, worst_exc_y = 0.0;
    for (int k = 0; k < kGridPoints; ++k) {
        const double Y = params.R * static_cast<double>(k) / (kGridPoints - 1);
        const double v = profile.value(Y);
        max_v = std::max(max_v, v);
        min_v = std::min(min_v, v);
        if (v < -tol && v < worst_neg) { worst_neg = v; worst_neg_y = Y; }
        if (v > b0 + tol && v - b0 > worst_exc) { worst_exc = v - b0; worst_exc_y = Y; }
    }
    report.max_value = max_v;
    report.min_value = min_v;
    if (worst_neg < 0.0) {
        std::ostringstream msg;
        msg << "pressure gradient is negative at Y=" << worst_neg_y << " (b=" << worst_neg << ")";
        report.issues.push_back({ProfileIssue::Code::NegativePressure, worst_neg_y,
                                 worst_neg, msg.str()});
    }
    if (worst_exc > 0.0) {
        std::ostringstream msg;
        msg << "pressure gradient exceeds its declared bound b0=" << b0 << " at Y="
            << worst_exc_y << " (b=" << b0 + worst_exc << ")";
        report.issues.push_back({ProfileIssue::Code::ExceedsBound, worst_exc_y,
                                 b0 + worst_exc, msg.str()});
    }
    if (max_v <= tol && min_v >= -tol) {
        report.issues.push_back({ProfileIssue::Code::IdenticallyZero, 0.0, 0.0,
                                 "pressure gradient is identically zero"});
    }
    if (profile.kind() == ProfileKind::Tabulated) {
        // C2 by construction; record the curvature bound for the report.
        report.max_abs_second_derivative = profile.max_abs_second_derivative();
    }
    report.accepted = report.issues.empty();
    return report;
}

double b_integral(double Y, double eps, const PressureProfile& profile) {
    if (Y == 0.0) return 0.0;
    // tolerance on the antiderivative, scaled so the division by (Y+eps)
    // keeps the returned value within 1e-10 (1 + b0 Y)
    const double tol = 1e-10 * (1.0 + profile.b0() * Y) * (Y + eps) / 16.0;
    const double integral = numerics::adaptive_simpson(
        [&](double s) { return (s + eps) * profile.value(s); }, 0.0, Y, tol);
    return integral / (Y + eps);
}

SupResult b_integral_sup(double eps, const PressureProfile& profile, double R) {
    constexpr int kScan = 4096;
    // Incremental antiderivative over the scan grid, one adaptive panel each.
    const double h = R / kScan;
    const double tol = 1e-12 * (1.0 + profile.b0() * R) / kScan;
    auto f = [&](double s) { return (s + eps) * profile.value(s); };
    double A = 0.0;
    double best_val = 0.0, best_y = 0.0;
    std::vector<double> Acache(kScan + 1, 0.0);
    for (int k = 1; k <= kScan; ++k) {
        const double a = (k - 1) * h;
        const double b = k * h;
        A += numerics::adaptive_simpson(f, a, b, tol);
        Acache[k] = A;
        const double B = A / (b + eps);
        if (B > best_val) { best_val = B; best_y = b; }
    }
    // Golden-section refinement around the best scan point.
    const double lo = std::max(0.0, best_y - h);
    const double hi = std::min(R, best_y + h);
    const int k_lo = static_cast<int>(std::floor(lo / h));
    auto B_local = [&](double Y) {
        if (Y == 0.0) return 0.0;
        const double base = Acache[k_lo];
        const double tail = numerics::adaptive_simpson(f, k_lo * h, Y, 1e-14 * (1.0 + profile.b0() * R));
        return (base + tail) / (Y + eps);
    };
    auto [ym, vm] = numerics::golden_section_max(B_local, lo, hi, 1e-12);
    SupResult out;
    if (vm >= best_val) {
        out.value = vm;
        out.location = ym;
    } else {
        out.value = best_val;
        out.location = best_y;
    }
    return out;
}

PressureIntegral::PressureIntegral(const PressureProfile& profile,
                                   const ModelParams& params, int n_cells)
    : n_cells_(n_cells), h_(params.R / n_cells), eps_(params.eps) {
    if (n_cells < 2) throw ValidationError("grid must have at least 2 cells");
    std::vector<double> half_grid(2 * n_cells_ + 1);
    for (int k = 0; k <= 2 * n_cells_; ++k) {
        half_grid[k] = 0.5 * h_ * static_cast<double>(k);
    }
    A_ = numerics::cumulative_simpson(
        [&](double s) { return (s + eps_) * profile.value(s); }, half_grid);
    sup_ = b_integral_sup(eps_, profile, params.R);
}

double PressureIntegral::max_cached() const {
    double mx = 0.0;
    for (int k = 1; k <= 2 * n_cells_; ++k) {
        mx = std::max(mx, A_[k] / (0.5 * h_ * k + eps_));
    }
    return mx;
}

}  // namespace cypipe
