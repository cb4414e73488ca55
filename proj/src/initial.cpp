#include "cypipe/initial.hpp"

#include <cmath>
#include <sstream>

namespace cypipe {

InitialCondition InitialCondition::zero() {
    InitialCondition ic;
    ic.kind_ = InitialKind::Zero;
    return ic;
}

InitialCondition InitialCondition::compatible_quartic(const PressureProfile& profile,
                                                      double R) {
    InitialCondition ic;
    ic.kind_ = InitialKind::CompatibleQuartic;
    ic.R_ = R;
    ic.quartic_scale_ = -profile.value(R) / (8.0 * R * R);
    return ic;
}

InitialCondition InitialCondition::polynomial(std::vector<double> coefficients) {
    InitialCondition ic;
    ic.kind_ = InitialKind::Polynomial;
    ic.poly_ = numerics::Polynomial(std::move(coefficients));
    ic.dpoly_ = ic.poly_.derivative();
    ic.d2poly_ = ic.dpoly_.derivative();
    return ic;
}

InitialCondition InitialCondition::tabulated(std::vector<double> y,
                                             std::vector<double> psi) {
    InitialCondition ic;
    ic.kind_ = InitialKind::Tabulated;
    ic.spline_ = std::make_shared<numerics::CubicSpline>(
        numerics::CubicSpline::with_estimated_slopes(std::move(y), std::move(psi)));
    return ic;
}

double InitialCondition::psi(double Y) const {
    switch (kind_) {
        case InitialKind::Zero: return 0.0;
        case InitialKind::CompatibleQuartic: {
            const double q = R_ * R_ - Y * Y;
            return quartic_scale_ * q * q;
        }
        case InitialKind::Polynomial: return poly_.value(Y);
        case InitialKind::Tabulated: return spline_->value(Y);
    }
    return 0.0;
}

double InitialCondition::dpsi(double Y) const {
    switch (kind_) {
        case InitialKind::Zero: return 0.0;
        case InitialKind::CompatibleQuartic:
            return quartic_scale_ * (-4.0 * Y) * (R_ * R_ - Y * Y);
        case InitialKind::Polynomial: return dpoly_.value(Y);
        case InitialKind::Tabulated: return spline_->derivative(Y);
    }
    return 0.0;
}

double InitialCondition::d2psi(double Y) const {
    switch (kind_) {
        case InitialKind::Zero: return 0.0;
        case InitialKind::CompatibleQuartic:
            return quartic_scale_ * (-4.0 * R_ * R_ + 12.0 * Y * Y);
        case InitialKind::Polynomial: return d2poly_.value(Y);
        case InitialKind::Tabulated: return spline_->second_derivative(Y);
    }
    return 0.0;
}

std::string InitialCondition::kind_name() const {
    switch (kind_) {
        case InitialKind::Zero: return "zero";
        case InitialKind::CompatibleQuartic: return "compatible_quartic";
        case InitialKind::Polynomial: return "polynomial";
        case InitialKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

CompatibilityReport validate_initial(const InitialCondition& ic,
                                     const PressureProfile& profile,
                                     const ModelParams& params) {
    CompatibilityReport rep;
    const double R = params.R;
    rep.tolerance = 1e-8 * std::max(1.0, profile.b0());
    rep.residuals[0] = std::abs(ic.dpsi(0.0));
    rep.residuals[1] = std::abs(ic.psi(R));
    rep.residuals[2] = std::abs(ic.dpsi(R));
    rep.residuals[3] = std::abs(ic.d2psi(R) + profile.value(R));
    static const char* names[4] = {"Psi'(0)=0", "Psi(R)=0", "Psi'(R)=0",
                                   "Psi''(R)+b(R)=0"};
    rep.accepted = true;
    std::ostringstream msg;
    for (int k = 0; k < 4; ++k) {
        if (rep.residuals[k] > rep.tolerance) {
            rep.accepted = false;
            if (msg.tellp() > 0) msg << "; ";
            msg << "condition " << (k + 1) << " (" << names[k] << ") residual "
                << rep.residuals[k];
        }
    }
    rep.message = rep.accepted ? "compatible" : msg.str();
    return rep;
}

}  // namespace cypipe
