#include "cypipe/rheology.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cypipe/errors.hpp"
#include "cypipe/numerics.hpp"

namespace cypipe {

void ModelParams::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError(what); };
    if (!(alpha > 0.0)) fail("params.alpha must be > 0");
    if (!(beta > 0.0)) fail("params.beta must be > 0");
    if (!(kappa >= 0.0)) fail("params.kappa must be >= 0");
    if (!(R > 0.0)) fail("params.R must be > 0");
    if (!(eps > 0.0)) fail("params.eps must be > 0");
    if (!(eps <= eps0)) fail("params.eps must be <= params.eps0");
    if (!(eps0 < R)) fail("params.eps0 must be < params.R");
    if (!std::isfinite(n)) fail("params.n must be finite");
}

std::string to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::NonuniformlyParabolic: return "nonuniformly_parabolic";
        case RegimeTag::LinearParabolic: return "linear_parabolic";
        case RegimeTag::DegenerateAtInfinity: return "degenerate_at_infinity";
        case RegimeTag::UniformlyParabolicBelowEta0:
            return "uniformly_parabolic_below_eta0";
        case RegimeTag::BackwardParabolic: return "backward_parabolic";
    }
    return "unknown";
}

namespace {

// kappa^alpha * eta^alpha with the eta = 0 limit taken for any alpha > 0.
double shear_term(double eta, const ModelParams& p) {
    if (p.kappa == 0.0 || eta == 0.0) return 0.0;
    return std::pow(p.kappa * eta, p.alpha);
}

}  // namespace

double viscosity_factor(double eta, const ModelParams& p) {
    const double x = shear_term(eta, p);
    return (1.0 + p.n * x) * std::pow(1.0 + x, (p.n - 1.0 - p.alpha) / p.alpha);
}

double viscosity_ratio(double eta, const ModelParams& p) {
    const double x = shear_term(std::abs(eta), p);
    return std::pow(1.0 + x, (p.n - 1.0) / p.alpha);
}

double flux(double eta, const ModelParams& p) {
    return viscosity_ratio(eta, p) * eta;
}

double flux_derivative(double eta, const ModelParams& p) {
    return viscosity_factor(std::abs(eta), p);
}

std::optional<double> critical_shear_rate(const ModelParams& p) {
    if (p.n >= 0.0 || p.kappa == 0.0) return std::nullopt;
    return std::pow(-1.0 / p.n, 1.0 / p.alpha) / p.kappa;
}

std::optional<FluxSupremum> flux_max(const ModelParams& p) {
    if (p.kappa == 0.0 || p.n > 0.0) return std::nullopt;
    if (p.n == 0.0) return FluxSupremum{1.0 / p.kappa, false};
    const double eta0 = *critical_shear_rate(p);
    return FluxSupremum{flux(eta0, p), true};
}

InvertResult invert_flux(double zeta, const ModelParams& p, double tol) {
    if (zeta < 0.0) {
        throw OutOfRangeError(zeta, 0.0, "invert_flux: zeta must be >= 0");
    }
    if (zeta == 0.0) return {0.0, 0.0, 1.0, false};

    double lo = 0.0;
    double hi;
    const auto sup = flux_max(p);
    if (sup) {
        if (sup->attained) {
            // n < 0: increasing branch ends at eta0 with flux zeta0.
            const double zeta0 = sup->value;
            const double eta0 = *critical_shear_rate(p);
            if (zeta > zeta0 + tol) {
                std::ostringstream msg;
                msg << "invert_flux: zeta=" << zeta << " exceeds the flux maximum "
                    << zeta0 << "; no steady shear rate exists";
                throw OutOfRangeError(zeta, zeta0, msg.str());
            }
            if (zeta >= zeta0 - tol) {
                return {eta0, std::abs(flux(eta0, p) - zeta),
                        std::numeric_limits<double>::infinity(), true};
            }
            hi = eta0;
        } else {
            // n = 0: flux approaches 1/kappa without attaining it.
            const double limit = sup->value;
            if (zeta >= limit) {
                std::ostringstream msg;
                msg << "invert_flux: zeta=" << zeta << " is at or beyond the flux"
                    << " supremum " << limit << "; no steady shear rate exists";
                throw OutOfRangeError(zeta, limit, msg.str());
            }
            hi = 1.0;
            while (flux(hi, p) < zeta) hi *= 2.0;
        }
    } else {
        // unbounded range: grow the bracket geometrically
        hi = 1.0;
        while (flux(hi, p) < zeta) {
            hi *= 2.0;
            if (hi > 1e300) {
                throw OutOfRangeError(zeta, hi, "invert_flux: bracket overflow");
            }
        }
    }

    auto g = [&](double eta) { return flux(eta, p) - zeta; };
    const auto root = numerics::brent_root(g, lo, hi, 0.0);
    InvertResult out;
    out.eta = root.x;
    out.residual = std::abs(root.fx);
    const double fp = flux_derivative(root.x, p);
    out.condition = (fp > 0.0) ? 1.0 / fp : std::numeric_limits<double>::infinity();
    if (out.residual > tol) {
        // Fall back to pure bisection on the sign change if the accelerated
        // steps stagnated short of the flux tolerance.
        double a = lo, b = hi;
        for (int i = 0; i < 200 && std::abs(flux(0.5 * (a + b), p) - zeta) > tol; ++i) {
            const double m = 0.5 * (a + b);
            if (flux(m, p) < zeta) a = m; else b = m;
        }
        out.eta = 0.5 * (a + b);
        out.residual = std::abs(flux(out.eta, p) - zeta);
    }
    return out;
}

RegimeClass classify_regime(const ModelParams& p,
                            std::optional<std::pair<double, double>> gradient_range) {
    if (p.n == 1.0 || p.kappa == 0.0) return {RegimeTag::LinearParabolic, std::nullopt};
    if (p.n > 1.0) return {RegimeTag::NonuniformlyParabolic, std::nullopt};
    if (p.n >= 0.0) return {RegimeTag::DegenerateAtInfinity, std::nullopt};
    const double eta0 = *critical_shear_rate(p);
    RegimeClass rc{RegimeTag::BackwardParabolic, eta0};
    if (gradient_range) {
        const double hi = std::max(std::abs(gradient_range->first),
                                   std::abs(gradient_range->second));
        if (hi < eta0) rc.tag = RegimeTag::UniformlyParabolicBelowEta0;
    }
    return rc;
}

}  // namespace cypipe
