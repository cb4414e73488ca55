#include "cypipe/bounds.hpp"

#include <cmath>
#include <limits>

#include "cypipe/errors.hpp"
#include "cypipe/rheology.hpp"

namespace cypipe {

namespace {

constexpr int kSupGrid = 100001;

/// Dense-grid supremum of f over [0, R].
template <typename F>
double dense_sup(F&& f, double R) {
    double mx = 0.0;
    for (int k = 0; k < kSupGrid; ++k) {
        const double Y = R * static_cast<double>(k) / (kSupGrid - 1);
        mx = std::max(mx, f(Y));
    }
    return mx;
}

}  // namespace

std::string to_string(SolvabilityCase c) {
    switch (c) {
        case SolvabilityCase::GlobalParabolic: return "global_parabolic";
        case SolvabilityCase::FiniteHorizonZeroN: return "finite_horizon_zero_n";
        case SolvabilityCase::LocalHorizonNegativeN: return "local_horizon_negative_n";
    }
    return "unknown";
}

SolvabilityCase classify_case(const ModelParams& params) {
    if (params.kappa == 0.0 || params.n > 0.0) return SolvabilityCase::GlobalParabolic;
    if (params.n == 0.0) return SolvabilityCase::FiniteHorizonZeroN;
    return SolvabilityCase::LocalHorizonNegativeN;
}

double compute_k1(const InitialCondition& ic, const PressureProfile& profile,
                  double R) {
    // sup over [0, R) of |Psi / (R^2 - Y^2)|; the Y -> R limit is
    // |Psi''(R)| / 2 by two rounds of l'Hopital (Psi(R) = Psi'(R) = 0).
    double sup = std::abs(ic.d2psi(R)) / 2.0;
    for (int k = 0; k + 1 < kSupGrid; ++k) {
        const double Y = R * static_cast<double>(k) / (kSupGrid - 1);
        sup = std::max(sup, std::abs(ic.psi(Y)) / (R * R - Y * Y));
    }
    return std::max(sup, 0.5 * profile.b0());
}

double compute_k2(const InitialCondition& ic, const PressureProfile& profile,
                  const ModelParams& params) {
    const double R = params.R;
    const double diffusion_sup = dense_sup(
        [&](double Y) {
            return std::abs(viscosity_factor(std::abs(ic.dpsi(Y)), params) * ic.d2psi(Y));
        },
        R);
    // (1 + k^a |Psi'|^a)^((n-1)/a) |Psi'/Y|; at the axis Psi'(0) = 0 so the
    // quotient tends to Psi''(0).
    double axis_sup = std::abs(ic.d2psi(0.0));
    for (int k = 1; k < kSupGrid; ++k) {
        const double Y = R * static_cast<double>(k) / (kSupGrid - 1);
        const double dp = ic.dpsi(Y);
        axis_sup = std::max(axis_sup, viscosity_ratio(dp, params) * std::abs(dp / Y));
    }
    return (diffusion_sup + axis_sup + profile.b0()) / params.eight_beta_sq();
}

double compute_k3(double K2, const PressureProfile& profile, const ModelParams& params) {
    return 0.5 * profile.b0() + 4.0 * params.beta * params.beta * K2;
}

double compute_k4(double K3, const ModelParams& params) {
    const double base = K3 * (params.R + params.eps0);
    if (params.kappa == 0.0) return base;
    const double powered =
        std::pow(base * std::pow(params.kappa, -params.alpha), 1.0 / params.n);
    return std::max(base, powered);
}

double compute_k5(const InitialCondition& ic, const PressureProfile& profile,
                  const ModelParams& params) {
    const double grad_b =
        dense_sup([&](double Y) { return std::abs(profile.derivative(Y)); }, params.R) /
        params.eight_beta_sq();
    const double grad_psi =
        dense_sup([&](double Y) { return std::abs(ic.dpsi(Y)); }, params.R);
    const double zeta = 0.5 * profile.b0() * (params.R + params.eps0);
    const double wall = invert_flux(zeta, params).eta;
    return std::max({grad_b, grad_psi, wall});
}

double compute_k6(const ModelParams& params, double b0, double K3,
                  std::optional<double> K4) {
    const double numerator = 12.0 * params.beta * params.beta * K3 + 1.5 * b0;
    if (params.kappa == 0.0 || params.n >= 1.0) return numerator;
    if (!(params.n > 0.0)) {
        throw ValidationError("K6 applies to n > 0 with kappa != 0, or kappa = 0");
    }
    if (!K4) throw ValidationError("K6 for 0 < n < 1 requires K4");
    return numerator / viscosity_factor(*K4, params);
}

double compute_k7(const ModelParams& params, double b0, double K3, double K5,
                  double T0) {
    const double numerator = 12.0 * params.beta * params.beta * K3 + 1.5 * b0;
    return numerator / viscosity_factor(K5 * std::exp(T0), params);
}

std::optional<double> compute_lambda(double K5, const ModelParams& params) {
    const auto eta0 = critical_shear_rate(params);
    if (!eta0 || !(K5 < *eta0) || !(K5 > 0.0)) return std::nullopt;
    return std::log(*eta0 / K5);
}

BoundsSet compute_bounds(const InitialCondition& ic, const PressureProfile& profile,
                         const ModelParams& params, double T0) {
    BoundsSet bs;
    bs.solvability_case = classify_case(params);
    bs.exp_factor = std::max(1.0, params.eight_beta_sq());
    bs.K1 = compute_k1(ic, profile, params.R);
    bs.K2 = compute_k2(ic, profile, params);
    bs.K3 = compute_k3(bs.K2, profile, params);
    bs.eta0 = critical_shear_rate(params);
    if (const auto zm = flux_max(params)) bs.zeta0 = zm->attained
        ? std::optional<double>(zm->value) : std::nullopt;
    if (params.n == 0.0 && params.kappa != 0.0) bs.zeta0 = std::nullopt;

    try {
        bs.K5 = compute_k5(ic, profile, params);
        bs.linear_envelope_slope =
            invert_flux(0.5 * profile.b0() * (params.R + params.eps0), params).eta;
    } catch (const OutOfRangeError&) {
        // b0 (R+eps0)/2 exceeds the flux range: the wall envelope and K5
        // are not applicable ("bound not applicable" rather than failure).
        bs.K5.reset();
        bs.linear_envelope_slope.reset();
    }

    if (bs.solvability_case == SolvabilityCase::GlobalParabolic) {
        bs.K4 = compute_k4(bs.K3, params);
        bs.K6 = compute_k6(params, profile.b0(), bs.K3, bs.K4);
    } else {
        bs.horizon = T0;
        if (bs.K5) {
            if (bs.solvability_case == SolvabilityCase::LocalHorizonNegativeN) {
                bs.lambda = compute_lambda(*bs.K5, params);
            }
            // K7 needs the gradient envelope at the horizon to stay inside
            // the parabolic range (always true for n = 0; below eta0 for n < 0)
            const bool envelope_ok =
                !bs.eta0 || (*bs.K5) * std::exp(T0) < *bs.eta0;
            if (envelope_ok) {
                bs.K7 = compute_k7(params, profile.b0(), bs.K3, *bs.K5, T0);
            }
        }
    }
    return bs;
}

BoundReport monitor_bounds(const std::vector<double>& U,
                           const std::vector<double>& U_Y_face,
                           const std::vector<double>& U_T, double T, double dt,
                           long step, double h, const BoundsSet& bounds,
                           const ModelParams& params, double b0) {
    BoundReport rep;
    rep.step = step;
    rep.T = T;
    rep.dt = dt;
    const int N = static_cast<int>(U.size()) - 1;
    const double R = params.R;
    const double slack = 10.0 * h * h;
    const bool parabolic_envelope = (params.n >= 1.0 || params.kappa == 0.0);
    const bool case_i = bounds.solvability_case == SolvabilityCase::GlobalParabolic;

    auto worst_node = [&](auto&& lhs, auto&& rhs, BoundCheck& c, int count) {
        c.margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < count; ++i) {
            const double m = rhs(i) - lhs(i);
            if (m < c.margin) {
                c.margin = m;
                c.bound = rhs(i);
                c.observed = lhs(i);
            }
        }
        c.pass = c.margin >= 0.0;
    };

    {
        BoundCheck c{"velocity_parabolic_envelope", parabolic_envelope};
        if (c.enabled) {
            worst_node([&](int i) { return std::abs(U[i]); },
                       [&](int i) {
                           const double Y = h * i;
                           return bounds.K1 * (R * R - Y * Y) + slack;
                       },
                       c, N + 1);
        }
        rep.checks.push_back(c);
    }
    {
        BoundCheck c{"wall_gradient", parabolic_envelope};
        if (c.enabled) {
            c.observed = std::abs(U_Y_face.back());
            c.bound = 2.0 * bounds.K1 * R + slack;
            c.margin = c.bound - c.observed;
            c.pass = c.margin >= 0.0;
        }
        rep.checks.push_back(c);
    }
    {
        BoundCheck c{"velocity_linear_envelope",
                     !case_i && bounds.envelope_hypotheses_hold &&
                         bounds.linear_envelope_slope.has_value()};
        if (c.enabled) {
            const double slope = *bounds.linear_envelope_slope;
            worst_node([&](int i) { return std::abs(U[i]); },
                       [&](int i) { return (R - h * i) * slope + slack; }, c, N + 1);
        }
        rep.checks.push_back(c);
    }
    {
        BoundCheck c{"time_derivative", true};
        worst_node([&](int i) { return std::abs(U_T[i]); },
                   [&](int) { return bounds.K2 + slack; }, c, N + 1);
        rep.checks.push_back(c);
    }
    {
        // integrated face form: (Y+eps) |F(U_Y)| <= K3 (Y+eps)^2
        BoundCheck c{"face_flux", true};
        worst_node(
            [&](int i) {
                const double u = h * (i + 0.5) + params.eps;
                return u * std::abs(flux(U_Y_face[i], params));
            },
            [&](int i) {
                const double u = h * (i + 0.5) + params.eps;
                return bounds.K3 * u * u + slack;
            },
            c, N);
        rep.checks.push_back(c);
    }
    {
        BoundCheck c{"gradient_uniform", case_i && bounds.K4.has_value()};
        if (c.enabled) {
            worst_node([&](int i) { return std::abs(U_Y_face[i]); },
                       [&](int) { return *bounds.K4 + slack; }, c, N);
        }
        rep.checks.push_back(c);
    }
    const bool exp_enabled =
        !case_i && bounds.envelope_hypotheses_hold && bounds.K5.has_value();
    {
        BoundCheck c{"gradient_exponential", exp_enabled};
        if (c.enabled) {
            const double env = bounds.exp_factor * (*bounds.K5) * std::exp(T) + slack;
            worst_node([&](int i) { return std::abs(U_Y_face[i]); },
                       [&](int) { return env; }, c, N);
        }
        rep.checks.push_back(c);
    }
    {
        // the same envelope with unit factor, logged alongside
        BoundCheck c{"gradient_exponential_unit_factor", exp_enabled};
        if (c.enabled) {
            const double env = (*bounds.K5) * std::exp(T) + slack;
            worst_node([&](int i) { return std::abs(U_Y_face[i]); },
                       [&](int) { return env; }, c, N);
        }
        rep.checks.push_back(c);
    }
    (void)b0;
    return rep;
}

}  // namespace cypipe
