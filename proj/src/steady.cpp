#include "cypipe/steady.hpp"

#include <cmath>
#include <sstream>

#include "cypipe/errors.hpp"
#include "cypipe/rheology.hpp"

namespace cypipe {

std::string to_string(ExistenceVerdict v) {
    switch (v) {
        case ExistenceVerdict::Classical: return "classical";
        case ExistenceVerdict::GeneralizedBoundaryCase: return "generalized_boundary_case";
        case ExistenceVerdict::None: return "none";
    }
    return "unknown";
}

ExistenceReport check_existence(const ModelParams& params,
                                const PressureProfile& profile) {
    ExistenceReport rep;
    const auto sup = b_integral_sup(params.eps, profile, params.R);
    rep.sup_B = sup.value;
    rep.sup_location = sup.location;

    const auto limit = flux_max(params);
    if (!limit) {
        rep.verdict = ExistenceVerdict::Classical;
        rep.basis = "unconditional: flux range is unbounded (n > 0 or kappa = 0)";
        return rep;
    }
    rep.threshold = limit->value;
    rep.margin = limit->value - sup.value;
    const double band = 1e-9 * limit->value;
    if (sup.value < limit->value - band) {
        rep.verdict = ExistenceVerdict::Classical;
        rep.basis = "sup B_eps below the flux-range limit";
    } else if (sup.value <= limit->value + band) {
        rep.verdict = ExistenceVerdict::GeneralizedBoundaryCase;
        rep.basis = "sup B_eps meets the flux-range limit; C1 generalized solution";
    } else {
        rep.verdict = ExistenceVerdict::None;
        rep.basis = "sup B_eps exceeds the flux-range limit; no steady solution";
    }
    return rep;
}

SteadyProfile solve_steady(const ModelParams& params, const PressureProfile& profile,
                           int n_cells, double invert_tol) {
    params.validate();
    SteadyProfile out;
    out.report = check_existence(params, profile);
    out.eps = params.eps;
    if (out.report.verdict == ExistenceVerdict::None) {
        std::ostringstream msg;
        msg << "steady solve refused: sup B_eps = " << out.report.sup_B
            << " exceeds the admissible limit " << *out.report.threshold;
        throw NoSolutionError(msg.str());
    }

    const PressureIntegral cache(profile, params, n_cells);
    const int N = n_cells;
    const double h = cache.spacing();
    out.grid.resize(N + 1);
    out.V.assign(N + 1, 0.0);
    out.V_Y.resize(N + 1);
    out.B.resize(N + 1);
    out.F_of_V_Y.resize(N + 1);

    // The cached B values can overshoot the analytic supremum by the
    // quadrature error; clamp boundary-case inversions into range.
    auto invert = [&](double zeta) {
        if (out.report.threshold && zeta > *out.report.threshold) {
            zeta = *out.report.threshold;
        }
        return invert_flux(zeta, params, invert_tol).eta;
    };

    std::vector<double> g_face(N);
    for (int i = 0; i <= N; ++i) {
        out.grid[i] = cache.node(i);
        out.B[i] = cache.at_node(i);
        out.V_Y[i] = invert(out.B[i]);
        out.F_of_V_Y[i] = flux(out.V_Y[i], params);
    }
    for (int i = 0; i < N; ++i) {
        g_face[i] = invert(cache.at_face(i));
    }
    // accumulate from the known boundary value at R downward
    for (int i = N - 1; i >= 0; --i) {
        const double panel = h / 6.0 * (out.V_Y[i] + 4.0 * g_face[i] + out.V_Y[i + 1]);
        out.V[i] = out.V[i + 1] - panel;
    }
    return out;
}

double steady_residual(const SteadyProfile& steady, const PressureProfile& profile,
                       const ModelParams& params) {
    if (steady.report.verdict == ExistenceVerdict::None) {
        throw ValidationError("steady_residual: profile carries a 'none' verdict");
    }
    const int N = static_cast<int>(steady.grid.size()) - 1;
    const double h = steady.grid[1] - steady.grid[0];
    double worst = 0.0;
    for (int i = 1; i < N; ++i) {
        const double gp = (steady.grid[i + 1] + params.eps) * steady.F_of_V_Y[i + 1];
        const double gm = (steady.grid[i - 1] + params.eps) * steady.F_of_V_Y[i - 1];
        const double div = (gp - gm) / (2.0 * h) / (steady.grid[i] + params.eps);
        worst = std::max(worst, std::abs(div - profile.value(steady.grid[i])));
    }
    return worst;
}

}  // namespace cypipe
