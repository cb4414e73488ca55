#include "cypipe/unsteady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cypipe/errors.hpp"
#include "cypipe/rheology.hpp"
#include "cypipe/steady.hpp"

namespace cypipe {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::ReachedTend: return "reached_t_end";
        case Termination::ReachedLambda: return "reached_lambda";
        case Termination::BackwardRegimeDetected: return "backward_regime_detected";
        case Termination::NewtonFailure: return "newton_failure";
    }
    return "unknown";
}

UnsteadySolver::UnsteadySolver(const ModelParams& params, const PressureProfile& profile,
                               const Grid& grid)
    : params_(params), grid_(grid), b0_(profile.b0()) {
    params_.validate();
    b_node_.resize(grid_.N + 1);
    u_node_.resize(grid_.N + 1);
    u_face_.resize(grid_.N);
    for (int i = 0; i <= grid_.N; ++i) {
        b_node_[i] = profile.value(grid_.node(i));
        u_node_[i] = grid_.node(i) + params_.eps;
    }
    for (int i = 0; i < grid_.N; ++i) u_face_[i] = grid_.face(i) + params_.eps;
    newton_tol_ = 1e-10 * (1.0 + b0_);
}

std::vector<double> UnsteadySolver::apply_operator(const std::vector<double>& U) const {
    const int N = grid_.N;
    const double h = grid_.h;
    std::vector<double> rhs(N + 1, 0.0);
    std::vector<double> G(N);  // face fluxes (Y+eps) F(dU)
    for (int i = 0; i < N; ++i) {
        G[i] = u_face_[i] * flux((U[i + 1] - U[i]) / h, params_);
    }
    // axis node: ghost reflection U_{-1} = U_1 collapses the two face fluxes
    // to 2 eps F(dU_{1/2}), so the row reduces to (2/h) F(dU_{1/2}) + b_0
    rhs[0] = 2.0 * flux((U[1] - U[0]) / h, params_) / h + b_node_[0];
    for (int i = 1; i < N; ++i) {
        rhs[i] = (G[i] - G[i - 1]) / (h * u_node_[i]) + b_node_[i];
    }
    rhs[N] = 0.0;
    return rhs;
}

StepResult UnsteadySolver::newton_solve(std::vector<double>& V,
                                        const std::vector<double>& U_old, double dt,
                                        double tol) const {
    const int N = grid_.N;
    const double h = grid_.h;
    const double mass = (dt > 0.0) ? params_.eight_beta_sq() / dt : 0.0;
    constexpr int kMaxIter = 30;
    constexpr int kMaxDamp = 12;

    // The iteration runs on the increment D = W - U_old; keeping D as the
    // unknown avoids the cancellation in mass*(W - U_old) when mass is large.
    std::vector<double> D(N + 1), W(N + 1);
    for (int i = 0; i <= N; ++i) D[i] = V[i] - U_old[i];
    D[N] = 0.0;

    auto residual = [&](const std::vector<double>& Dk, std::vector<double>& res) {
        for (int i = 0; i <= N; ++i) W[i] = U_old[i] + Dk[i];
        W[N] = 0.0;
        const auto L = apply_operator(W);
        double norm = 0.0;
        for (int i = 0; i < N; ++i) {
            res[i] = mass * Dk[i] - L[i];
            norm = std::max(norm, std::abs(res[i]));
        }
        res[N] = 0.0;  // Dirichlet row
        return norm;
    };

    std::vector<double> res(N + 1, 0.0), lower(N + 1, 0.0), diag(N + 1, 0.0),
        upper(N + 1, 0.0), rhs(N + 1, 0.0), trial(N + 1, 0.0);
    double norm = residual(D, res);
    StepResult out;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        if (norm <= tol) {
            out.newton_iterations = iter - 1;
            out.residual = norm;
            for (int i = 0; i <= N; ++i) V[i] = U_old[i] + D[i];
            V[N] = 0.0;
            return out;
        }
        // tridiagonal Jacobian of mass*D - L(U_old + D); face weights F'(dU)
        for (int i = 0; i <= N; ++i) {
            W[i] = U_old[i] + D[i];
            lower[i] = diag[i] = upper[i] = 0.0;
        }
        W[N] = 0.0;
        const double fp0 = flux_derivative((W[1] - W[0]) / h, params_);
        diag[0] = mass + 2.0 * fp0 / (h * h);
        upper[0] = -2.0 * fp0 / (h * h);
        for (int i = 1; i < N; ++i) {
            const double fpl = flux_derivative((W[i] - W[i - 1]) / h, params_);
            const double fpr = flux_derivative((W[i + 1] - W[i]) / h, params_);
            const double wl = u_face_[i - 1] * fpl / (h * h * u_node_[i]);
            const double wr = u_face_[i] * fpr / (h * h * u_node_[i]);
            lower[i] = -wl;
            upper[i] = -wr;
            diag[i] = mass + wl + wr;
        }
        diag[N] = 1.0;
        for (int i = 0; i <= N; ++i) rhs[i] = -res[i];
        numerics::solve_tridiagonal(lower, diag, upper, rhs);

        // a direction below the representable update is convergence at
        // machine precision, whatever the residual floor
        double dir = 0.0, scale = 0.0;
        for (int i = 0; i <= N; ++i) {
            dir = std::max(dir, std::abs(rhs[i]));
            scale = std::max(scale, std::abs(U_old[i]) + std::abs(D[i]));
        }
        if (dir <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
            out.newton_iterations = iter - 1;
            out.residual = norm;
            for (int i = 0; i <= N; ++i) V[i] = U_old[i] + D[i];
            V[N] = 0.0;
            return out;
        }

        // damped update: halve until the residual norm does not grow
        double lambda = 1.0;
        double new_norm = std::numeric_limits<double>::infinity();
        for (int d = 0; d <= kMaxDamp; ++d) {
            for (int i = 0; i <= N; ++i) trial[i] = D[i] + lambda * rhs[i];
            trial[N] = 0.0;
            new_norm = residual(trial, res);
            if (new_norm < norm || new_norm <= tol) break;
            lambda *= 0.5;
        }
        if (!(new_norm < norm) && new_norm > tol) {
            throw NewtonFailureError(iter, new_norm,
                                     "Newton iteration stagnated (damping exhausted)");
        }
        D.swap(trial);
        norm = new_norm;
    }
    std::ostringstream msg;
    msg << "Newton failed to reach tolerance " << tol << " (residual " << norm << ")";
    throw NewtonFailureError(kMaxIter, norm, msg.str());
}

StepResult UnsteadySolver::step(Field& field, double dt) const {
    const int N = grid_.N;
    std::vector<double> V = field.U;
    const StepResult r = newton_solve(V, field.U, dt, newton_tol_);
    field.U_T.assign(N + 1, 0.0);
    for (int i = 0; i <= N; ++i) field.U_T[i] = (V[i] - field.U[i]) / dt;
    field.U = std::move(V);
    field.U[N] = 0.0;
    field.U_Y_face.resize(N);
    for (int i = 0; i < N; ++i) {
        field.U_Y_face[i] = (field.U[i + 1] - field.U[i]) / grid_.h;
    }
    field.T += dt;
    field.step_count += 1;
    return r;
}

std::vector<double> UnsteadySolver::solve_steady_state(std::vector<double> guess) const {
    std::vector<double> root = guess;
    root[grid_.N] = 0.0;
    newton_solve(root, guess, 0.0, newton_tol_);
    return root;
}

std::vector<int> detect_degenerate(const Field& field, const Grid& grid,
                                   const ModelParams& params) {
    std::vector<int> faces;
    const auto eta0 = critical_shear_rate(params);
    if (!eta0) return faces;
    for (int i = 0; i < grid.N; ++i) {
        if (std::abs(field.U_Y_face[i]) >= *eta0 - 1e-12) faces.push_back(i);
    }
    return faces;
}

namespace {

std::vector<double> nodal_gradient(const std::vector<double>& U, const Grid& grid) {
    const int N = grid.N;
    std::vector<double> g(N + 1, 0.0);
    g[0] = 0.0;  // axis symmetry
    for (int i = 1; i < N; ++i) g[i] = (U[i + 1] - U[i - 1]) / (2.0 * grid.h);
    g[N] = (3.0 * U[N] - 4.0 * U[N - 1] + U[N - 2]) / (2.0 * grid.h);
    return g;
}

Snapshot make_snapshot(const Field& field, const Grid& grid) {
    Snapshot s;
    s.T = field.T;
    s.U = field.U;
    s.U_Y = nodal_gradient(field.U, grid);
    s.U_T = field.U_T;
    return s;
}

/// Dominance hypothesis |Psi| < -V at interior nodes, with V evaluated at a
/// small proxy eps standing in for the unregularized profile.
std::pair<bool, double> dominance_check(const InitialCondition& ic,
                                        const ModelParams& params,
                                        const PressureProfile& profile) {
    ModelParams proxy = params;
    proxy.eps = std::min(params.eps, 1e-6 * params.R);
    proxy.eps0 = std::max(proxy.eps, params.eps0);
    SteadyProfile steady;
    try {
        steady = solve_steady(proxy, profile, 512);
    } catch (const NoSolutionError&) {
        return {false, -std::numeric_limits<double>::infinity()};
    }
    double margin = std::numeric_limits<double>::infinity();
    bool holds = true;
    const int N = static_cast<int>(steady.grid.size()) - 1;
    for (int i = 0; i < N; ++i) {
        const double m = -steady.V[i] - std::abs(ic.psi(steady.grid[i]));
        margin = std::min(margin, m);
        if (m < 0.0) holds = false;
    }
    return {holds, margin};
}

}  // namespace

SimulationResult run_unsteady(const InitialCondition& ic, const ModelParams& params,
                              const PressureProfile& profile, const RunOptions& options) {
    params.validate();
    const auto pv = validate_profile(profile, params);
    if (!pv.accepted) {
        throw ValidationError("pressure profile rejected: " + pv.issues.front().message);
    }
    SimulationResult result;
    result.compatibility = validate_initial(ic, profile, params);
    if (!result.compatibility.accepted) {
        throw ValidationError("initial condition incompatible: " +
                              result.compatibility.message);
    }

    result.solvability_case = classify_case(params);

    // Case hypotheses for n <= 0: eps->0 supremum against the flux limit,
    // plus dominance of the steady profile over the initial data.
    HypothesesReport& hyp = result.hypotheses;
    if (result.solvability_case != SolvabilityCase::GlobalParabolic) {
        hyp.required = true;
        hyp.sup_B0 = b_integral_sup(0.0, profile, params.R).value;
        const auto limit = flux_max(params);
        hyp.limit = limit->value;
        std::ostringstream detail;
        if (!(hyp.sup_B0 < limit->value)) {
            hyp.hold = false;
            detail << "sup B_0 = " << hyp.sup_B0 << " is not below the flux limit "
                   << limit->value << "; ";
        }
        const auto [dom, dmargin] = dominance_check(ic, params, profile);
        hyp.dominance_holds = dom;
        hyp.dominance_margin = dmargin;
        if (!dom) {
            hyp.hold = false;
            detail << "|Psi| < -V fails (margin " << dmargin << "); ";
        }
        hyp.detail = detail.str();
    }

    // Horizon per case; bounds need it for the curvature constant.
    double horizon = options.t_end;
    if (result.solvability_case == SolvabilityCase::FiniteHorizonZeroN) {
        horizon = std::min(options.t_end, options.t0_cap);
    }
    BoundsSet bounds = compute_bounds(ic, profile, params, horizon);
    bounds.envelope_hypotheses_hold = hyp.required && hyp.hold;
    if (options.exp_factor > 0.0) bounds.exp_factor = options.exp_factor;
    if (result.solvability_case == SolvabilityCase::LocalHorizonNegativeN) {
        if (bounds.lambda) {
            horizon = std::min(options.t_end, 0.95 * *bounds.lambda);
        } else if (bounds.K5 && bounds.eta0 && !(*bounds.K5 < *bounds.eta0)) {
            hyp.hold = false;
            hyp.detail += "K5 >= eta0, no guaranteed horizon; ";
        }
        // recompute the horizon-dependent curvature bound
        if (bounds.K5) {
            bounds.horizon = horizon;
            bounds.K7.reset();
            if (bounds.eta0 && *bounds.K5 * std::exp(horizon) < *bounds.eta0) {
                bounds.K7 =
                    compute_k7(params, profile.b0(), bounds.K3, *bounds.K5, horizon);
            }
        }
    }
    if (hyp.required && !hyp.hold) {
        if (!options.override_hypotheses) {
            throw ConfigError("case hypotheses fail: " + hyp.detail +
                              "(pass the override flag to integrate anyway)");
        }
        result.notes += "case hypotheses overridden; ";
    }
    result.bounds = bounds;
    result.horizon = horizon;

    const Grid grid(options.n_cells, params.R);
    const UnsteadySolver solver(params, profile, grid);

    Field field;
    field.T = 0.0;
    field.U.resize(grid.N + 1);
    for (int i = 0; i <= grid.N; ++i) field.U[i] = ic.psi(grid.node(i));
    field.U[grid.N] = 0.0;
    if (options.start_from_steady) {
        // the steady solve returns the non-positive branch (V <= 0); the
        // unsteady velocity equilibrates at its mirror image -V >= 0
        const auto steady = solve_steady(params, profile, grid.N);
        std::vector<double> seed(grid.N + 1);
        for (int i = 0; i <= grid.N; ++i) seed[i] = -steady.V[i];
        field.U = solver.solve_steady_state(seed);
    }
    field.U_Y_face.resize(grid.N);
    for (int i = 0; i < grid.N; ++i) {
        field.U_Y_face[i] = (field.U[i + 1] - field.U[i]) / grid.h;
    }
    {   // initial time-derivative estimate from the operator
        const auto L0 = solver.apply_operator(field.U);
        field.U_T.assign(grid.N + 1, 0.0);
        for (int i = 0; i < grid.N; ++i) field.U_T[i] = L0[i] / params.eight_beta_sq();
    }

    // step-size policy
    double dt;
    double dt_max;
    if (options.dt_policy == DtPolicy::Fixed) {
        dt = dt_max = options.dt;
    } else {
        if (options.dt_init > 0.0) {
            dt = options.dt_init;
        } else {
            double grad_cap = 0.0;
            if (bounds.K4) grad_cap = *bounds.K4;
            else if (bounds.K5) grad_cap = *bounds.K5 * std::exp(horizon);
            const double phi_max = std::max(viscosity_factor(0.0, params),
                                            viscosity_factor(grad_cap, params));
            dt = 1e-3 * params.eight_beta_sq() * grid.h * grid.h *
                 std::max(1.0, 1.0 / std::max(phi_max, 1e-12));
        }
        dt_max = options.dt_max > 0.0 ? options.dt_max : std::max(horizon / 100.0, dt);
    }

    auto log_monitor = [&](double used_dt) {
        result.monitor_log.push_back(monitor_bounds(field.U, field.U_Y_face, field.U_T,
                                                    field.T, used_dt, field.step_count,
                                                    grid.h, bounds, params,
                                                    profile.b0()));
    };
    log_monitor(0.0);

    std::size_t next_output = 0;
    auto emit_due_snapshots = [&]() {
        while (next_output < options.output_times.size() &&
               options.output_times[next_output] <= field.T + 1e-12) {
            result.snapshots.push_back(make_snapshot(field, grid));
            ++next_output;
        }
    };
    emit_due_snapshots();

    result.termination = Termination::ReachedTend;
    const bool lambda_bound = result.solvability_case == SolvabilityCase::LocalHorizonNegativeN &&
                              bounds.lambda && horizon < options.t_end;
    int easy_steps = 0;
    int halvings = 0;
    while (field.T < horizon - 1e-12) {
        double dt_c = std::min(dt, horizon - field.T);
        if (next_output < options.output_times.size()) {
            dt_c = std::min(dt_c, options.output_times[next_output] - field.T);
        }
        StepResult sr;
        try {
            sr = solver.step(field, dt_c);
        } catch (const NewtonFailureError& e) {
            if (++halvings > 20) {
                result.termination = Termination::NewtonFailure;
                std::ostringstream note;
                note << "aborted after 20 step halvings (Newton residual " << e.residual
                     << "); ";
                result.notes += note.str();
                break;
            }
            dt = std::max(dt_c * 0.5, 1e-300);
            easy_steps = 0;
            continue;
        }
        result.steps = field.step_count;
        log_monitor(dt_c);
        emit_due_snapshots();

        const auto degenerate = detect_degenerate(field, grid, params);
        if (!degenerate.empty()) {
            result.degenerate_faces = degenerate;
            if (!options.override_backward) {
                result.termination = Termination::BackwardRegimeDetected;
                break;
            }
            result.notes += "backward regime detected; continuation is non-physical; ";
        }

        if (options.dt_policy == DtPolicy::Adaptive) {
            if (sr.newton_iterations <= 4) {
                if (++easy_steps >= 5) {
                    dt = std::min(2.0 * dt, dt_max);
                    easy_steps = 0;
                }
            } else {
                easy_steps = 0;
            }
        }
    }
    result.final_T = field.T;
    result.steps = field.step_count;
    if (result.termination == Termination::ReachedTend && lambda_bound &&
        field.T >= horizon - 1e-12) {
        result.termination = Termination::ReachedLambda;
    }
    // final state snapshot unless one was just emitted at this time
    if (result.snapshots.empty() ||
        std::abs(result.snapshots.back().T - field.T) > 1e-12) {
        result.snapshots.push_back(make_snapshot(field, grid));
    }
    return result;
}

}  // namespace cypipe
