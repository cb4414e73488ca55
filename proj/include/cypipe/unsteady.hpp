#pragma once

/// Implicit time integration of the regularized unsteady problem
///   8 beta^2 U_T = (1/(Y+eps)) d/dY[(Y+eps) F(U_Y)] + b(Y)
/// on a uniform grid, with a flux-conservative spatial discretization,
/// ghost-node axis symmetry, damped Newton steps, per-step bound monitors,
/// and backward-regime detection for n < 0.

#include <optional>
#include <string>
#include <vector>

#include "cypipe/bounds.hpp"
#include "cypipe/initial.hpp"
#include "cypipe/model.hpp"
#include "cypipe/pressure.hpp"

namespace cypipe {

/// Uniform grid with N cells on [0, R]; nodes 0..N, faces between them.
struct Grid {
    int N = 0;
    double R = 0.0;
    double h = 0.0;

    Grid() = default;
    Grid(int n_cells, double radius) : N(n_cells), R(radius), h(radius / n_cells) {}
    double node(int i) const { return h * static_cast<double>(i); }
    double face(int i) const { return h * (static_cast<double>(i) + 0.5); }
};

/// Time-dependent discrete state.
struct Field {
    double T = 0.0;
    std::vector<double> U;         ///< nodal values, size N+1, U[N] = 0
    std::vector<double> U_Y_face;  ///< face difference quotients, size N
    std::vector<double> U_T;       ///< nodal time-derivative estimate, size N+1
    long step_count = 0;
};

struct StepResult {
    int newton_iterations = 0;
    double residual = 0.0;
};

/// Spatial operator and implicit stepper for a fixed (grid, params, profile)
/// triple. The pressure gradient is sampled once at the nodes.
class UnsteadySolver {
public:
    UnsteadySolver(const ModelParams& params, const PressureProfile& profile,
                   const Grid& grid);

    /// Flux-conservative right-hand side: entry i (i < N) is
    ///   (1/(Y_i+eps)) [ (Y_{i+1/2}+eps) F(dU_{i+1/2})
    ///                 - (Y_{i-1/2}+eps) F(dU_{i-1/2}) ] / h + b(Y_i),
    /// with the ghost reflection U_{-1} = U_1 at the axis. Entry N is 0
    /// (Dirichlet value, not evolved).
    std::vector<double> apply_operator(const std::vector<double>& U) const;

    /// One implicit Euler step by damped Newton. Converges to
    /// |residual| <= 1e-10 * (1 + b0). Throws NewtonFailureError.
    StepResult step(Field& field, double dt) const;

    /// Discrete steady state (operator root) by damped Newton from a guess.
    std::vector<double> solve_steady_state(std::vector<double> guess) const;

    const Grid& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    double newton_tolerance() const { return newton_tol_; }

private:
    /// Newton solve of 8 b^2 (V - U_old)/dt = L(V) (dt <= 0 means the
    /// steady system L(V) = 0). Returns iterations; V holds the solution.
    StepResult newton_solve(std::vector<double>& V, const std::vector<double>& U_old,
                            double dt, double tol) const;

    ModelParams params_;
    Grid grid_;
    std::vector<double> b_node_;   // pressure gradient at nodes
    std::vector<double> u_node_;   // Y_i + eps
    std::vector<double> u_face_;   // Y_{i+1/2} + eps
    double b0_ = 0.0;
    double newton_tol_ = 0.0;
};

/// Faces whose gradient magnitude has reached the critical shear rate
/// (within 1e-12). Empty unless n < 0 and kappa != 0.
std::vector<int> detect_degenerate(const Field& field, const Grid& grid,
                                   const ModelParams& params);

enum class Termination { ReachedTend, ReachedLambda, BackwardRegimeDetected, NewtonFailure };

std::string to_string(Termination t);

enum class DtPolicy { Adaptive, Fixed };

struct RunOptions {
    int n_cells = 512;
    double t_end = 1.0;
    std::vector<double> output_times;  ///< snapshot times (ascending)
    DtPolicy dt_policy = DtPolicy::Adaptive;
    double dt = 1e-2;        ///< fixed-policy step
    double dt_init = 0.0;    ///< adaptive seed; 0 = derived default
    double dt_max = 0.0;     ///< adaptive cap; 0 = derived default
    double t0_cap = 10.0;    ///< finite horizon for n = 0 (user cap)
    bool start_from_steady = false;  ///< initialize from the discrete steady state
    bool override_hypotheses = false;
    bool override_backward = false;
    double exp_factor = 0.0;  ///< exponential-envelope factor; 0 = max(1, 8 beta^2)
};

struct Snapshot {
    double T = 0.0;
    std::vector<double> U;
    std::vector<double> U_Y;  ///< nodal gradient (face averages, one-sided ends)
    std::vector<double> U_T;
};

/// Verification of the case hypotheses for n <= 0: the eps -> 0 supremum of
/// the pressure integral against the flux-range limit, and dominance of the
/// steady profile over the initial data (checked at a small proxy eps).
struct HypothesesReport {
    bool required = false;
    bool hold = true;
    double sup_B0 = 0.0;
    std::optional<double> limit;
    bool dominance_holds = true;
    double dominance_margin = 0.0;
    std::string detail;
};

struct SimulationResult {
    Termination termination = Termination::ReachedTend;
    double final_T = 0.0;
    long steps = 0;
    std::vector<Snapshot> snapshots;
    std::vector<BoundReport> monitor_log;
    BoundsSet bounds;
    SolvabilityCase solvability_case = SolvabilityCase::GlobalParabolic;
    double horizon = 0.0;
    HypothesesReport hypotheses;
    CompatibilityReport compatibility;
    std::vector<int> degenerate_faces;  ///< faces that tripped the detector
    std::string notes;
};

/// Full integration driver: validates inputs, checks case hypotheses,
/// computes the a-priori constants, integrates to the case horizon with
/// per-step monitors, and collects snapshots at the requested times.
///
/// Throws ValidationError for incompatible inputs and ConfigError when the
/// case hypotheses fail without an override.
SimulationResult run_unsteady(const InitialCondition& ic, const ModelParams& params,
                              const PressureProfile& profile, const RunOptions& options);

}  // namespace cypipe
