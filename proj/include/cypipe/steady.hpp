#pragma once

/// Existence certification for the steady problem and construction of the
/// closed-form steady profile
///     V(Y) = -int_Y^R Finv(B_eps(s)) ds,   F(V_Y(Y)) = B_eps(Y),
/// with a discrete divergence-form residual check.

#include <optional>
#include <string>
#include <vector>

#include "cypipe/model.hpp"
#include "cypipe/pressure.hpp"

namespace cypipe {

enum class ExistenceVerdict { Classical, GeneralizedBoundaryCase, None };

std::string to_string(ExistenceVerdict v);

struct ExistenceReport {
    ExistenceVerdict verdict = ExistenceVerdict::Classical;
    /// Flux-range limit the supremum is tested against: 1/kappa for n = 0,
    /// zeta0 for n < 0. Absent for n > 0 or kappa = 0 (no limit).
    std::optional<double> threshold;
    double sup_B = 0.0;
    double sup_location = 0.0;
    std::optional<double> margin;  ///< threshold - sup_B, when a threshold exists
    /// Which existence statement applied (by structure, not by reference).
    std::string basis;
};

/// Classify solvability: unconditional for n > 0 with kappa != 0 or for
/// kappa = 0; otherwise sup B_eps is compared against the flux-range limit.
/// Equality within 1e-9 (relative) classifies as the generalized boundary
/// case.
ExistenceReport check_existence(const ModelParams& params,
                                const PressureProfile& profile);

struct SteadyProfile {
    std::vector<double> grid;      ///< nodes, size N+1
    std::vector<double> V;         ///< axial velocity, <= 0, V(R) = 0
    std::vector<double> V_Y;       ///< radial gradient, >= 0, V_Y(0) = 0
    std::vector<double> B;         ///< B_eps at the nodes
    std::vector<double> F_of_V_Y;  ///< flux at the nodal gradients
    double eps = 0.0;
    ExistenceReport report;
};

/// Builds the steady profile on an N-cell uniform grid. The nodal gradient
/// is the flux inverse of the cached B_eps; V accumulates cellwise Simpson
/// panels from the pinned boundary value V(R) = 0 downward.
/// Throws NoSolutionError when the existence verdict is None.
SteadyProfile solve_steady(const ModelParams& params, const PressureProfile& profile,
                           int n_cells, double invert_tol = 1e-12);

/// Max over interior nodes of the divergence-form residual
///   | (1/(Y_i+eps)) D_h[(Y+eps) F(V_Y)]_i - b(Y_i) |
/// with D_h the central difference of the nodal flux field.
double steady_residual(const SteadyProfile& steady, const PressureProfile& profile,
                       const ModelParams& params);

}  // namespace cypipe
