#pragma once

/// Deterministic result serialization: profile and snapshot CSVs, the
/// line-delimited monitor log, and the run summary record. All numbers are
/// written with 17 significant digits so identical runs produce identical
/// bytes.

#include <string>
#include <vector>

#include "cypipe/bounds.hpp"
#include "cypipe/steady.hpp"
#include "cypipe/unsteady.hpp"

namespace cypipe {

/// Round-trip decimal formatting (17 significant digits).
std::string format_full(double v);

/// Steady profile CSV with columns Y, V, V_Y, B_eps, F_of_V_Y.
void write_steady_csv(const std::string& path, const SteadyProfile& profile);

/// Snapshot CSV with columns Y, U, U_Y, U_T.
void write_snapshot_csv(const std::string& path, const Snapshot& snapshot,
                        const Grid& grid);

/// Monitor log: one JSON record per line (step, T, dt, per-check margins).
void write_monitor_log(const std::string& path, const std::vector<BoundReport>& log);

/// Directory helpers used by the command layer.
void ensure_directory(const std::string& path);
bool files_identical(const std::string& a, const std::string& b);

}  // namespace cypipe
