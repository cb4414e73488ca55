#pragma once

/// Command dispatch behind the CLI: classify, steady, unsteady, sweep,
/// verify. Each command writes its artifacts and a summary record into the
/// output directory and returns the process exit code (0 success,
/// 1 configuration error, 2 numerical failure, 3 nonexistence).

#include <string>

#include "cypipe/config.hpp"

namespace cypipe {

int cmd_classify(const RunConfig& config, const std::string& out_dir);
int cmd_steady(const RunConfig& config, const std::string& out_dir);
int cmd_unsteady(const RunConfig& config, const std::string& out_dir);

/// Expands the sweep axes and runs the member command (steady or unsteady)
/// in per-member subdirectories, optionally across worker threads, then
/// writes an aggregated comparison table.
int cmd_sweep(const std::string& config_text, const std::string& out_dir, int workers);

/// Runs the built-in verification fixtures and prints one line per checked
/// criterion.
int cmd_verify(const std::string& out_dir);

/// Map an exception to the exit-code contract.
int exit_code_for_current_exception();

}  // namespace cypipe
