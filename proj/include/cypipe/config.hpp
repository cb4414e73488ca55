#pragma once

/// Run configuration: a JSON document mapped onto the solver inputs with
/// strict key checking. The schema is documented in the README.

#include <optional>
#include <string>
#include <vector>

#include "cypipe/initial.hpp"
#include "cypipe/model.hpp"
#include "cypipe/pressure.hpp"
#include "cypipe/unsteady.hpp"

namespace cypipe {

struct SweepAxis {
    std::string parameter;        ///< dotted key path, e.g. "params.eps"
    std::vector<double> values;
};

struct RunConfig {
    int schema_version = 1;
    ModelParams params;
    PressureProfile profile = PressureProfile::constant(1.0, 1.0);
    InitialCondition initial = InitialCondition::zero();
    bool has_initial = false;
    RunOptions run;
    std::optional<std::pair<double, double>> gradient_range;  ///< for classify
    std::vector<SweepAxis> sweep;
    std::string sweep_command = "unsteady";
    int workers = 1;
    std::string raw;  ///< the parsed document, re-serialized (config echo)
};

/// Parse and fully validate a configuration document. Collects precise
/// errors (unknown keys, type mismatches, constraint violations) with key
/// paths and throws ConfigError listing all of them.
RunConfig parse_config(const std::string& text);

/// Parse the file at the given path.
RunConfig load_config(const std::string& path);

/// Expand the sweep axes of a base document into the cartesian product of
/// derived documents. Returns (axis label, document) pairs; the base sweep
/// keys are stripped from the derived documents.
std::vector<std::pair<std::string, std::string>> expand_sweep(const std::string& text);

}  // namespace cypipe
