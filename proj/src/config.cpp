#include "cypipe/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cypipe/errors.hpp"

namespace cypipe {

using nlohmann::ordered_json;

namespace {

class ErrorCollector {
public:
    void add(const std::string& path, const std::string& what) {
        std::ostringstream msg;
        msg << path << ": " << what;
        errors_.push_back(msg.str());
    }
    void raise_if_any() const {
        if (errors_.empty()) return;
        std::ostringstream msg;
        msg << "configuration errors:";
        for (const auto& e : errors_) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
    bool empty() const { return errors_.empty(); }

private:
    std::vector<std::string> errors_;
};

void check_keys(const ordered_json& obj, const std::string& path,
                const std::set<std::string>& allowed, ErrorCollector& errs) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) {
            errs.add(path + "." + it.key(), "unknown key");
        }
    }
}

double get_number(const ordered_json& obj, const std::string& path,
                  const std::string& key, double fallback, ErrorCollector& errs,
                  bool* present = nullptr) {
    if (present) *present = false;
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        errs.add(path + "." + key, "expected a number");
        return fallback;
    }
    if (present) *present = true;
    return v.get<double>();
}

std::vector<double> get_number_list(const ordered_json& obj, const std::string& path,
                                    const std::string& key, ErrorCollector& errs) {
    std::vector<double> out;
    if (!obj.contains(key)) {
        errs.add(path + "." + key, "missing required list");
        return out;
    }
    const auto& v = obj.at(key);
    if (!v.is_array()) {
        errs.add(path + "." + key, "expected a list of numbers");
        return out;
    }
    for (const auto& e : v) {
        if (!e.is_number()) {
            errs.add(path + "." + key, "expected a list of numbers");
            return {};
        }
        out.push_back(e.get<double>());
    }
    return out;
}

std::string get_string(const ordered_json& obj, const std::string& path,
                       const std::string& key, const std::string& fallback,
                       ErrorCollector& errs) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) {
        errs.add(path + "." + key, "expected a string");
        return fallback;
    }
    return v.get<std::string>();
}

bool get_bool(const ordered_json& obj, const std::string& path, const std::string& key,
              bool fallback, ErrorCollector& errs) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean()) {
        errs.add(path + "." + key, "expected a boolean");
        return fallback;
    }
    return v.get<bool>();
}

ModelParams parse_params(const ordered_json& root, ErrorCollector& errs) {
    ModelParams p;
    if (!root.contains("params") || !root.at("params").is_object()) {
        errs.add("params", "missing required object");
        return p;
    }
    const auto& obj = root.at("params");
    check_keys(obj, "params", {"n", "alpha", "kappa", "beta", "R", "eps", "eps0"}, errs);
    p.n = get_number(obj, "params", "n", 1.0, errs);
    p.alpha = get_number(obj, "params", "alpha", 2.0, errs);
    p.kappa = get_number(obj, "params", "kappa", 0.0, errs);
    p.beta = get_number(obj, "params", "beta", 0.5, errs);
    p.R = get_number(obj, "params", "R", 1.0, errs);
    p.eps = get_number(obj, "params", "eps", 1e-3 * p.R, errs);
    p.eps0 = get_number(obj, "params", "eps0", 1e-2 * p.R, errs);
    try {
        p.validate();
    } catch (const ValidationError& e) {
        errs.add("params", std::string("constraint violation: ") + e.what());
    }
    return p;
}

PressureProfile parse_profile(const ordered_json& root, const ModelParams& params,
                              ErrorCollector& errs) {
    auto fallback = PressureProfile::constant(1.0, 1.0);
    if (!root.contains("profile") || !root.at("profile").is_object()) {
        errs.add("profile", "missing required object");
        return fallback;
    }
    const auto& obj = root.at("profile");
    check_keys(obj, "profile", {"kind", "b0", "value", "coefficients", "y", "b"}, errs);
    const std::string kind = get_string(obj, "profile", "kind", "constant", errs);
    const double b0 = get_number(obj, "profile", "b0", 1.0, errs);
    if (!(b0 > 0.0)) {
        errs.add("profile.b0", "constraint violation: b0 must be > 0");
        return fallback;
    }
    if (kind == "constant") {
        const double value = get_number(obj, "profile", "value", b0, errs);
        return PressureProfile::constant(value, b0);
    }
    if (kind == "polynomial") {
        auto coeffs = get_number_list(obj, "profile", "coefficients", errs);
        if (coeffs.empty()) return fallback;
        return PressureProfile::polynomial(std::move(coeffs), b0);
    }
    if (kind == "tabulated") {
        auto y = get_number_list(obj, "profile", "y", errs);
        auto b = get_number_list(obj, "profile", "b", errs);
        if (y.size() != b.size() || y.size() < 2) {
            errs.add("profile", "tabulated profile needs matching y/b lists (>= 2 samples)");
            return fallback;
        }
        try {
            return PressureProfile::tabulated(std::move(y), std::move(b), b0);
        } catch (const std::exception& e) {
            errs.add("profile", e.what());
            return fallback;
        }
    }
    errs.add("profile.kind", "expected constant|polynomial|tabulated");
    (void)params;
    return fallback;
}

InitialCondition parse_initial(const ordered_json& root, const ModelParams& params,
                               const PressureProfile& profile, bool& present,
                               ErrorCollector& errs) {
    present = false;
    if (!root.contains("initial")) return InitialCondition::zero();
    const auto& obj = root.at("initial");
    if (!obj.is_object()) {
        errs.add("initial", "expected an object");
        return InitialCondition::zero();
    }
    present = true;
    check_keys(obj, "initial", {"kind", "coefficients", "y", "psi"}, errs);
    const std::string kind = get_string(obj, "initial", "kind", "compatible_quartic", errs);
    if (kind == "zero") return InitialCondition::zero();
    if (kind == "compatible_quartic") {
        return InitialCondition::compatible_quartic(profile, params.R);
    }
    if (kind == "polynomial") {
        auto coeffs = get_number_list(obj, "initial", "coefficients", errs);
        return InitialCondition::polynomial(std::move(coeffs));
    }
    if (kind == "tabulated") {
        auto y = get_number_list(obj, "initial", "y", errs);
        auto psi = get_number_list(obj, "initial", "psi", errs);
        if (y.size() != psi.size() || y.size() < 2) {
            errs.add("initial", "tabulated data needs matching y/psi lists (>= 2 samples)");
            return InitialCondition::zero();
        }
        try {
            return InitialCondition::tabulated(std::move(y), std::move(psi));
        } catch (const std::exception& e) {
            errs.add("initial", e.what());
            return InitialCondition::zero();
        }
    }
    errs.add("initial.kind", "expected zero|compatible_quartic|polynomial|tabulated");
    return InitialCondition::zero();
}

RunOptions parse_run(const ordered_json& root, ErrorCollector& errs) {
    RunOptions opt;
    if (root.contains("grid")) {
        const auto& g = root.at("grid");
        if (!g.is_object()) {
            errs.add("grid", "expected an object");
        } else {
            check_keys(g, "grid", {"n_cells"}, errs);
            const double n = get_number(g, "grid", "n_cells", 512.0, errs);
            if (n < 2 || n != std::floor(n)) {
                errs.add("grid.n_cells", "constraint violation: integer >= 2 required");
            } else {
                opt.n_cells = static_cast<int>(n);
            }
        }
    }
    if (root.contains("time")) {
        const auto& t = root.at("time");
        if (!t.is_object()) {
            errs.add("time", "expected an object");
            return opt;
        }
        check_keys(t, "time",
                   {"t_end", "dt_policy", "dt", "dt_init", "dt_max", "output_times",
                    "t0_cap", "exp_envelope_factor"},
                   errs);
        opt.t_end = get_number(t, "time", "t_end", 1.0, errs);
        if (!(opt.t_end > 0.0)) errs.add("time.t_end", "constraint violation: must be > 0");
        const std::string policy = get_string(t, "time", "dt_policy", "adaptive", errs);
        if (policy == "adaptive") {
            opt.dt_policy = DtPolicy::Adaptive;
        } else if (policy == "fixed") {
            opt.dt_policy = DtPolicy::Fixed;
        } else {
            errs.add("time.dt_policy", "expected adaptive|fixed");
        }
        opt.dt = get_number(t, "time", "dt", opt.dt, errs);
        opt.dt_init = get_number(t, "time", "dt_init", 0.0, errs);
        opt.dt_max = get_number(t, "time", "dt_max", 0.0, errs);
        opt.t0_cap = get_number(t, "time", "t0_cap", 10.0, errs);
        opt.exp_factor = get_number(t, "time", "exp_envelope_factor", 0.0, errs);
        if (t.contains("output_times")) {
            opt.output_times = get_number_list(t, "time", "output_times", errs);
            for (std::size_t i = 1; i < opt.output_times.size(); ++i) {
                if (opt.output_times[i] <= opt.output_times[i - 1]) {
                    errs.add("time.output_times", "must increase strictly");
                    break;
                }
            }
        }
    }
    if (root.contains("run")) {
        const auto& r = root.at("run");
        if (!r.is_object()) {
            errs.add("run", "expected an object");
            return opt;
        }
        check_keys(r, "run",
                   {"start_from", "override_hypotheses", "override_backward"}, errs);
        const std::string from = get_string(r, "run", "start_from", "initial", errs);
        if (from == "steady") {
            opt.start_from_steady = true;
        } else if (from != "initial") {
            errs.add("run.start_from", "expected initial|steady");
        }
        opt.override_hypotheses = get_bool(r, "run", "override_hypotheses", false, errs);
        opt.override_backward = get_bool(r, "run", "override_backward", false, errs);
    }
    return opt;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");

    ErrorCollector errs;
    check_keys(root, "config",
               {"schema_version", "params", "profile", "initial", "grid", "time", "run",
                "classify", "sweep", "workers"},
               errs);
    RunConfig cfg;
    const double sv = get_number(root, "config", "schema_version", 1.0, errs);
    cfg.schema_version = static_cast<int>(sv);
    if (cfg.schema_version != 1) errs.add("schema_version", "unsupported version");

    cfg.params = parse_params(root, errs);
    cfg.profile = parse_profile(root, cfg.params, errs);
    cfg.initial = parse_initial(root, cfg.params, cfg.profile, cfg.has_initial, errs);
    cfg.run = parse_run(root, errs);

    if (root.contains("classify")) {
        const auto& c = root.at("classify");
        if (!c.is_object()) {
            errs.add("classify", "expected an object");
        } else {
            check_keys(c, "classify", {"gradient_range"}, errs);
            if (c.contains("gradient_range")) {
                auto range = get_number_list(c, "classify", "gradient_range", errs);
                if (range.size() == 2) {
                    cfg.gradient_range = std::make_pair(range[0], range[1]);
                } else {
                    errs.add("classify.gradient_range", "expected [lo, hi]");
                }
            }
        }
    }

    if (root.contains("sweep")) {
        const auto& s = root.at("sweep");
        auto parse_axis = [&](const ordered_json& a, const std::string& path) {
            if (!a.is_object()) {
                errs.add(path, "expected an object");
                return;
            }
            check_keys(a, path, {"parameter", "values", "command"}, errs);
            SweepAxis axis;
            axis.parameter = get_string(a, path, "parameter", "", errs);
            axis.values = get_number_list(a, path, "values", errs);
            if (axis.parameter.empty()) errs.add(path + ".parameter", "required");
            cfg.sweep_command = get_string(a, path, "command", cfg.sweep_command, errs);
            cfg.sweep.push_back(std::move(axis));
        };
        if (s.is_array()) {
            int k = 0;
            for (const auto& a : s) parse_axis(a, "sweep[" + std::to_string(k++) + "]");
        } else {
            parse_axis(s, "sweep");
        }
    }
    const double workers = get_number(root, "config", "workers", 1.0, errs);
    if (workers < 1 || workers != std::floor(workers)) {
        errs.add("workers", "constraint violation: integer >= 1 required");
    } else {
        cfg.workers = static_cast<int>(workers);
    }

    errs.raise_if_any();
    cfg.raw = root.dump(2);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::pair<std::string, std::string>> expand_sweep(const std::string& text) {
    ordered_json root = ordered_json::parse(text);
    RunConfig cfg = parse_config(text);  // validates, including the axes
    if (cfg.sweep.empty()) {
        throw ConfigError("sweep: no axes specified");
    }
    ordered_json base = root;
    base.erase("sweep");

    auto set_path = [](ordered_json& doc, const std::string& dotted, double value) {
        ordered_json* cur = &doc;
        std::string rest = dotted;
        for (std::size_t pos = rest.find('.'); pos != std::string::npos;
             pos = rest.find('.')) {
            cur = &(*cur)[rest.substr(0, pos)];
            rest = rest.substr(pos + 1);
        }
        (*cur)[rest] = value;
    };

    std::vector<std::pair<std::string, ordered_json>> expanded{{"", base}};
    for (const auto& axis : cfg.sweep) {
        std::vector<std::pair<std::string, ordered_json>> next;
        for (const auto& [label, doc] : expanded) {
            for (double v : axis.values) {
                ordered_json derived = doc;
                set_path(derived, axis.parameter, v);
                std::ostringstream tag;
                if (!label.empty()) tag << label << "_";
                tag << axis.parameter << "=" << v;
                next.emplace_back(tag.str(), std::move(derived));
            }
        }
        expanded = std::move(next);
    }
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(expanded.size());
    for (auto& [label, doc] : expanded) {
        // derived configs must parse cleanly on their own
        parse_config(doc.dump());
        out.emplace_back(label, doc.dump(2));
    }
    return out;
}

}  // namespace cypipe
