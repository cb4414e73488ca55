#include "cypipe/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "cypipe/errors.hpp"
#include "cypipe/io.hpp"
#include "cypipe/rheology.hpp"
#include "cypipe/steady.hpp"
#include "cypipe/verify.hpp"

namespace cypipe {

using nlohmann::ordered_json;

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

ordered_json regime_json(const RunConfig& cfg) {
    const auto rc = classify_regime(cfg.params, cfg.gradient_range);
    ordered_json j;
    j["tag"] = to_string(rc.tag);
    if (rc.eta0) j["eta0"] = *rc.eta0;
    if (const auto zm = flux_max(cfg.params)) {
        j["flux_limit"] = zm->value;
        j["flux_limit_attained"] = zm->attained;
    }
    return j;
}

ordered_json existence_json(const ExistenceReport& rep) {
    ordered_json j;
    j["verdict"] = to_string(rep.verdict);
    if (rep.threshold) j["threshold"] = *rep.threshold;
    j["sup_B"] = rep.sup_B;
    j["sup_location"] = rep.sup_location;
    if (rep.margin) j["margin"] = *rep.margin;
    j["basis"] = rep.basis;
    return j;
}

ordered_json bounds_json(const BoundsSet& bs) {
    ordered_json j;
    j["case"] = to_string(bs.solvability_case);
    j["K1"] = bs.K1;
    j["K2"] = bs.K2;
    j["K3"] = bs.K3;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("K4", bs.K4);
    put("K5", bs.K5);
    put("K6", bs.K6);
    put("K7", bs.K7);
    put("eta0", bs.eta0);
    put("zeta0", bs.zeta0);
    put("lambda", bs.lambda);
    put("horizon", bs.horizon);
    put("linear_envelope_slope", bs.linear_envelope_slope);
    j["exp_factor"] = bs.exp_factor;
    j["envelope_hypotheses_hold"] = bs.envelope_hypotheses_hold;
    return j;
}

void write_summary(const std::string& out_dir, const std::string& command,
                   const RunConfig& cfg, ordered_json body, double wall_s,
                   const std::vector<std::string>& files) {
    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["config"] = ordered_json::parse(cfg.raw);
    for (auto& [k, v] : body.items()) j[k] = v;
    auto jf = ordered_json::array();
    for (const auto& f : files) jf.push_back(f);
    jf.push_back("summary.json");
    j["files"] = std::move(jf);
    j["wall_time_s"] = wall_s;
    std::ofstream out(out_dir + "/summary.json", std::ios::binary);
    if (!out) throw Error("cannot write " + out_dir + "/summary.json");
    out << j.dump(2) << '\n';
}

struct UnsteadyArtifacts {
    SimulationResult result;
    std::vector<std::string> files;
};

UnsteadyArtifacts execute_unsteady(const RunConfig& cfg, const std::string& out_dir) {
    if (!cfg.has_initial) {
        throw ConfigError("unsteady run requires an \"initial\" section");
    }
    ensure_directory(out_dir);
    UnsteadyArtifacts art;
    art.result = run_unsteady(cfg.initial, cfg.params, cfg.profile, cfg.run);
    const Grid grid(cfg.run.n_cells, cfg.params.R);
    for (std::size_t k = 0; k < art.result.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", k);
        write_snapshot_csv(out_dir + "/" + name, art.result.snapshots[k], grid);
        art.files.emplace_back(name);
    }
    write_monitor_log(out_dir + "/monitor.jsonl", art.result.monitor_log);
    art.files.emplace_back("monitor.jsonl");
    return art;
}

ordered_json unsteady_body(const RunConfig& cfg, const SimulationResult& r) {
    ordered_json body;
    body["regime"] = regime_json(cfg);
    body["existence"] = existence_json(check_existence(cfg.params, cfg.profile));
    body["bounds"] = bounds_json(r.bounds);
    ordered_json hyp;
    hyp["required"] = r.hypotheses.required;
    hyp["hold"] = r.hypotheses.hold;
    if (r.hypotheses.required) {
        hyp["sup_B0"] = r.hypotheses.sup_B0;
        if (r.hypotheses.limit) hyp["limit"] = *r.hypotheses.limit;
        hyp["dominance_holds"] = r.hypotheses.dominance_holds;
        hyp["dominance_margin"] = r.hypotheses.dominance_margin;
        if (!r.hypotheses.detail.empty()) hyp["detail"] = r.hypotheses.detail;
    }
    body["hypotheses"] = std::move(hyp);
    ordered_json compat;
    compat["accepted"] = r.compatibility.accepted;
    auto res = ordered_json::array();
    for (double v : r.compatibility.residuals) res.push_back(v);
    compat["residuals"] = std::move(res);
    body["compatibility"] = std::move(compat);
    body["termination"] = to_string(r.termination);
    body["final_T"] = r.final_T;
    body["steps"] = r.steps;
    body["horizon"] = r.horizon;
    long monitor_failures = 0;
    for (const auto& rep : r.monitor_log) {
        if (!rep.all_pass()) ++monitor_failures;
    }
    body["monitor_steps"] = static_cast<long>(r.monitor_log.size());
    body["monitor_failures"] = monitor_failures;
    if (!r.degenerate_faces.empty()) {
        body["degenerate_faces"] = r.degenerate_faces.size();
    }
    if (!r.notes.empty()) body["notes"] = r.notes;
    return body;
}

}  // namespace

int cmd_classify(const RunConfig& cfg, const std::string& out_dir) {
    Stopwatch watch;
    ensure_directory(out_dir);
    ordered_json body;
    body["regime"] = regime_json(cfg);
    const auto existence = check_existence(cfg.params, cfg.profile);
    body["existence"] = existence_json(existence);
    write_summary(out_dir, "classify", cfg, body, watch.seconds(), {});
    std::cout << "regime: " << body["regime"].dump() << "\n"
              << "existence: " << to_string(existence.verdict) << "\n";
    return 0;
}

int cmd_steady(const RunConfig& cfg, const std::string& out_dir) {
    Stopwatch watch;
    ensure_directory(out_dir);
    const auto validation = validate_profile(cfg.profile, cfg.params);
    if (!validation.accepted) {
        throw ValidationError("pressure profile rejected: " +
                              validation.issues.front().message);
    }
    const auto profile = solve_steady(cfg.params, cfg.profile, cfg.run.n_cells);
    write_steady_csv(out_dir + "/profile.csv", profile);
    const double residual = steady_residual(profile, cfg.profile, cfg.params);
    ordered_json body;
    body["regime"] = regime_json(cfg);
    body["existence"] = existence_json(profile.report);
    body["residual"] = residual;
    body["n_cells"] = cfg.run.n_cells;
    write_summary(out_dir, "steady", cfg, body, watch.seconds(), {"profile.csv"});
    std::cout << "steady profile written (" << cfg.run.n_cells
              << " cells, residual " << residual << ")\n";
    return 0;
}

int cmd_unsteady(const RunConfig& cfg, const std::string& out_dir) {
    Stopwatch watch;
    auto art = execute_unsteady(cfg, out_dir);
    write_summary(out_dir, "unsteady", cfg, unsteady_body(cfg, art.result),
                  watch.seconds(), art.files);
    std::cout << "unsteady run: " << to_string(art.result.termination) << " at T="
              << art.result.final_T << " after " << art.result.steps << " steps ("
              << art.result.snapshots.size() << " snapshots)\n";
    return art.result.termination == Termination::NewtonFailure ? 2 : 0;
}

int cmd_sweep(const std::string& config_text, const std::string& out_dir, int workers) {
    Stopwatch watch;
    ensure_directory(out_dir);
    const RunConfig base = parse_config(config_text);
    const auto members = expand_sweep(config_text);
    const std::string member_cmd = base.sweep_command;
    if (member_cmd != "steady" && member_cmd != "unsteady") {
        throw ConfigError("sweep.command must be steady or unsteady");
    }
    if (workers <= 0) workers = base.workers;

    struct MemberOutcome {
        std::string label;
        std::string dir;
        int exit_code = 0;
        std::string error;
        std::vector<double> final_U;  // comparison payload
        double final_T = 0.0;
        int n_cells = 0;
    };
    std::vector<MemberOutcome> outcomes(members.size());

    auto run_member = [&](std::size_t idx) {
        const auto& [label, text] = members[idx];
        MemberOutcome& mo = outcomes[idx];
        mo.label = label;
        mo.dir = out_dir + "/" + label;
        try {
            ensure_directory(mo.dir);
            const RunConfig cfg = parse_config(text);
            {
                std::ofstream cf(mo.dir + "/config.json", std::ios::binary);
                cf << cfg.raw << '\n';
            }
            mo.n_cells = cfg.run.n_cells;
            if (member_cmd == "steady") {
                Stopwatch w2;
                const auto validation = validate_profile(cfg.profile, cfg.params);
                if (!validation.accepted) {
                    throw ValidationError("pressure profile rejected: " +
                                          validation.issues.front().message);
                }
                const auto profile = solve_steady(cfg.params, cfg.profile, cfg.run.n_cells);
                write_steady_csv(mo.dir + "/profile.csv", profile);
                ordered_json body;
                body["existence"] = existence_json(profile.report);
                body["residual"] = steady_residual(profile, cfg.profile, cfg.params);
                write_summary(mo.dir, "steady", cfg, body, w2.seconds(),
                              {"config.json", "profile.csv"});
                mo.final_U = profile.V;
            } else {
                Stopwatch w2;
                auto art = execute_unsteady(cfg, mo.dir);
                art.files.insert(art.files.begin(), "config.json");
                write_summary(mo.dir, "unsteady", cfg, unsteady_body(cfg, art.result),
                              w2.seconds(), art.files);
                mo.final_U = art.result.snapshots.back().U;
                mo.final_T = art.result.snapshots.back().T;
                if (art.result.termination == Termination::NewtonFailure) mo.exit_code = 2;
            }
        } catch (const std::exception& e) {
            mo.exit_code = exit_code_for_current_exception();
            mo.error = e.what();
        }
    };

    if (workers > 1) {
        std::vector<std::future<void>> futures;
        std::atomic<std::size_t> next{0};
        const int pool = std::min<std::size_t>(workers, members.size());
        for (int w = 0; w < pool; ++w) {
            futures.push_back(std::async(std::launch::async, [&]() {
                for (std::size_t i = next.fetch_add(1); i < members.size();
                     i = next.fetch_add(1)) {
                    run_member(i);
                }
            }));
        }
        for (auto& f : futures) f.get();
    } else {
        for (std::size_t i = 0; i < members.size(); ++i) run_member(i);
    }

    // comparison table: sup-norm difference between consecutive members
    {
        std::ofstream cmp(out_dir + "/comparison.csv", std::ios::binary);
        cmp << "# cypipe sweep comparison, schema_version=1\n";
        cmp << "member_a,member_b,sup_diff\n";
        for (std::size_t i = 0; i + 1 < outcomes.size(); ++i) {
            const auto& a = outcomes[i];
            const auto& b = outcomes[i + 1];
            if (a.final_U.empty() || b.final_U.empty()) continue;
            double diff = std::numeric_limits<double>::quiet_NaN();
            const auto &ua = a.final_U, &ub = b.final_U;
            if (ua.size() == ub.size()) {
                diff = 0.0;
                for (std::size_t k = 0; k < ua.size(); ++k) {
                    diff = std::max(diff, std::abs(ua[k] - ub[k]));
                }
            } else {
                // nested grids: compare on the coarse nodes
                const auto &fine = ua.size() > ub.size() ? ua : ub;
                const auto &coarse = ua.size() > ub.size() ? ub : ua;
                const std::size_t stride = (fine.size() - 1) / (coarse.size() - 1);
                if (stride * (coarse.size() - 1) == fine.size() - 1) {
                    diff = 0.0;
                    for (std::size_t k = 0; k < coarse.size(); ++k) {
                        diff = std::max(diff, std::abs(coarse[k] - fine[k * stride]));
                    }
                }
            }
            cmp << a.label << ',' << b.label << ',' << format_full(diff) << '\n';
        }
    }

    ordered_json body;
    auto jm = ordered_json::array();
    int exit_code = 0;
    for (const auto& mo : outcomes) {
        ordered_json m;
        m["label"] = mo.label;
        m["dir"] = mo.dir;
        m["exit_code"] = mo.exit_code;
        if (!mo.error.empty()) m["error"] = mo.error;
        jm.push_back(std::move(m));
        exit_code = std::max(exit_code, mo.exit_code);
    }
    body["members"] = std::move(jm);
    body["member_command"] = member_cmd;
    write_summary(out_dir, "sweep", base, body, watch.seconds(), {"comparison.csv"});
    std::cout << "sweep: " << members.size() << " members, exit " << exit_code << "\n";
    return exit_code;
}

int cmd_verify(const std::string& out_dir) {
    ensure_directory(out_dir);
    const auto outcomes = verify::run_acceptance(out_dir);
    bool all_pass = true;
    for (const auto& c : outcomes) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
        std::cout << "\n";
        all_pass = all_pass && c.pass;
    }
    std::cout << (all_pass ? "verification passed" : "verification FAILED") << "\n";
    return all_pass ? 0 : 2;
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const ConfigError&) {
        return 1;
    } catch (const ValidationError&) {
        return 1;
    } catch (const NoSolutionError&) {
        return 3;
    } catch (const std::exception&) {
        return 2;
    }
}

}  // namespace cypipe
