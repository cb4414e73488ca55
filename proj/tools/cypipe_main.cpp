// cypipe: steady and unsteady Carreau-Yasuda pipe flow under a radially
// varying pressure gradient. Subcommands: classify, steady, unsteady,
// sweep, verify.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cypipe/commands.hpp"
#include "cypipe/errors.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cypipe::ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carreau-Yasuda pipe flow solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    bool override_backward = false;
    int workers = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) {
            cmd->add_option("--config", config_path, "configuration file (JSON)")
                ->required();
        }
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* classify = app.add_subcommand("classify", "equation regime and existence report");
    add_common(classify, true);
    auto* steady = app.add_subcommand("steady", "steady profile solve");
    add_common(steady, true);
    auto* unsteady = app.add_subcommand("unsteady", "time integration with monitors");
    add_common(unsteady, true);
    unsteady->add_flag("--override-backward", override_backward,
                       "continue past backward-regime detection (non-physical)");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep of steady/unsteady runs");
    add_common(sweep, true);
    sweep->add_option("--workers", workers, "concurrent sweep members");
    auto* verify = app.add_subcommand("verify", "run the built-in verification fixtures");
    add_common(verify, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) {
            return cypipe::cmd_classify(cypipe::parse_config(slurp(config_path)), out_dir);
        }
        if (steady->parsed()) {
            return cypipe::cmd_steady(cypipe::parse_config(slurp(config_path)), out_dir);
        }
        if (unsteady->parsed()) {
            auto cfg = cypipe::parse_config(slurp(config_path));
            if (override_backward) cfg.run.override_backward = true;
            return cypipe::cmd_unsteady(cfg, out_dir);
        }
        if (sweep->parsed()) {
            return cypipe::cmd_sweep(slurp(config_path), out_dir, workers);
        }
        if (verify->parsed()) {
            return cypipe::cmd_verify(out_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cypipe::exit_code_for_current_exception();
    }
    return 0;
}
