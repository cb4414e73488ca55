#include "cypipe/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cypipe/errors.hpp"

namespace cypipe {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_steady_csv(const std::string& path, const SteadyProfile& profile) {
    auto out = open_out(path);
    out << "# cypipe steady profile, schema_version=1\n";
    out << "Y,V,V_Y,B_eps,F_of_V_Y\n";
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
        out << format_full(profile.grid[i]) << ',' << format_full(profile.V[i]) << ','
            << format_full(profile.V_Y[i]) << ',' << format_full(profile.B[i]) << ','
            << format_full(profile.F_of_V_Y[i]) << '\n';
    }
}

void write_snapshot_csv(const std::string& path, const Snapshot& snapshot,
                        const Grid& grid) {
    auto out = open_out(path);
    out << "# cypipe snapshot, schema_version=1, T=" << format_full(snapshot.T) << "\n";
    out << "Y,U,U_Y,U_T\n";
    for (std::size_t i = 0; i < snapshot.U.size(); ++i) {
        out << format_full(grid.node(static_cast<int>(i))) << ','
            << format_full(snapshot.U[i]) << ',' << format_full(snapshot.U_Y[i]) << ','
            << format_full(snapshot.U_T[i]) << '\n';
    }
}

void write_monitor_log(const std::string& path, const std::vector<BoundReport>& log) {
    auto out = open_out(path);
    for (const auto& rep : log) {
        nlohmann::ordered_json rec;
        rec["schema_version"] = 1;
        rec["step"] = rep.step;
        rec["T"] = format_full(rep.T);
        rec["dt"] = format_full(rep.dt);
        auto checks = nlohmann::ordered_json::array();
        for (const auto& c : rep.checks) {
            if (!c.enabled) continue;
            nlohmann::ordered_json jc;
            jc["name"] = c.name;
            jc["bound"] = format_full(c.bound);
            jc["observed"] = format_full(c.observed);
            jc["margin"] = format_full(c.margin);
            jc["pass"] = c.pass;
            checks.push_back(std::move(jc));
        }
        rec["checks"] = std::move(checks);
        out << rec.dump() << '\n';
    }
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("cannot create directory " + path + ": " + ec.message());
}

bool files_identical(const std::string& a, const std::string& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return ca == cb;
}

}  // namespace cypipe
