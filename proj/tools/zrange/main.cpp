#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "zrange/potential.hpp"

namespace {

enum Exit { ok = 0, config_error = 2, run_error = 3, io_error = 4 };

}  // namespace

int main(int argc, char** argv) {
    using namespace zrange::cli;
    CLI::App app{"zero-range interaction studies"};
    std::string command, config_path, out;
    std::optional<int> grid_n, refine;
    std::optional<double> r_max;
    app.add_option("command", command, "study to run")->required()->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out, "output directory (overrides output_path)");
    app.add_option("--grid-n", grid_n, "overrides grid.n");
    app.add_option("--rmax", r_max, "overrides grid.r_max");
    app.add_option("--refine", refine, "overrides refine");
    CLI11_PARSE(app, argc, argv);

    RunConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config", "cannot open '" + config_path + "'");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config", e.what());
        }
        if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
        if (!j.contains("command")) j["command"] = command;
        if (j["command"] != command)
            throw ConfigError("command", "config names '" + j["command"].dump() + "', command line '" + command + "'");
        if (grid_n) j["grid"]["n"] = *grid_n;
        if (r_max) j["grid"]["r_max"] = *r_max;
        if (refine) j["refine"] = *refine;
        if (!out.empty()) j["output_path"] = out;
        cfg = parse_config(j);
    } catch (const ConfigError& e) {
        std::cerr << "zrange: invalid config: " << e.what() << '\n';
        return config_error;
    }

    Report report;
    try {
        report = run(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "zrange: invalid config: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "zrange: " << command << " failed: " << e.what() << '\n';
        return run_error;
    }

    try {
        write_report(report, to_json(cfg), cfg.output_path);
    } catch (const std::exception& e) {
        std::cerr << "zrange: " << e.what() << '\n';
        return io_error;
    }
    std::size_t flagged = 0;
    for (const auto& row : report.rows) flagged += row.status != Status::ok;
    std::cout << report.command << ": " << report.rows.size() << " rows (" << flagged << " flagged) -> "
              << cfg.output_path << '\n';
    return ok;
}
