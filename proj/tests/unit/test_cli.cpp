#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "config.hpp"
#include "report.hpp"

using namespace zrange::cli;
using nlohmann::json;

namespace {

json kernel_config() {
    return json::parse(R"({
        "command": "kernel22",
        "sweep": {"q1x": [1, 1], "q1y": [0, 0], "q2x": [1, -1], "q2y": [0, 0]}
    })");
}

std::string field_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

const ReportRow& only_row(const Report& r) {
    EXPECT_EQ(r.rows.size(), 1u);
    return r.rows.front();
}

double metric(const ReportRow& row, const std::string& name) {
    for (const auto& [k, v] : row.metrics)
        if (k == name) return std::get<double>(v);
    ADD_FAILURE() << "no metric " << name;
    return NAN;
}

}  // namespace

TEST(Config, RoundTripsThroughJson) {
    const auto j = json::parse(R"({
        "command": "efimov",
        "grid": {"n": 200, "r_max": 100, "spacing": "logarithmic", "r_min": 1e-4},
        "law": {"exponent": null, "epsilon": 1, "dimension": 3},
        "potential": {"profile": "square_well", "strength": 2.5, "range": 1},
        "sweep": {"C": [1, 2.5]},
        "options": {"kind": "weak_image"},
        "refine": 2,
        "output_path": "out"
    })");
    const auto c = parse_config(j);
    const auto echo = to_json(c);
    EXPECT_EQ(to_json(parse_config(echo)), echo);
    EXPECT_EQ(c.grid->n, 200);
    EXPECT_EQ(c.sweep_rows(), 2u);
    EXPECT_FALSE(c.law->exponent.has_value());
}

TEST(Config, DiagnosticsNameTheField) {
    auto j = json::parse(R"({"command": "efimov", "grid": {"r_max": 100}, "sweep": {"C": [1]}})");
    EXPECT_EQ(field_of(j), "grid.n");
    j["grid"]["n"] = "ten";
    EXPECT_EQ(field_of(j), "grid.n");
    j["grid"]["n"] = 100;
    j.erase("sweep");
    EXPECT_EQ(field_of(j), "sweep.C");
    j["sweep"] = {{"C", {1, 2, 3}}, {"extra", {1, 2}}};
    EXPECT_EQ(field_of(j), "sweep.extra");
    EXPECT_EQ(field_of(json{{"command", "nope"}}), "command");
    EXPECT_EQ(field_of(json{{"command", "kernel22"}, {"colour", 1}}), "colour");
    auto p = json::parse(R"({"command": "resonance", "grid": {"n": 10},
                             "potential": {"profile": "gaussian", "strength": -1}})");
    EXPECT_EQ(field_of(p), "potential");
    p["potential"] = {{"profile", "lorentzian"}};
    EXPECT_EQ(field_of(p), "potential.profile");
}

TEST(Report, NumberFormatting) {
    EXPECT_EQ(format_number(2.0 / 3.0), "0.666666666667");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1e-20), "1e-20");
    EXPECT_EQ(format_number(INFINITY), "inf");
}

TEST(Run, Kernel22FlagsPole) {
    const auto r = run(parse_config(kernel_config()));
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.rows[0].status, Status::ok);
    EXPECT_NEAR(metric(r.rows[0], "kernel"), 1.0 / 12.0, 1e-15);
    EXPECT_EQ(r.rows[1].status, Status::flagged);
    EXPECT_EQ(std::get<std::string>(r.rows[1].metrics[0].second), "pole");
    EXPECT_NEAR(r.summary["hyperradial"]["exponent"].get<double>(), -1.0, 0.05);
}

TEST(Run, ResonanceSquareWell) {
    const auto c = parse_config(json::parse(R"({
        "command": "resonance", "grid": {"n": 800},
        "potential": {"profile": "square_well", "strength": 1, "range": 1},
        "options": {"bracket": [1, 5]}
    })"));
    const auto r = run(c);
    const auto& row = only_row(r);
    EXPECT_NEAR(metric(row, "lambda_critical"), 2.4674011, 1e-4 * 2.4674);
}

TEST(Run, CsvIsDeterministic) {
    const auto c = parse_config(json::parse(R"({
        "command": "mass-sweep", "grid": {"n": 121, "r_max": 100, "r_min": 1e-4},
        "sweep": {"m": [1, 3]}
    })"));
    const auto a = render_csv(run(c)), b = render_csv(run(c));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.substr(0, a.find('\n')),
              "command,status,m,c,count,max_abs_energy,dilation_levels,shallowest_resolved");
}
