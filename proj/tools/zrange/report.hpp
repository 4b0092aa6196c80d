#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace zrange::cli {

enum class Status { ok, flagged, error };
std::string to_string(Status s);

/// A number, or a tag such as "pole" or "na" where no finite value exists.
using Value = std::variant<double, std::string>;

struct ReportRow {
    std::vector<std::pair<std::string, Value>> parameters;
    std::vector<std::pair<std::string, Value>> metrics;
    Status status = Status::ok;
};

struct Report {
    std::string command;
    std::vector<ReportRow> rows;
    nlohmann::json summary = nlohmann::json::object();
};

/// 12 significant digits; non-finite numbers become "nan", "inf", "-inf".
std::string format_number(double x);

/// Header plus one line per row.  All rows must carry the same columns.
std::string render_csv(const Report& r);

/// Writes <dir>/<command>.csv and <dir>/<command>.json.  Each file goes to a
/// temporary name first and is renamed into place.
void write_report(const Report& r, const nlohmann::json& config_echo, const std::string& dir);

}  // namespace zrange::cli
