#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef ZRANGE_VERSION
#define ZRANGE_VERSION "unknown"
#endif

namespace zrange::cli {

namespace {

std::string cell(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
    return std::get<std::string>(v);
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

std::string to_string(Status s) {
    switch (s) {
        case Status::ok: return "ok";
        case Status::flagged: return "flagged";
        case Status::error: return "error";
    }
    return "?";
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

std::string render_csv(const Report& r) {
    std::ostringstream os;
    if (r.rows.empty()) return "command,status\n";
    const auto& first = r.rows.front();
    os << "command,status";
    for (const auto& [k, v] : first.parameters) os << ',' << k;
    for (const auto& [k, v] : first.metrics) os << ',' << k;
    os << '\n';
    for (const auto& row : r.rows) {
        if (row.parameters.size() != first.parameters.size() || row.metrics.size() != first.metrics.size())
            throw std::logic_error("render_csv: rows with different columns");
        os << r.command << ',' << to_string(row.status);
        for (const auto& [k, v] : row.parameters) os << ',' << cell(v);
        for (const auto& [k, v] : row.metrics) os << ',' << cell(v);
        os << '\n';
    }
    return os.str();
}

void write_report(const Report& r, const nlohmann::json& config_echo, const std::string& dir) {
    const std::filesystem::path base(dir);
    std::filesystem::create_directories(base);
    nlohmann::json s;
    s["config"] = config_echo;
    s["metrics"] = r.summary;
    s["rows"] = r.rows.size();
    std::size_t flagged = 0, errors = 0;
    for (const auto& row : r.rows) {
        flagged += row.status == Status::flagged;
        errors += row.status == Status::error;
    }
    s["flagged_rows"] = flagged;
    s["error_rows"] = errors;
    s["version"] = ZRANGE_VERSION;
    const std::string csv = render_csv(r);
    write_atomic(base / (r.command + ".csv"), csv);
    write_atomic(base / (r.command + ".json"), s.dump(2) + "\n");
}

}  // namespace zrange::cli
