#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace zrange::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> names{"scale-norms",     "resonance", "kk-verify",  "cross-term",
                                     "additivity",      "independence", "limit-resolvent", "efimov",
                                     "thresholds",      "kernel22",  "mass-sweep"};

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(join(path, key), "missing");
    return j.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "config" : path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(join(path, k), "unknown field");
}

std::string spacing_name(Spacing s) {
    switch (s) {
        case Spacing::linear: return "linear";
        case Spacing::logarithmic: return "logarithmic";
        case Spacing::composite: return "composite";
    }
    return "?";
}

ScalingLaw parse_law(const json& j) {
    only_keys(j, "law", {"exponent", "epsilon", "dimension"});
    ScalingLaw l;
    if (j.contains("exponent") && !j["exponent"].is_null()) l.exponent = integer(j["exponent"], "law.exponent");
    if (j.contains("epsilon")) l.epsilon = number(j["epsilon"], "law.epsilon");
    if (j.contains("dimension")) l.dimension = integer(j["dimension"], "law.dimension");
    try {
        l.validate();
    } catch (const std::exception& e) {
        throw ConfigError("law", e.what());
    }
    return l;
}

GridSpec parse_grid(const json& j) {
    only_keys(j, "grid", {"n", "r_max", "spacing", "r_min"});
    GridSpec g;
    g.n = integer(require(j, "n", "grid"), "grid.n");
    if (g.n < 2) throw ConfigError("grid.n", "must be at least 2");
    if (j.contains("r_max")) g.r_max = number(j["r_max"], "grid.r_max");
    if (j.contains("spacing")) {
        const auto& s = j["spacing"];
        if (s == "linear") g.spacing = Spacing::linear;
        else if (s == "logarithmic") g.spacing = Spacing::logarithmic;
        else throw ConfigError("grid.spacing", "expected \"linear\" or \"logarithmic\"");
    }
    if (j.contains("r_min")) g.r_min = number(j["r_min"], "grid.r_min");
    if (g.r_min < 0.0) throw ConfigError("grid.r_min", "must be nonnegative");
    return g;
}

bool uses_potential(Command c) {
    switch (c) {
        case Command::scale_norms:
        case Command::resonance:
        case Command::kk_verify:
        case Command::cross_term:
        case Command::additivity:
        case Command::independence:
        case Command::limit_resolvent: return true;
        default: return false;
    }
}

bool uses_grid(Command c) {
    switch (c) {
        case Command::resonance:
        case Command::kk_verify:
        case Command::independence:
        case Command::limit_resolvent:
        case Command::efimov:
        case Command::thresholds:
        case Command::mass_sweep: return true;
        default: return false;
    }
}

std::vector<std::string> required_sweep(Command c) {
    switch (c) {
        case Command::scale_norms:
        case Command::cross_term:
        case Command::additivity:
        case Command::independence:
        case Command::limit_resolvent: return {"epsilon"};
        case Command::kk_verify: return {"z"};
        case Command::efimov: return {"C"};
        case Command::kernel22: return {"q1x", "q1y", "q2x", "q2y"};
        case Command::mass_sweep: return {"m"};
        default: return {};
    }
}

}  // namespace

BasePotential parse_potential(const json& j, const std::string& path) {
    only_keys(j, path, {"profile", "strength", "range"});
    BasePotential p;
    const auto& prof = require(j, "profile", path);
    if (!prof.is_string()) throw ConfigError(path + ".profile", "expected a string");
    try {
        p.profile = profile_from_string(prof.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError(path + ".profile", e.what());
    }
    if (j.contains("strength")) p.strength = number(j["strength"], path + ".strength");
    if (j.contains("range")) p.range = number(j["range"], path + ".range");
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    return p;
}

const std::vector<std::string>& command_names() { return names; }

std::string to_string(Command c) { return names[static_cast<std::size_t>(c)]; }

Command command_from_string(const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError("command", "unknown command '" + name + "'");
    return static_cast<Command>(it - names.begin());
}

RadialGrid GridSpec::build() const {
    return build_grid(n, r_max, spacing, r_min);
}

std::size_t RunConfig::sweep_rows() const {
    std::size_t rows = 1;
    for (const auto& [k, v] : sweep) rows = std::max(rows, v.size());
    return rows;
}

double RunConfig::sweep_value(const std::string& key, std::size_t row) const {
    const auto& v = sweep.at(key);
    return v.size() == 1 ? v.front() : v.at(row);
}

json to_json(const RunConfig& c) {
    json j;
    j["command"] = to_string(c.command);
    if (c.potential)
        j["potential"] = {{"profile", std::string(to_string(c.potential->profile))},
                          {"strength", c.potential->strength},
                          {"range", c.potential->range}};
    if (c.law) {
        j["law"] = {{"epsilon", c.law->epsilon}, {"dimension", c.law->dimension}};
        j["law"]["exponent"] = c.law->exponent ? json(*c.law->exponent) : json(nullptr);
    }
    if (c.grid) {
        j["grid"] = {{"n", c.grid->n}, {"r_max", c.grid->r_max}, {"spacing", spacing_name(c.grid->spacing)}};
        if (c.grid->r_min > 0.0) j["grid"]["r_min"] = c.grid->r_min;
    }
    if (!c.sweep.empty()) j["sweep"] = c.sweep;
    if (!c.options.empty()) j["options"] = c.options;
    if (c.refine) j["refine"] = *c.refine;
    j["output_path"] = c.output_path;
    return j;
}

RunConfig parse_config(const json& j) {
    only_keys(j, "", {"command", "potential", "law", "grid", "sweep", "options", "refine", "output_path"});
    RunConfig c;
    const auto& cmd = require(j, "command", "");
    if (!cmd.is_string()) throw ConfigError("command", "expected a string");
    c.command = command_from_string(cmd.get<std::string>());
    if (j.contains("potential")) c.potential = parse_potential(j["potential"], "potential");
    if (j.contains("law")) c.law = parse_law(j["law"]);
    if (j.contains("grid")) c.grid = parse_grid(j["grid"]);
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (!s.is_object()) throw ConfigError("sweep", "expected an object of number lists");
        for (const auto& [k, v] : s.items()) {
            const std::string path = "sweep." + k;
            if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty list of numbers");
            std::vector<double> vals;
            for (std::size_t i = 0; i < v.size(); ++i) vals.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
            c.sweep[k] = std::move(vals);
        }
    }
    if (j.contains("options")) {
        if (!j["options"].is_object()) throw ConfigError("options", "expected an object");
        c.options = j["options"];
    }
    if (j.contains("refine")) c.refine = integer(j["refine"], "refine");
    if (j.contains("output_path")) {
        if (!j["output_path"].is_string()) throw ConfigError("output_path", "expected a string");
        c.output_path = j["output_path"].get<std::string>();
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
    }
    return parse_config(j);
}

void validate(const RunConfig& c) {
    if (uses_potential(c.command) && !c.potential) throw ConfigError("potential", "missing");
    if (uses_grid(c.command)) {
        if (!c.grid) throw ConfigError("grid", "missing");
        if (c.command != Command::resonance && !(c.grid->r_max > 0.0))
            throw ConfigError("grid.r_max", "missing or not positive");
        if (c.grid->r_min > 0.0 && c.grid->r_max > 0.0 && c.grid->r_min >= c.grid->r_max)
            throw ConfigError("grid.r_min", "must be below grid.r_max");
    }
    for (const auto& key : required_sweep(c.command))
        if (!c.has_sweep(key)) throw ConfigError("sweep." + key, "missing");
    const std::size_t rows = c.sweep_rows();
    for (const auto& [k, v] : c.sweep)
        if (v.size() != 1 && v.size() != rows)
            throw ConfigError("sweep." + k, "length " + std::to_string(v.size()) + " does not match " +
                                                std::to_string(rows) + " rows");
    if (c.refine && *c.refine < 0) throw ConfigError("refine", "must be nonnegative");
}

}  // namespace zrange::cli
