#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zrange/grid.hpp"
#include "zrange/potential.hpp"

namespace zrange::cli {

enum class Command {
    scale_norms,
    resonance,
    kk_verify,
    cross_term,
    additivity,
    independence,
    limit_resolvent,
    efimov,
    thresholds,
    kernel22,
    mass_sweep,
};

const std::vector<std::string>& command_names();
std::string to_string(Command c);
Command command_from_string(const std::string& name);

/// Invalid configuration; `field` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& msg)
        : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct GridSpec {
    int n = 0;
    double r_max = 0.0;
    Spacing spacing = Spacing::logarithmic;
    double r_min = 0.0;  ///< 0 keeps the builder default

    RadialGrid build() const;
};

struct RunConfig {
    Command command = Command::resonance;
    std::optional<BasePotential> potential;
    std::optional<ScalingLaw> law;
    std::optional<GridSpec> grid;
    /// Named parameter lists.  Lists are zipped row by row; a list of length
    /// one is repeated.
    std::map<std::string, std::vector<double>> sweep;
    /// Command-specific settings, kept as JSON.
    nlohmann::json options = nlohmann::json::object();
    std::optional<int> refine;
    std::string output_path = ".";

    /// Number of rows of the zipped sweep (1 when empty).
    std::size_t sweep_rows() const;
    double sweep_value(const std::string& key, std::size_t row) const;
    bool has_sweep(const std::string& key) const { return sweep.count(key) > 0; }
};

nlohmann::json to_json(const RunConfig& c);

/// {"profile", "strength", "range"} at `path`; used for the config itself and
/// for partner potentials in options.
BasePotential parse_potential(const nlohmann::json& j, const std::string& path);

/// Parses and validates against the needs of the named command.  Throws
/// ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Checks that everything `c.command` needs is present and consistent.
void validate(const RunConfig& c);

}  // namespace zrange::cli
