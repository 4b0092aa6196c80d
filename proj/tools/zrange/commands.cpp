#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zrange/birman_schwinger.hpp"
#include "zrange/effective_operator.hpp"
#include "zrange/free_resolvent.hpp"
#include "zrange/konno_kuroda.hpp"
#include "zrange/linalg.hpp"
#include "zrange/resolvent_limit.hpp"
#include "zrange/spectrum.hpp"
#include "zrange/three_body_2d.hpp"
#include "zrange/thresholds.hpp"

namespace zrange::cli {

using nlohmann::json;

namespace {

const std::string na = "na";

const json* option(const RunConfig& c, const std::string& key) {
    return c.options.contains(key) ? &c.options.at(key) : nullptr;
}

double opt_number(const RunConfig& c, const std::string& key, double def) {
    const auto* v = option(c, key);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError("options." + key, "expected a number");
    return v->get<double>();
}

int opt_int(const RunConfig& c, const std::string& key, int def) {
    const auto* v = option(c, key);
    if (!v) return def;
    if (!v->is_number_integer()) throw ConfigError("options." + key, "expected an integer");
    return v->get<int>();
}

bool opt_bool(const RunConfig& c, const std::string& key, bool def) {
    const auto* v = option(c, key);
    if (!v) return def;
    if (!v->is_boolean()) throw ConfigError("options." + key, "expected true or false");
    return v->get<bool>();
}

std::vector<double> opt_list(const RunConfig& c, const std::string& key, std::vector<double> def) {
    const auto* v = option(c, key);
    if (!v) return def;
    if (!v->is_array()) throw ConfigError("options." + key, "expected a list of numbers");
    std::vector<double> out;
    for (const auto& x : *v) {
        if (!x.is_number()) throw ConfigError("options." + key, "expected a list of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::pair<double, double> opt_bracket(const RunConfig& c, std::pair<double, double> def) {
    const auto v = opt_list(c, "bracket", {def.first, def.second});
    if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError("options.bracket", "expected [lo, hi] with lo < hi");
    return {v[0], v[1]};
}

BasePotential opt_potential(const RunConfig& c, const std::string& key, const BasePotential& def) {
    const auto* v = option(c, key);
    return v ? parse_potential(*v, "options." + key) : def;
}

ImageKind opt_kind(const RunConfig& c) {
    const auto* v = option(c, "kind");
    if (!v) return ImageKind::contact_image;
    if (!v->is_string()) throw ConfigError("options.kind", "expected a string");
    for (auto k : {ImageKind::contact_image, ImageKind::weak_image, ImageKind::three_body_2d})
        if (v->get<std::string>() == to_string(k)) return k;
    throw ConfigError("options.kind", "expected contact_image, weak_image or three_body_2d");
}

int dimension(const RunConfig& c) { return c.law ? c.law->dimension : 3; }

// Finite numbers as is; everything else as an explicit tag.
json tagged(double x, const std::string& tag) { return std::isfinite(x) ? json(x) : json(tag); }
Value tagged_value(double x, const std::string& tag) { return std::isfinite(x) ? Value(x) : Value(tag); }

std::vector<double> sweep_list(const RunConfig& c, const std::string& key) {
    std::vector<double> v;
    for (std::size_t i = 0; i < c.sweep_rows(); ++i) v.push_back(c.sweep_value(key, i));
    return v;
}

Report scale_norms(const RunConfig& c) {
    Report r;
    const ScalingLaw law = c.law.value_or(ScalingLaw::unscaled(3));
    for (double eps : sweep_list(c, "epsilon")) {
        ScalingLaw l = law;
        l.epsilon = eps;
        const auto v = scale_potential(*c.potential, l);
        const auto n = v.norms();
        ReportRow row;
        row.parameters = {{"epsilon", eps}};
        row.metrics = {{"amplitude", v.amplitude()},
                       {"l1", n.l1},
                       {"l2", n.l2},
                       {"rollnik", n.rollnik ? Value(*n.rollnik) : Value(na)}};
        r.rows.push_back(row);
        r.summary["regime"] = std::string(to_string(l.regime()));
    }
    return r;
}

Report resonance(const RunConfig& c) {
    Report r;
    ResonanceOptions opt;
    opt.n = c.grid->n;
    const auto bracket = opt_bracket(c, {0.5, 20.0});
    const auto rep = find_resonance_coupling(*c.potential, c.law.value_or(ScalingLaw::unscaled(3)), bracket, opt);
    ReportRow row;
    row.parameters = {{"profile", std::string(to_string(c.potential->profile))}, {"range", c.potential->range}};
    row.metrics = {{"lambda_critical", rep.lambda_critical},
                   {"bs_top_eigenvalue", rep.bs_top_eigenvalue},
                   {"top_gap", rep.top_gap},
                   {"boundary_C", rep.boundary_C},
                   {"boundary_D", rep.boundary_D},
                   {"fit_residual", rep.fit_residual}};
    if (!rep.simple || rep.fit_residual > 1e-3) row.status = Status::flagged;
    r.rows.push_back(row);
    r.summary["lambda_critical"] = rep.lambda_critical;
    r.summary["simple"] = rep.simple;
    return r;
}

Report kk_verify(const RunConfig& c) {
    Report r;
    const ScalingLaw law = c.law.value_or(ScalingLaw::unscaled(3));
    const auto v = scale_potential(*c.potential, law);
    const auto grid = c.grid->build();
    double worst = 0.0;
    for (double z : sweep_list(c, "z")) {
        ReportRow row;
        row.parameters = {{"z", z}};
        try {
            const auto a = assemble_resolvent_diff(v, z, grid, law.dimension);
            const auto b = direct_resolvent_diff(v, z, grid, law.dimension);
            const double d = symmetric_norm(a.matrix.entries - b.matrix.entries) / symmetric_norm(b.matrix.entries);
            row.metrics = {{"rel_distance", d}, {"min_singular", a.min_singular}};
            if (!(d < 1e-8)) row.status = Status::flagged;
            worst = std::max(worst, d);
        } catch (const NumericalError& e) {
            row.metrics = {{"rel_distance", na}, {"min_singular", e.value()}};
            row.status = Status::error;
        }
        r.rows.push_back(row);
    }
    r.summary["max_rel_distance"] = worst;
    return r;
}

void defect_rows(Report& r, const DefectReport& d, const char* name, bool over_eps) {
    for (std::size_t i = 0; i < d.epsilons.size(); ++i) {
        ReportRow row;
        row.parameters = {{"epsilon", d.epsilons[i]}};
        row.metrics = {{name, d.values[i]}};
        if (over_eps) row.metrics.emplace_back(std::string(name) + "_over_epsilon", d.values[i] / d.epsilons[i]);
        row.metrics.emplace_back("refinement_change", d.refinement_change[i]);
        if (d.refinement_change[i] > 0.01) row.status = Status::flagged;
        r.rows.push_back(row);
    }
    r.summary["fitted_exponent"] = d.fitted_exponent;
    r.summary["converged"] = d.converged;
}

Report cross_term(const RunConfig& c) {
    Report r;
    const int d = dimension(c);
    const ScaledFamily v1{*c.potential, c.law && c.law->exponent ? c.law->exponent : std::optional<int>(d), d};
    const auto* p = option(c, "partner_exponent");
    std::optional<int> pe = d - 1;
    if (p) {
        if (p->is_null()) pe.reset();
        else if (p->is_number_integer()) pe = p->get<int>();
        else throw ConfigError("options.partner_exponent", "expected an integer or null");
    }
    const ScaledFamily u{opt_potential(c, "partner", *c.potential), pe, d};
    const auto rep = cross_term_norm(v1, {u}, sweep_list(c, "epsilon"));
    defect_rows(r, rep, "norm", false);
    bool dec = true;
    for (std::size_t i = 1; i < rep.values.size(); ++i) dec = dec && rep.values[i] < rep.values[i - 1];
    r.summary["strictly_decreasing"] = dec;
    return r;
}

Report additivity(const RunConfig& c) {
    Report r;
    const int d = dimension(c);
    const ScaledFamily v2{*c.potential, c.law && c.law->exponent ? c.law->exponent : std::optional<int>(d - 1), d};
    const ScaledFamily v3{opt_potential(c, "partner", *c.potential), std::nullopt, d};
    const auto rep = additivity_defect(v2, v3, sweep_list(c, "epsilon"));
    defect_rows(r, rep, "defect", true);
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.values.size(); ++i)
        worst = std::max(worst, (rep.values[i] / rep.epsilons[i]) / (rep.values[0] / rep.epsilons[0]));
    r.summary["max_relative_defect_over_epsilon"] = worst;
    return r;
}

Report independence(const RunConfig& c) {
    Report r;
    const int d = dimension(c);
    const auto grid = c.grid->build();
    const double z = opt_number(c, "z", 1.0);
    const int levels = opt_int(c, "levels", 4);
    IndependenceInputs in;
    if (opt_bool(c, "v1", true)) in.v1 = ScaledFamily{opt_potential(c, "v1_potential", *c.potential), d, d};
    if (opt_bool(c, "v2", true)) in.v2 = ScaledFamily{opt_potential(c, "v2_potential", *c.potential), d - 1, d};
    if (opt_bool(c, "v3", true)) in.v3 = ScaledFamily{opt_potential(c, "v3_potential", *c.potential), std::nullopt, d};
    if (!in.v1 && !in.v2 && !in.v3) throw ConfigError("options", "all of v1, v2, v3 are disabled");
    double worst = 0.0;
    for (double eps : sweep_list(c, "epsilon")) {
        ReportRow row;
        row.parameters = {{"epsilon", eps}, {"z", z}};
        try {
            const auto rep = independence_spectrum_check(in, eps, z, grid, levels);
            row.metrics = {{"discrepancy", rep.discrepancy},
                           {"lowest_actual", rep.actual.front()},
                           {"lowest_predicted", rep.predicted.front()}};
            worst = std::max(worst, rep.discrepancy);
        } catch (const NumericalError& e) {
            row.metrics = {{"discrepancy", na}, {"lowest_actual", na}, {"lowest_predicted", na}};
            row.status = Status::error;
        }
        r.rows.push_back(row);
    }
    r.summary["max_discrepancy"] = worst;
    return r;
}

Report limit_resolvent(const RunConfig& c) {
    Report r;
    const auto grid = c.grid->build();
    const double z = opt_number(c, "z", 1.0);
    const int nf = opt_int(c, "functions", 5);
    const int seed = opt_int(c, "seed", 7);
    if (nf < 1) throw ConfigError("options.functions", "must be positive");
    const auto fs = random_bumps(grid, grid, nf, static_cast<std::uint64_t>(seed));
    const auto rep = convergence_study(*c.potential, z, sweep_list(c, "epsilon"), fs, grid);
    for (std::size_t k = 0; k < rep.epsilons.size(); ++k) {
        ReportRow row;
        row.parameters = {{"epsilon", rep.epsilons[k]}};
        row.metrics = {{"coupling", rep.couplings[k]}};
        for (std::size_t f = 0; f < rep.discrepancy[k].size(); ++f)
            row.metrics.emplace_back("discrepancy_f" + std::to_string(f), rep.discrepancy[k][f]);
        r.rows.push_back(row);
    }
    const auto h = discretize_h0(grid, 3).entries;
    const double cc = point_interaction_strength(grid, 0.5);
    const LimitResolvent w(h, h, cc, cc, z);
    const auto id = verify_limit_identity(w, w.limit_hamiltonian(), z, fs);
    r.summary["monotone"] = rep.monotone;
    r.summary["reduction"] = rep.reduction;
    r.summary["identity_residual"] = id.max_residual;
    return r;
}

Report efimov(const RunConfig& c) {
    Report r;
    const auto kind = opt_kind(c);
    const int d = opt_int(c, "d", 3);
    const double m = opt_number(c, "m", 1.0);
    const bool probes = opt_bool(c, "probes", true);
    const auto grid = c.grid->build();
    for (double C : sweep_list(c, "C")) {
        const auto op = effective_operator(kind, C, d, grid, m);
        const auto s = eig_spectrum(op.entries);
        ReportRow row;
        row.parameters = {{"C", C}};
        row.metrics = {{"n_negative", static_cast<double>(s.count_negative)}};
        if (s.count_negative >= 4) {
            const int last = opt_int(c, "last_level", s.count_negative - 1);
            const auto g = geometric_ratio(s, opt_int(c, "first_level", 2), std::min(last, s.count_negative),
                                           probes ? std::optional<ScaleProbes>(scale_probes(op)) : std::nullopt);
            row.metrics.emplace_back("ratio", g.ratio);
            row.metrics.emplace_back("deviation", g.deviation);
            row.metrics.emplace_back("classification", std::string(to_string(g.classification)));
        } else {
            row.metrics.emplace_back("ratio", na);
            row.metrics.emplace_back("deviation", na);
            row.metrics.emplace_back("classification", na);
            row.status = Status::flagged;
        }
        row.metrics.emplace_back("grid_n", static_cast<double>(grid.size()));
        row.metrics.emplace_back("r_min", grid.r_min());
        row.metrics.emplace_back("r_max", grid.r_max());
        r.rows.push_back(row);
    }
    r.summary["kind"] = to_string(kind);
    r.summary["d"] = d;
    return r;
}

Report thresholds(const RunConfig& c) {
    Report r;
    const auto kind = opt_kind(c);
    const int d = opt_int(c, "d", 3);
    ThresholdOptions opt;
    opt.r_max = c.grid->r_max;
    if (c.grid->r_min > 0.0) opt.r_min = c.grid->r_min;
    opt.refinements = c.refine.value_or(3);
    if (opt.refinements < 2) throw ConfigError("refine", "thresholds need at least 2 refinements");
    opt.points_per_decade = static_cast<int>(std::lround((c.grid->n - 1) / std::log10(opt.r_max / opt.r_min)));
    const auto rep = find_thresholds(kind, d, opt_bracket(c, {0.05, 20.0}), opt);
    for (std::size_t j = 0; j < rep.c0_estimates.size(); ++j) {
        ReportRow row;
        row.parameters = {{"r_min_coarse", rep.r_mins[j]}, {"r_min_fine", rep.r_mins[j + 1]}};
        row.metrics = {{"crossings_fine", static_cast<double>(rep.crossings[j + 1].size())},
                       {"C0_estimate", rep.c0_estimates[j]},
                       {"C1_estimate", tagged_value(rep.c1_estimates[j], "divergent")}};
        if (!rep.converged) row.status = Status::flagged;
        r.rows.push_back(row);
    }
    r.summary["kind"] = to_string(kind);
    r.summary["d"] = d;
    r.summary["C0"] = rep.C0;
    r.summary["C1"] = tagged(rep.C1, "divergent");
    r.summary["accumulates"] = rep.accumulates;
    r.summary["grid_refinement_drift"] = rep.grid_refinement_drift;
    r.summary["converged"] = rep.converged;
    return r;
}

Report kernel22_cmd(const RunConfig& c) {
    Report r;
    for (std::size_t i = 0; i < c.sweep_rows(); ++i) {
        const Eigen::Vector2d q1(c.sweep_value("q1x", i), c.sweep_value("q1y", i));
        const Eigen::Vector2d q2(c.sweep_value("q2x", i), c.sweep_value("q2y", i));
        const auto k = kernel22(q1, q2);
        ReportRow row;
        row.parameters = {{"q1x", q1.x()}, {"q1y", q1.y()}, {"q2x", q2.x()}, {"q2y", q2.y()}};
        row.metrics = {{"kernel", k.pole ? Value(std::string("pole")) : Value(k.value)}};
        if (k.pole) row.status = Status::flagged;
        r.rows.push_back(row);
    }
    AngularQuadrature quad;
    quad.eta = opt_number(c, "eta", quad.eta);
    quad.panels = opt_int(c, "panels", quad.panels);
    std::vector<double> rs;
    for (int k = 0; k <= 16; ++k) rs.push_back(0.01 * std::pow(10.0, k / 4.0));
    const auto h = hyperradial_reduce(quad, opt_list(c, "r", rs));
    r.summary["hyperradial"] = {{"eta", quad.eta},
                                {"angular_average", h.angular_average},
                                {"exponent", h.exponent},
                                {"prefactor", h.prefactor},
                                {"refinement_change", h.refinement_change},
                                {"converged", h.converged}};
    return r;
}

Report mass_sweep(const RunConfig& c) {
    Report r;
    const double cc = opt_number(c, "c", 1.0);
    const auto rep = mass_sweep_2d(sweep_list(c, "m"), cc, c.grid->build());
    for (std::size_t k = 0; k < rep.masses.size(); ++k) {
        ReportRow row;
        row.parameters = {{"m", rep.masses[k]}, {"c", cc}};
        row.metrics = {{"count", static_cast<double>(rep.counts[k])},
                       {"max_abs_energy", rep.max_abs_energy[k]},
                       {"dilation_levels", static_cast<double>(rep.dilation_levels[k])},
                       {"shallowest_resolved", rep.shallowest_resolved[k] ? 1.0 : 0.0}};
        if (!rep.shallowest_resolved[k]) row.status = Status::flagged;
        r.rows.push_back(row);
    }
    r.summary["count_nondecreasing"] = rep.count_nondecreasing;
    r.summary["max_abs_nonincreasing"] = rep.max_abs_nonincreasing;
    r.summary["dilation_error"] = rep.dilation_error;
    return r;
}

}  // namespace

Report run(const RunConfig& c) {
    validate(c);
    Report r;
    switch (c.command) {
        case Command::scale_norms: r = scale_norms(c); break;
        case Command::resonance: r = resonance(c); break;
        case Command::kk_verify: r = kk_verify(c); break;
        case Command::cross_term: r = cross_term(c); break;
        case Command::additivity: r = additivity(c); break;
        case Command::independence: r = independence(c); break;
        case Command::limit_resolvent: r = limit_resolvent(c); break;
        case Command::efimov: r = efimov(c); break;
        case Command::thresholds: r = thresholds(c); break;
        case Command::kernel22: r = kernel22_cmd(c); break;
        case Command::mass_sweep: r = mass_sweep(c); break;
    }
    r.command = to_string(c.command);
    return r;
}

}  // namespace zrange::cli
