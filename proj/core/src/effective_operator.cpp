#include "zrange/effective_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zrange/free_resolvent.hpp"
#include "zrange/linalg.hpp"
#include "zrange/potential.hpp"

namespace zrange {

namespace {

int effective_dimension(ImageKind kind, int d) {
    if (kind == ImageKind::three_body_2d) return 4;
    if (d != 2 && d != 3) throw InvalidArgument("image operators are defined for d = 2 and d = 3");
    return d;
}

// Weight exponent of the cell measure: u form for d = 3, r^(d-1) otherwise.
int measure_power(int d) { return d == 3 ? 0 : d - 1; }

double power_integral(int p, double a, double b) {
    return (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
}

// Antiderivative of -log(r) r^p.
double log_antiderivative(int p, double r) {
    const double q = p + 1.0;
    return -std::pow(r, q) * std::log(r) / q + std::pow(r, q) / (q * q);
}

Eigen::MatrixXd kinetic_part(ImageKind kind, int d, const RadialGrid& grid, double m) {
    if (kind == ImageKind::three_body_2d) return kinetic_matrix(grid, 4, 1.0 / m);
    return kinetic_root(grid, d, 1.0).sqrt();
}

// Same points per decade, grid extended by one decade at the inner or outer end.
RadialGrid extend_decade(const RadialGrid& g, bool inward) {
    const auto& r = g.nodes();
    const double q = r[1] / r[0];
    const int extra = static_cast<int>(std::lround(std::log(10.0) / std::log(q)));
    std::vector<double> nodes;
    if (inward) {
        for (int k = extra; k >= 1; --k) nodes.push_back(r.front() * std::pow(q, -k));
        nodes.insert(nodes.end(), r.begin(), r.end());
    } else {
        nodes = r;
        for (int k = 1; k <= extra; ++k) nodes.push_back(r.back() * std::pow(q, k));
    }
    return RadialGrid(nodes, nodes.front() / q, nodes.back() * q, Spacing::logarithmic, g.outer());
}

}  // namespace

const char* to_string(ImageKind k) {
    switch (k) {
        case ImageKind::contact_image: return "contact_image";
        case ImageKind::weak_image: return "weak_image";
        case ImageKind::three_body_2d: return "three_body_2d";
    }
    return "?";
}

const char* to_string(GeometricClass c) {
    switch (c) {
        case GeometricClass::efimov: return "efimov";
        case GeometricClass::thomas: return "thomas";
        case GeometricClass::not_geometric: return "not_geometric";
    }
    return "?";
}

void require_scale_bracket(const RadialGrid& grid) {
    if (grid.spacing() != Spacing::logarithmic) throw InvalidArgument("effective operators need a logarithmic grid");
    if (grid.r_min() > 1e-4 * (1.0 + 1e-12) || grid.r_max() < 1e2 * (1.0 - 1e-12))
        throw InvalidArgument("scale bracket too narrow: need r_min <= 1e-4 and r_max >= 1e2 (got " +
                              std::to_string(grid.r_min()) + ", " + std::to_string(grid.r_max()) + ")");
}

Eigen::VectorXd image_potential_diagonal(ImageKind kind, const RadialGrid& grid, int d) {
    d = effective_dimension(kind, d);
    const int p = measure_power(d);
    const Eigen::VectorXd m = cell_measure(grid, d);
    Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lo = grid.cell_lo(i), hi = grid.cell_hi(i);
        double num = 0.0;
        if (kind == ImageKind::weak_image) {
            const double b = std::min(hi, 1.0);
            if (b > lo) num = log_antiderivative(p, b) - log_antiderivative(p, lo);
        } else {
            num = p == 0 ? std::log(hi / lo) : power_integral(p - 1, lo, hi);
        }
        out(static_cast<Eigen::Index>(i)) = num / m(static_cast<Eigen::Index>(i));
    }
    return out;
}

EffectiveOperator effective_operator(ImageKind kind, double C, int d, const RadialGrid& grid, double m) {
    require_scale_bracket(grid);
    if (!(C >= 0.0)) throw InvalidArgument("effective_operator: C must be nonnegative");
    if (!(m > 0.0)) throw InvalidArgument("effective_operator: mass must be positive");
    d = effective_dimension(kind, d);
    EffectiveOperator op;
    op.kind = kind;
    op.C = C;
    op.d = d;
    op.m = m;
    op.grid = grid;
    op.entries = kinetic_part(kind, d, grid, m);
    op.entries.diagonal() -= C * image_potential_diagonal(kind, grid, d);
    return op;
}

std::vector<double> image_thresholds(ImageKind kind, int d, const RadialGrid& grid, double m) {
    require_scale_bracket(grid);
    d = effective_dimension(kind, d);
    const Eigen::VectorXd s = image_potential_diagonal(kind, grid, d).cwiseSqrt();
    Eigen::MatrixXd kinv;
    if (kind == ImageKind::three_body_2d) {
        kinv = kinetic_root(grid, 4, 1.0 / m).inverse_sqrt();
        kinv = kinv * kinv;
    } else {
        kinv = kinetic_root(grid, d, 1.0).inverse_sqrt();
    }
    Eigen::MatrixXd b = s.asDiagonal() * kinv * s.asDiagonal();
    b = 0.5 * (b + b.transpose()).eval();
    const Eigen::VectorXd mu = symmetric_eigen(b, false).values;
    std::vector<double> out;
    for (Eigen::Index k = mu.size() - 1; k >= 0; --k) {
        if (!(mu(k) > 1e-14 * mu(mu.size() - 1))) break;
        out.push_back(1.0 / mu(k));
    }
    return out;
}

GeometricRatio geometric_ratio(const SpectrumReport& spectrum, std::optional<int> first_level,
                               std::optional<int> last_level, const std::optional<ScaleProbes>& probes) {
    const auto neg = spectrum.negative();
    const int n = static_cast<int>(neg.size());
    if (n < 4) throw InvalidArgument("geometric_ratio: needs at least 4 negative eigenvalues, got " + std::to_string(n));
    GeometricRatio out;
    out.first_level = first_level.value_or(2);
    out.last_level = last_level.value_or(n - 1);
    if (out.first_level < 1 || out.last_level > n || out.last_level - out.first_level < 1)
        throw InvalidArgument("geometric_ratio: level window out of range");

    std::vector<double> r;
    double log_sum = 0.0;
    for (int k = out.first_level; k < out.last_level; ++k) {
        r.push_back(std::abs(neg[static_cast<std::size_t>(k)]) / std::abs(neg[static_cast<std::size_t>(k - 1)]));
        log_sum += std::log(r.back());
    }
    out.ratio = std::exp(log_sum / static_cast<double>(r.size()));
    for (double x : r) out.deviation = std::max(out.deviation, std::abs(x - out.ratio) / out.ratio);

    if (out.deviation > 0.10) {
        out.classification = GeometricClass::not_geometric;
    } else if (probes && probes->deepest_diverges) {
        out.classification = GeometricClass::thomas;
    } else if (!probes || probes->shallow_added > 0) {
        out.classification = GeometricClass::efimov;
    } else {
        out.classification = GeometricClass::not_geometric;
    }
    return out;
}

ScaleProbes scale_probes(const EffectiveOperator& op) {
    const auto base = eig_spectrum(op.entries).negative();
    if (base.empty()) return {};
    const auto inner = effective_operator(op.kind, op.C, op.d, extend_decade(op.grid, true), op.m);
    const auto outer = effective_operator(op.kind, op.C, op.d, extend_decade(op.grid, false), op.m);
    const auto deep = eig_spectrum(inner.entries).negative();
    const auto wide = eig_spectrum(outer.entries).negative();

    ScaleProbes p;
    p.deepest_factor = std::abs(deep.front()) / std::abs(base.front());
    p.deepest_diverges = p.deepest_factor > 2.0;
    p.shallow_added = static_cast<int>(wide.size()) - static_cast<int>(base.size());
    const auto nb = base.size();
    if (p.shallow_added > 0 && nb >= 1) p.added_ratio = std::abs(wide[nb]) / std::abs(wide[nb - 1]);
    return p;
}

}  // namespace zrange
