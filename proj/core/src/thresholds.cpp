#include "zrange/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zrange/potential.hpp"

namespace zrange {

namespace {

// Counting staircase interpolated linearly between crossings, so that it
// tracks the continuous level index instead of its integer part.
double staircase(const std::vector<double>& c, double C) {
    const auto k = c.size();
    if (k == 0) return 0.0;
    if (k == 1) return C >= c[0] ? 1.0 : 0.0;
    if (C < c[0]) return std::max(0.0, 1.0 + (C - c[0]) / (c[1] - c[0]));
    const auto it = std::upper_bound(c.begin(), c.end(), C);
    const auto i = static_cast<std::size_t>(it - c.begin());  // c[i-1] <= C
    if (i == k) return static_cast<double>(k) + (C - c[k - 1]) / (c[k - 1] - c[k - 2]);
    return static_cast<double>(i) + (C - c[i - 1]) / (c[i] - c[i - 1]);
}

double first_unit_gap(const std::vector<double>& coarse, const std::vector<double>& fine, double lo, double hi) {
    std::vector<double> pts{lo, hi};
    for (const auto* v : {&coarse, &fine})
        for (double x : *v)
            if (x > lo && x < hi) pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    auto gap = [&](double C) { return staircase(fine, C) - staircase(coarse, C); };
    double prev_c = pts.front(), prev_g = gap(prev_c);
    if (prev_g >= 1.0) return prev_c;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double g = gap(pts[i]);
        if (g >= 1.0) return prev_c + (1.0 - prev_g) * (pts[i] - prev_c) / (g - prev_g);
        prev_c = pts[i];
        prev_g = g;
    }
    return std::numeric_limits<double>::infinity();
}

double relative_change(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double a = v[v.size() - 2], b = v.back();
    if (!std::isfinite(a) && !std::isfinite(b)) return 0.0;
    return std::abs(b - a) / std::abs(b);
}

}  // namespace

int count_negative(const ThresholdReport& rep, double C, std::size_t grid) {
    if (grid >= rep.crossings.size()) throw InvalidArgument("count_negative: grid index out of range");
    const auto& c = rep.crossings[grid];
    return static_cast<int>(std::lower_bound(c.begin(), c.end(), C) - c.begin());
}

ThresholdReport find_thresholds(ImageKind kind, int d, std::pair<double, double> bracket,
                                const ThresholdOptions& opt) {
    if (kind == ImageKind::three_body_2d) throw InvalidArgument("find_thresholds: defined for the image operators");
    const auto [lo, hi] = bracket;
    if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("find_thresholds: bracket must satisfy 0 < lo < hi");
    if (opt.refinements < 2) throw InvalidArgument("find_thresholds: need at least 2 refinements");
    if (opt.points_per_decade < 10) throw InvalidArgument("find_thresholds: points_per_decade below 10");

    ThresholdReport rep;
    rep.kind = kind;
    rep.d = d;
    std::vector<double> logs;
    for (int j = 0; j <= opt.refinements; ++j) {
        const double r_min = opt.r_min * std::pow(10.0, -j);
        const double decades = std::log10(opt.r_max / r_min);
        const int n = static_cast<int>(std::lround(opt.points_per_decade * decades)) + 1;
        const auto grid = build_grid(n, opt.r_max, Spacing::logarithmic, r_min);
        rep.r_mins.push_back(r_min);
        rep.crossings.push_back(image_thresholds(kind, d, grid));
        logs.push_back(std::log(opt.r_max / r_min));
    }

    for (std::size_t j = 0; j + 1 < rep.crossings.size(); ++j) {
        const auto& a = rep.crossings[j];
        const auto& b = rep.crossings[j + 1];
        if (a.empty() || b.empty()) throw InvalidArgument("find_thresholds: no bound state on the grid ladder");
        if (kind == ImageKind::contact_image) {
            const double la = logs[j] * logs[j], lb = logs[j + 1] * logs[j + 1];
            rep.c0_estimates.push_back((lb * b[0] - la * a[0]) / (lb - la));
        } else {
            rep.c0_estimates.push_back(b[0]);
        }
        rep.c1_estimates.push_back(first_unit_gap(a, b, std::max(lo, b[0]), hi));
    }

    rep.C0 = rep.c0_estimates.back();
    rep.C1 = rep.c1_estimates.back();
    rep.accumulates = std::isfinite(rep.C1);
    if (!(rep.C0 > lo && rep.C0 < hi))
        throw InvalidArgument("find_thresholds: bracket does not straddle C0 (estimate " + std::to_string(rep.C0) + ")");
    if (kind == ImageKind::contact_image && !rep.accumulates)
        throw InvalidArgument("find_thresholds: bracket does not reach C1");
    rep.grid_refinement_drift = std::max(relative_change(rep.c0_estimates), relative_change(rep.c1_estimates));
    rep.converged = rep.grid_refinement_drift < 0.01;
    return rep;
}

}  // namespace zrange
