#include "zrange/three_body_2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "zrange/free_resolvent.hpp"
#include "zrange/effective_operator.hpp"
#include "zrange/potential.hpp"

namespace zrange {

namespace {

constexpr double pi = std::numbers::pi;
using Gauss = boost::math::quadrature::gauss<double, 20>;

// Average over the unit sphere, u = cos(2 chi) folded onto [0, 1] and then
// u = delta sinh(t), which flattens the 1/sqrt(u^2 + delta^2) peak at the
// regulated pole circle.
double sphere_average(double eta, int panels) {
    const double b = 1.0 + eta * eta;
    const double delta = std::sqrt(b * b - 1.0);
    const double t_max = std::asinh(1.0 / delta);
    const double pref = 2.0 * pi / (1.0 - 0.5 * b);
    // J(u) du/dt, J the exact theta integral.
    auto f = [&](double t) {
        const double u = delta * std::sinh(t);
        const double s2 = 1.0 - u * u;
        const double root = std::sqrt(u * u + delta * delta);
        return pref * (1.0 - root / (2.0 * std::sqrt(1.0 - 0.25 * s2)));
    };
    double sum = 0.0;
    const double h = t_max / panels;
    for (int k = 0; k < panels; ++k) sum += Gauss::integrate(f, k * h, (k + 1) * h);
    return sum / (2.0 * pi);
}

// int_0^inf J1(k r) / k dk, panels between the zeros of J1 and repeated
// averaging of the alternating partial sums.
double hankel_unit(double r) {
    constexpr int panels = 40, levels = 16;
    auto zero = [](int n) {
        if (n == 0) return 0.0;
        const double beta = (n + 0.25) * pi;
        return beta - 3.0 / (8.0 * beta);
    };
    auto f = [r](double k) { return k == 0.0 ? 0.5 * r : boost::math::cyl_bessel_j(1, k * r) / k; };
    std::vector<double> partial;
    double s = 0.0;
    for (int n = 0; n < panels; ++n) {
        s += Gauss::integrate(f, zero(n) / r, zero(n + 1) / r);
        partial.push_back(s);
    }
    std::vector<double> v(partial.end() - levels - 1, partial.end());
    while (v.size() > 1) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = 0.5 * (v[i] + v[i + 1]);
        v.pop_back();
    }
    return v.front();
}

double shallowest_outer_weight(const SpectrumReport& s, const RadialGrid& g) {
    if (s.count_negative == 0 || !s.eigenvectors) return 0.0;
    const auto col = s.eigenvectors->col(s.count_negative - 1);
    double w = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.nodes()[i] > 0.5 * g.r_max()) w += col(static_cast<Eigen::Index>(i)) * col(static_cast<Eigen::Index>(i));
    return w / col.squaredNorm();
}

}  // namespace

Kernel22 kernel22(const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    const double a = q1.squaredNorm() + q2.squaredNorm() + q1.dot(q2);
    const double p = (q1 + q2).squaredNorm();
    if (p == 0.0 || a == 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {1.0 / (a * p), false};
}

double kernel22_sphere_average(const AngularQuadrature& quad) {
    if (!(quad.eta > 0.0) || quad.eta >= 1.0) throw InvalidArgument("kernel22: eta must lie in (0, 1)");
    if (quad.panels < 1) throw InvalidArgument("kernel22: panels must be positive");
    return sphere_average(quad.eta, quad.panels);
}

HyperradialProfile hyperradial_reduce(const AngularQuadrature& quad, const std::vector<double>& r_list) {
    if (r_list.size() < 3) throw InvalidArgument("hyperradial_reduce: need at least 3 radii");
    for (double r : r_list)
        if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("hyperradial_reduce: radii must be positive");
    const auto [lo, hi] = std::minmax_element(r_list.begin(), r_list.end());
    if (*hi / *lo < 100.0 * (1.0 - 1e-12))
        throw InvalidArgument("hyperradial_reduce: radii must span at least two decades");

    HyperradialProfile out;
    out.angular_average = kernel22_sphere_average(quad);
    const double finer = kernel22_sphere_average({2 * quad.panels, quad.eta});
    out.refinement_change = std::abs(finer - out.angular_average) / std::abs(finer);
    out.converged = out.refinement_change < 1e-8;

    // Transform of A |k|^-3 in R^4 is A / (4 pi^2 r).
    const double c = out.angular_average / (4.0 * pi * pi);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double r : r_list) {
        const double f = -c * hankel_unit(r) / r;
        out.r.push_back(r);
        out.profile.push_back(f);
        if (!(f < 0.0)) throw NumericalError("hyperradial_reduce: profile lost its sign", f);
        const double x = std::log(r), y = std::log(-f);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(r_list.size());
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.prefactor = -std::exp((sy - out.exponent * sx) / n);
    return out;
}

MassSweepReport mass_sweep_2d(const std::vector<double>& masses, double c, const RadialGrid& grid) {
    if (masses.empty()) throw InvalidArgument("mass_sweep_2d: empty mass list");
    if (!(c > 0.0)) throw InvalidArgument("mass_sweep_2d: c must be positive");
    for (std::size_t k = 0; k < masses.size(); ++k) {
        if (!(masses[k] > 0.0)) throw InvalidArgument("mass_sweep_2d: masses must be positive");
        if (k > 0 && !(masses[k] > masses[k - 1])) throw InvalidArgument("mass_sweep_2d: masses must increase");
    }
    MassSweepReport rep;
    rep.masses = masses;
    rep.c = c;
    for (double m : masses) {
        const auto op = effective_operator(ImageKind::three_body_2d, c, 4, grid, m);
        auto s = eig_spectrum(op.entries, true);

        // Same problem at unit mass on the dilated grid.
        const auto g1 = grid.dilated(m);
        Eigen::MatrixXd h1 = kinetic_matrix(g1, 4, 1.0);
        h1.diagonal() -= c * image_potential_diagonal(ImageKind::three_body_2d, g1, 4);
        const auto s1 = eig_spectrum(h1);
        // Levels closer to zero than the eigensolver's backward error carry
        // no digits and are left out of the comparison.
        const double floor = 10.0 * static_cast<double>(grid.size()) * std::numeric_limits<double>::epsilon() *
                             std::max(std::abs(s.eigenvalues.front()), std::abs(s.eigenvalues.back()));
        int compared = 0;
        for (int k = 0; k < s.count_negative; ++k) {
            const double e = s.eigenvalues[static_cast<std::size_t>(k)];
            if (std::abs(e) < floor) continue;
            const double e1 = m * s1.eigenvalues[static_cast<std::size_t>(k)];
            rep.dilation_error = std::max(rep.dilation_error, std::abs(e1 - e) / std::abs(e));
            ++compared;
        }
        rep.dilation_levels.push_back(compared);

        rep.counts.push_back(s.count_negative);
        rep.max_abs_energy.push_back(s.count_negative > 0 ? std::abs(s.eigenvalues.front()) : 0.0);
        rep.shallowest_resolved.push_back(shallowest_outer_weight(s, grid) < 0.01);
        s.eigenvectors.reset();
        rep.spectra.push_back(std::move(s));
    }
    for (std::size_t k = 1; k < masses.size(); ++k) {
        if (rep.counts[k] < rep.counts[k - 1]) rep.count_nondecreasing = false;
        if (rep.max_abs_energy[k] > rep.max_abs_energy[k - 1]) rep.max_abs_nonincreasing = false;
    }
    return rep;
}

}  // namespace zrange
