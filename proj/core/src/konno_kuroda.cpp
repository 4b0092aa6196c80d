#include "zrange/konno_kuroda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "zrange/birman_schwinger.hpp"
#include "zrange/free_resolvent.hpp"
#include "zrange/linalg.hpp"

namespace zrange {

namespace {

void check_inputs(const Eigen::VectorXd& v, const Eigen::MatrixXd& h0, double z) {
    if (v.size() != h0.rows()) throw InvalidArgument("potential and H0 sizes differ");
    if (!(z > 0.0)) throw InvalidArgument("resolvent difference needs z > 0");
}

void check_epsilons(const std::vector<double>& eps) {
    if (eps.empty()) throw InvalidArgument("epsilon list is empty");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw InvalidArgument("epsilon values must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw InvalidArgument("epsilon list must be strictly decreasing");
    }
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(x.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Breakpoints that keep the adaptive rule aligned with each term's scale.
void add_cuts(const ScaledPotential& v, double limit, std::vector<double>& cuts) {
    const double l = v.length_scale() * v.base().range;
    for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        if (f * l < limit) cuts.push_back(f * l);
    }
}

}  // namespace

Eigen::MatrixXd konno_kuroda_matrix(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z,
                                    double* min_singular) {
    check_inputs(v_diag, h0, z);
    for (Eigen::Index i = 0; i < v_diag.size(); ++i) {
        if (!(v_diag(i) >= 0.0)) throw InvalidArgument("Konno-Kuroda assembly needs V >= 0");
    }
    const Eigen::MatrixXd r0 = resolvent_matrix(h0, z);
    const Eigen::VectorXd b = v_diag.cwiseSqrt();
    const Eigen::MatrixXd br0 = b.asDiagonal() * r0;
    Eigen::MatrixXd a = -(br0 * b.asDiagonal());
    a = 0.5 * (a + a.transpose()).eval();
    a.diagonal().array() += 1.0;
    const double smin = symmetric_eigen(a, false).values.cwiseAbs().minCoeff();
    if (min_singular) *min_singular = smin;
    if (smin < 1e-10)
        throw NumericalError("1 - Q(z) is singular at z = " + std::to_string(z) + " (smallest singular value " +
                                 std::to_string(smin) + "); H0 - V has an eigenvalue at -z",
                             smin);
    const Eigen::MatrixXd x = a.partialPivLu().solve(br0);
    Eigen::MatrixXd out = br0.transpose() * x;
    return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd direct_difference_matrix(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z) {
    check_inputs(v_diag, h0, z);
    Eigen::MatrixXd h = h0;
    h.diagonal() -= v_diag;
    return resolvent_matrix(h, z) - resolvent_matrix(h0, z);
}

ResolventDifference assemble_resolvent_diff(const ScaledPotential& v, double z, const RadialGrid& grid, int d,
                                            double m) {
    const auto h0 = discretize_h0(grid, d, m);
    ResolventDifference out;
    out.z = z;
    out.assembly = Assembly::konno_kuroda;
    out.matrix = OperatorMatrix(konno_kuroda_matrix(potential_diagonal(v, grid, d), h0.entries, z, &out.min_singular),
                                grid, m, d, "R-R0");
    return out;
}

ResolventDifference direct_resolvent_diff(const ScaledPotential& v, double z, const RadialGrid& grid, int d,
                                          double m) {
    const auto h0 = discretize_h0(grid, d, m);
    ResolventDifference out;
    out.z = z;
    out.assembly = Assembly::direct;
    out.matrix =
        OperatorMatrix(direct_difference_matrix(potential_diagonal(v, grid, d), h0.entries, z), grid, m, d, "R-R0");
    return out;
}

Eigen::MatrixXd born_term(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z) {
    check_inputs(v_diag, h0, z);
    const Eigen::MatrixXd r0 = resolvent_matrix(h0, z);
    Eigen::MatrixXd out = r0 * v_diag.asDiagonal() * r0;
    return 0.5 * (out + out.transpose());
}

std::vector<double> bound_states_by_sweep(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z_floor,
                                          double rel_tol) {
    if (!(z_floor > 0.0)) throw InvalidArgument("bound_states_by_sweep: z_floor must be positive");
    auto eigs = [&](double z) { return symmetric_eigen(bs_matrix(v_diag, h0, z), false).values; };
    const Eigen::VectorXd at_floor = eigs(z_floor);
    const auto n = at_floor.size();
    const int count = static_cast<int>((at_floor.array() > 1.0).count());
    // H0 >= 0, so no level lies below -max(V).
    const double z_top = 1.1 * v_diag.maxCoeff() + 1.0;

    std::vector<double> out;
    for (int k = 0; k < count; ++k) {
        auto f = [&](double z) { return eigs(z)(n - 1 - k) - 1.0; };
        double lo = z_floor;
        double hi = k == 0 ? z_top : out.back() * (1.0 + 1e-9);
        std::uintmax_t iters = 200;
        auto tol = [&](double a, double b) { return std::abs(b - a) <= rel_tol * std::max(std::abs(a), std::abs(b)); };
        const double flo = f(lo), fhi = f(hi);
        if (!(flo > 0.0)) break;
        if (!(fhi < 0.0)) {
            // Degenerate level: the previous crossing repeats.
            out.push_back(out.back());
            continue;
        }
        const auto root = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
        out.push_back(0.5 * (root.first + root.second));
    }
    return out;
}

DefectReport cross_term_norm(const ScaledFamily& v1, const std::vector<ScaledFamily>& u,
                             const std::vector<double>& epsilons) {
    check_epsilons(epsilons);
    DefectReport rep;
    rep.epsilons = epsilons;
    const int d = v1.dimension;
    const double area = sphere_area(d);
    for (double e : epsilons) {
        const auto a = v1.at(e);
        std::vector<ScaledPotential> us;
        for (const auto& f : u) us.push_back(f.at(e));
        double limit = a.support_radius();
        std::vector<double> cuts;
        add_cuts(a, limit, cuts);
        for (const auto& w : us) add_cuts(w, limit, cuts);
        auto integrand = [&](double r) {
            double s = 0.0;
            for (const auto& w : us) s += w(r);
            return std::sqrt(a(r)) * std::sqrt(s) * std::pow(r, d - 1);
        };
        const auto q = radial_quadrature(integrand, 0.0, limit, cuts);
        rep.values.push_back(area * q.value);
        rep.refinement_change.push_back(q.refinement_change);
        if (q.refinement_change > 0.01) rep.converged = false;
    }
    rep.fitted_exponent = fit_exponent(rep.epsilons, rep.values);
    return rep;
}

DefectReport additivity_defect(const ScaledFamily& v2, const ScaledFamily& v3, const std::vector<double>& epsilons) {
    check_epsilons(epsilons);
    DefectReport rep;
    rep.epsilons = epsilons;
    const int d = v2.dimension;
    const double area = sphere_area(d);
    for (double e : epsilons) {
        const auto a = v2.at(e);
        const auto b = v3.at(e);
        const double limit = std::min(a.support_radius(), b.support_radius());
        std::vector<double> cuts;
        add_cuts(a, limit, cuts);
        add_cuts(b, limit, cuts);
        auto integrand = [&](double r) {
            const double va = a(r), vb = b(r);
            const double s = std::sqrt(va) + std::sqrt(vb);
            return std::abs(s * s - va - vb) * std::pow(r, d - 1);
        };
        const auto q = radial_quadrature(integrand, 0.0, limit, cuts);
        rep.values.push_back(area * q.value);
        rep.refinement_change.push_back(q.refinement_change);
        if (q.refinement_change > 0.01) rep.converged = false;
    }
    rep.fitted_exponent = fit_exponent(rep.epsilons, rep.values);
    return rep;
}

IndependenceReport independence_spectrum_check(const IndependenceInputs& in, double eps, double z,
                                               const RadialGrid& grid, int levels, double m) {
    if (!(eps > 0.0)) throw InvalidArgument("independence check: epsilon must be positive");
    if (!(z > 0.0)) throw InvalidArgument("independence check: z must be positive");
    if (levels < 1 || static_cast<std::size_t>(levels) > grid.size())
        throw InvalidArgument("independence check: levels out of range");
    const Eigen::MatrixXd h0 = discretize_h0(grid, 3, m).entries;
    const auto n = h0.rows();

    std::vector<Eigen::VectorXd> terms;
    for (const auto* f : {&in.v1, &in.v2, &in.v3}) {
        if (*f) terms.push_back(potential_diagonal(f->value().at(eps), grid, 3));
    }

    Eigen::MatrixXd h = h0;
    Eigen::MatrixXd pred = resolvent_matrix(h0, z);
    for (const auto& t : terms) {
        h.diagonal() -= t;
        pred += konno_kuroda_matrix(t, h0, z);
    }

    IndependenceReport rep;
    rep.epsilon = eps;
    rep.z = z;
    const auto act = symmetric_eigen(h, false).values;
    const auto rho = symmetric_eigen(0.5 * (pred + pred.transpose()), false).values;
    std::vector<double> e;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (rho(i) != 0.0) e.push_back(1.0 / rho(i) - z);
    }
    std::sort(e.begin(), e.end());
    for (int i = 0; i < levels; ++i) {
        rep.actual.push_back(act(i));
        rep.predicted.push_back(e[static_cast<std::size_t>(i)]);
        rep.discrepancy = std::max(rep.discrepancy, std::abs(act(i) - e[static_cast<std::size_t>(i)]));
    }
    return rep;
}

}  // namespace zrange
