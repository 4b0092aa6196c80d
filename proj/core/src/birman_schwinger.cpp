#include "zrange/birman_schwinger.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zrange/free_resolvent.hpp"
#include "zrange/linalg.hpp"

namespace zrange {

namespace {

void require_nonnegative(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v(i) >= 0.0))
            throw InvalidArgument("Birman-Schwinger operator needs V >= 0 (entry " + std::to_string(i) + " is " +
                                  std::to_string(v(i)) + ")");
    }
}

// Two largest eigenvalues of Q(z).
std::pair<double, double> top_two(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z) {
    const auto ev = symmetric_eigen(bs_matrix(v_diag, h0, z), false).values;
    const auto n = ev.size();
    return {ev(n - 1), n > 1 ? ev(n - 2) : 0.0};
}

double richardson(double f1, double f2, double f4) { return (8.0 * f1 - 6.0 * f2 + f4) / 3.0; }

}  // namespace

Eigen::MatrixXd bs_matrix(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z) {
    if (v_diag.size() != h0.rows()) throw InvalidArgument("bs_matrix: potential and H0 sizes differ");
    if (!(z >= 0.0)) throw InvalidArgument("bs_matrix: z must be nonnegative");
    require_nonnegative(v_diag);
    const Eigen::VectorXd b = v_diag.cwiseSqrt();
    Eigen::MatrixXd q = b.asDiagonal() * resolvent_matrix(h0, z) * b.asDiagonal();
    return 0.5 * (q + q.transpose());
}

OperatorMatrix bs_operator(const ScaledPotential& v, const RadialGrid& grid, double z, int d, double m) {
    if (!(z >= z_min * (1.0 - 1e-12)))
        throw InvalidArgument("bs_operator: z = " + std::to_string(z) + " is below z_min = 1e-8");
    const auto h0 = discretize_h0(grid, d, m);
    return OperatorMatrix(bs_matrix(potential_diagonal(v, grid, d), h0.entries, z), grid, m, d, "Q");
}

double bs_top_eigenvalue_at_zero(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z) {
    const double f1 = top_two(v_diag, h0, z).first;
    const double f2 = top_two(v_diag, h0, 2.0 * z).first;
    const double f4 = top_two(v_diag, h0, 4.0 * z).first;
    return richardson(f1, f2, f4);
}

BoundaryFit boundary_fit(const GridFunction& psi, double support_radius) {
    if (!(support_radius > 0.0)) throw InvalidArgument("boundary_fit: support radius must be positive");
    const auto& g = psi.grid;
    const double a = 2.0 * support_radius;
    const double b = 0.5 * g.r_max();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.node(i) >= a && g.node(i) <= b) idx.push_back(i);
    }
    if (idx.size() < 3)
        throw InvalidArgument("boundary_fit: window [" + std::to_string(a) + ", " + std::to_string(b) +
                              "] holds fewer than 3 nodes");
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd A(k, 2);
    Eigen::VectorXd y(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double r = g.node(idx[i]);
        A(i, 0) = 1.0 / r;
        A(i, 1) = 1.0;
        y(i) = psi.values(static_cast<Eigen::Index>(idx[i]));
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    BoundaryFit fit;
    fit.C = c(0);
    fit.D = c(1);
    fit.points = static_cast<int>(k);
    const double scale = y.norm();
    fit.residual = scale > 0.0 ? (A * c - y).norm() / scale : 0.0;
    fit.asymptotic = fit.residual <= 1e-3;
    return fit;
}

ResonanceReport find_resonance_coupling(const BasePotential& v, const ScalingLaw& law,
                                        std::pair<double, double> bracket, const ResonanceOptions& opt) {
    if (law.dimension != 3) throw InvalidArgument("find_resonance_coupling: only d = 3 is supported");
    auto [lo, hi] = bracket;
    if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("find_resonance_coupling: bracket must satisfy 0 < lo < hi");
    if (!(opt.tolerance > 0.0)) throw InvalidArgument("find_resonance_coupling: tolerance must be positive");

    const auto unit = scale_potential(v.with_strength(1.0), law);
    const double support = unit.support_radius();
    // Outer Neumann end on the support edge: the zero-energy kernel of H0 is
    // then exactly 2m min(r, r'), the half-line one.
    const auto grid = build_support_grid(support, opt.n);
    const auto h0 = discretize_h0(grid, 3, opt.m).entries;
    const Eigen::VectorXd vd = potential_diagonal(unit, grid, 3);

    const auto [t1, s1] = top_two(vd, h0, z_min);
    const double mu = richardson(t1, top_two(vd, h0, 2.0 * z_min).first, top_two(vd, h0, 4.0 * z_min).first);

    auto f = [&](double lam) { return lam * mu - 1.0; };
    if (!(f(lo) < 0.0 && f(hi) > 0.0))
        throw InvalidArgument("find_resonance_coupling: no sign change of (top eigenvalue - 1) on [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    while (hi - lo > opt.tolerance * hi) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }

    ResonanceReport rep;
    rep.lambda_critical = 0.5 * (lo + hi);
    rep.bs_top_eigenvalue = rep.lambda_critical * mu;
    rep.top_gap = t1 > 0.0 ? (t1 - s1) / t1 : 0.0;
    rep.simple = rep.top_gap > 1e-6;

    // Zero-energy solution u = R0(0) B phi, evaluated through the kernel
    // 2m min(r, r') so that it extends past the support.
    const auto eig = symmetric_eigen(bs_matrix(vd, h0, z_min), true);
    const Eigen::VectorXd phi = eig.vectors.col(eig.vectors.cols() - 1);
    const auto n = grid.size();
    Eigen::VectorXd src(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        src(jj) = std::sqrt(grid.weight(j) * vd(jj)) * phi(jj);
    }
    const auto out = build_support_grid(support, opt.n, 40.0 * support, 400, OuterBoundary::dirichlet);
    Eigen::VectorXd psi(static_cast<Eigen::Index>(out.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = out.node(i);
        double u = 0.0;
        for (std::size_t j = 0; j < n; ++j) u += std::min(r, grid.node(j)) * src(static_cast<Eigen::Index>(j));
        psi(static_cast<Eigen::Index>(i)) = 2.0 * opt.m * u / r;
    }
    // <V, psi> = 4 pi int V psi r^2 dr over the support.
    double pair = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        pair += rep.lambda_critical * vd(jj) * psi(jj) * grid.node(j) * grid.node(j) * grid.weight(j);
    }
    pair *= 4.0 * std::numbers::pi;
    if (!(std::abs(pair) > 0.0)) throw NumericalError("find_resonance_coupling: <V, psi> vanishes", pair);
    psi /= pair;
    rep.resonance_profile = GridFunction(out, psi);

    const auto fit = boundary_fit(rep.resonance_profile, support);
    rep.boundary_C = fit.C;
    rep.boundary_D = fit.D;
    rep.fit_residual = fit.residual;
    return rep;
}

TwoResonanceModel::TwoResonanceModel(const ScaledPotential& v, const TwoResonanceOptions& opt) {
    if (v.dimension() != 3) throw InvalidArgument("two-resonance model is defined for d = 3");
    if (!(opt.box_factor > 2.0)) throw InvalidArgument("two-resonance model: box_factor must exceed 2");
    const double support = v.support_radius();
    grid_ = build_support_grid(support, opt.n_inner, opt.box_factor * support, opt.n_outer, OuterBoundary::dirichlet);
    const auto eig = symmetric_eigen(discretize_h0(grid_, 3, opt.m).entries, true);
    e_ = eig.values;
    u_ = eig.vectors;
    e0_ = e_(0);
    chi_ = u_.col(0);

    const Eigen::VectorXd vd = potential_diagonal(v, grid_, 3);
    require_nonnegative(vd);
    // Pair operator q(e0) = sqrt(V) (h + e0)^(-1) sqrt(V).
    Eigen::VectorXd b = vd.cwiseSqrt();
    const Eigen::MatrixXd ub = u_.transpose() * b.asDiagonal();
    Eigen::MatrixXd q = ub.transpose() * (e_.array() + e0_).inverse().matrix().asDiagonal() * ub;
    const auto qe = symmetric_eigen(0.5 * (q + q.transpose()), true);
    const double mu = qe.values(qe.values.size() - 1);
    if (!(mu > 0.0)) throw InvalidArgument("two-resonance model: potential vanishes on the grid");
    coupling_ = 1.0 / mu;
    shift_ = std::abs(coupling_ - 1.0);
    sqrt_v_ = std::sqrt(coupling_) * b;
    phi_ = qe.vectors.col(qe.vectors.cols() - 1);
    if (phi_.sum() < 0.0) phi_ = -phi_;
}

TwoResonanceMatrix TwoResonanceModel::at(double z) const {
    if (!(z >= 0.0)) throw InvalidArgument("two-resonance matrix: z must be nonnegative");
    TwoResonanceMatrix out;
    out.z = z;
    const Eigen::VectorXd s = sqrt_v_.cwiseProduct(phi_);
    const Eigen::VectorXd w = u_.transpose() * s;
    const double self = (w.array().square() / (e_.array() + z + e0_)).sum();
    const double d = 1.0 - self;

    // <s x chi, (h x 1 + 1 x h + z)^(-1) chi x s> in the product eigenbasis.
    const Eigen::VectorXd c = u_.transpose() * chi_;
    const Eigen::MatrixXd a1 = w * c.transpose();
    const Eigen::MatrixXd a2 = c * w.transpose();
    double o = 0.0;
    for (Eigen::Index i = 0; i < e_.size(); ++i)
        for (Eigen::Index j = 0; j < e_.size(); ++j) o += a1(i, j) * a2(i, j) / (e_(i) + e_(j) + z);

    out.diagonal = Eigen::Vector2d(d, d);
    out.off_diagonal = o;
    out.entries << d, o, o, d;
    out.determinant = d * d - o * o;
    const double l1 = std::abs(d + o), l2 = std::abs(d - o);
    const double small = std::min(l1, l2);
    out.condition = small > 0.0 ? std::max(l1, l2) / small : std::numeric_limits<double>::infinity();
    return out;
}

TwoResonanceMatrix two_resonance_matrix(const ScaledPotential& v, double z, const TwoResonanceOptions& opt) {
    return TwoResonanceModel(v, opt).at(z);
}

}  // namespace zrange
