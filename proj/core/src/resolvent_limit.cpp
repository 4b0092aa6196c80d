#include "zrange/resolvent_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "zrange/free_resolvent.hpp"
#include "zrange/linalg.hpp"

namespace zrange {

namespace {

constexpr Eigen::Index kDenseCap = 4096;

Eigen::MatrixXd kron_sum(const Eigen::MatrixXd& a, double ca, const Eigen::MatrixXd& b, double cb) {
    const auto nx = a.rows(), ny = b.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx * ny, nx * ny);
    for (Eigen::Index j = 0; j < ny; ++j) out.block(j * nx, j * nx, nx, nx) += ca * a;
    for (Eigen::Index j = 0; j < ny; ++j)
        for (Eigen::Index l = 0; l < ny; ++l) {
            if (b(j, l) == 0.0) continue;
            out.block(j * nx, l * nx, nx, nx).diagonal().array() += cb * b(j, l);
        }
    return out;
}

Eigen::MatrixXd with_first_cell_shift(Eigen::MatrixXd h, double c) {
    h(0, 0) -= c;
    return h;
}

}  // namespace

Eigen::MatrixXd ScaledFreeHamiltonian::dense() const {
    if (size() > kDenseCap) throw InvalidArgument("dense product operator above 4096 rows");
    return kron_sum(x_block, x_coefficient, y_block, y_coefficient);
}

ScaledFreeHamiltonian scaled_h0(double eps, double m, const RadialGrid& grid_x, const RadialGrid& grid_y,
                                std::int64_t cap) {
    if (!(eps > 0.0) || eps > 1.0) throw InvalidArgument("scaled_h0: eps must lie in (0, 1]");
    if (!(m > 0.0)) throw InvalidArgument("scaled_h0: mass must be positive");
    const auto dim = static_cast<std::int64_t>(grid_x.size()) * static_cast<std::int64_t>(grid_y.size());
    if (dim > cap)
        throw InvalidArgument("scaled_h0: product dimension " + std::to_string(dim) + " exceeds cap " +
                              std::to_string(cap));
    const double k = (m + 1.0) / (2.0 * m);
    ScaledFreeHamiltonian h;
    h.eps = eps;
    h.m = m;
    h.x_block = kinetic_matrix(grid_x, 3, k);
    h.y_block = kinetic_matrix(grid_y, 3, k);
    h.x_coefficient = 1.0 / (eps * eps);
    h.y_coefficient = eps * eps;
    h.cross_coefficient = eps / m;
    return h;
}

ProductResolvent::ProductResolvent(const ProductOperator& h, double z) {
    const auto ex = symmetric_eigen(h.hx, true);
    const auto ey = symmetric_eigen(h.hy, true);
    ux_ = ex.vectors;
    uy_ = ey.vectors;
    denom_.resize(ex.values.size(), ey.values.size());
    for (Eigen::Index i = 0; i < ex.values.size(); ++i)
        for (Eigen::Index j = 0; j < ey.values.size(); ++j) {
            const double d = ex.values(i) + ey.values(j) + z;
            if (!(d > 0.0)) throw NumericalError("product resolvent: H + z is not positive", d);
            denom_(i, j) = 1.0 / d;
        }
}

Eigen::MatrixXd ProductResolvent::apply(const Eigen::MatrixXd& f) const {
    return ux_ * (ux_.transpose() * f * uy_).cwiseProduct(denom_) * uy_.transpose();
}

LimitResolvent::LimitResolvent(const Eigen::MatrixXd& hx, const Eigen::MatrixXd& hy, double c_x, double c_y,
                               double z)
    : h0_{hx, hy},
      h_inf_{with_first_cell_shift(hx, c_x), with_first_cell_shift(hy, c_y)},
      z_(z),
      cx_(c_x),
      cy_(c_y) {
    if (!(z > 0.0)) throw InvalidArgument("limit resolvent needs z > 0");
    if (!(c_x >= 0.0) || !(c_y >= 0.0)) throw InvalidArgument("point interaction strength must be nonnegative");
    const auto ex = symmetric_eigen(hx, true);
    const auto ey = symmetric_eigen(hy, true);
    ux_ = ex.vectors;
    uy_ = ey.vectors;
    ex_ = ex.values;
    ey_ = ey.values;
    const auto nx = ex_.size(), ny = ey_.size();

    // Q_11 is diagonal in the spectator basis: one denominator per y-mode.
    Eigen::VectorXd q1(ny), q2(nx);
    for (Eigen::Index b = 0; b < ny; ++b)
        q1(b) = c_x * (ux_.row(0).transpose().array().square() / (ex_.array() + ey_(b) + z)).sum();
    for (Eigen::Index a = 0; a < nx; ++a)
        q2(a) = c_y * (uy_.row(0).transpose().array().square() / (ey_.array() + ex_(a) + z)).sum();
    d1_ = (1.0 - q1.array()).matrix();
    const Eigen::MatrixXd q11 = uy_ * q1.asDiagonal() * uy_.transpose();
    const Eigen::MatrixXd q22 = ux_ * q2.asDiagonal() * ux_.transpose();

    Eigen::MatrixXd mba(ny, nx);
    for (Eigen::Index b = 0; b < ny; ++b)
        for (Eigen::Index a = 0; a < nx; ++a) mba(b, a) = uy_(0, b) * ux_(0, a) / (ex_(a) + ey_(b) + z);
    const Eigen::MatrixXd q12 = std::sqrt(c_x * c_y) * uy_ * mba * ux_.transpose();

    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(ny + nx, ny + nx);
    a.topLeftCorner(ny, ny) -= q11;
    a.topRightCorner(ny, nx) -= q12;
    a.bottomLeftCorner(nx, ny) -= q12.transpose();
    a.bottomRightCorner(nx, nx) -= q22;
    a = 0.5 * (a + a.transpose()).eval();
    const double smin = symmetric_eigen(a, false).values.cwiseAbs().minCoeff();
    if (smin < 1e-12) throw NumericalError("limit resolvent: 1 - Q is singular", smin);
    k_ = a.inverse();
    k11_ = uy_ * d1_.cwiseInverse().asDiagonal() * uy_.transpose();
    k22_ = ux_ * (1.0 - q2.array()).inverse().matrix().asDiagonal() * ux_.transpose();
}

Eigen::MatrixXd LimitResolvent::apply_free(const Eigen::MatrixXd& f) const {
    Eigen::MatrixXd g = ux_.transpose() * f * uy_;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) /= ex_(i) + ey_(j) + z_;
    return ux_ * g * uy_.transpose();
}

Eigen::MatrixXd LimitResolvent::apply(const Eigen::MatrixXd& f) const {
    const auto nx = ex_.size(), ny = ey_.size();
    const Eigen::MatrixXd g = apply_free(f);
    Eigen::VectorXd s(ny + nx);
    s.head(ny) = std::sqrt(cx_) * g.row(0).transpose();
    s.tail(nx) = std::sqrt(cy_) * g.col(0);
    const Eigen::VectorXd t = k_ * s;
    Eigen::MatrixXd src = Eigen::MatrixXd::Zero(nx, ny);
    src.row(0) += std::sqrt(cx_) * t.head(ny).transpose();
    src.col(0) += std::sqrt(cy_) * t.tail(nx);
    return apply_free(src);
}

Eigen::MatrixXd LimitResolvent::apply_channel(const Eigen::MatrixXd& f, int channel) const {
    const auto nx = ex_.size(), ny = ey_.size();
    const Eigen::MatrixXd g = apply_free(f);
    Eigen::MatrixXd src = Eigen::MatrixXd::Zero(nx, ny);
    if (channel == 1) {
        src.row(0) = cx_ * (k11_ * g.row(0).transpose()).transpose();
    } else if (channel == 2) {
        src.col(0) = cy_ * (k22_ * g.col(0));
    } else {
        throw InvalidArgument("channel must be 1 or 2");
    }
    return apply_free(src);
}

Eigen::MatrixXd LimitResolvent::dense() const {
    const auto nx = ex_.size(), ny = ey_.size();
    if (nx * ny > kDenseCap) throw InvalidArgument("dense limit operator above 4096 rows");
    Eigen::MatrixXd out(nx * ny, nx * ny);
    for (Eigen::Index j = 0; j < ny; ++j)
        for (Eigen::Index i = 0; i < nx; ++i) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(nx, ny);
            e(i, j) = 1.0;
            out.col(i + nx * j) = apply(e).reshaped();
        }
    return out;
}

double point_interaction_strength(const RadialGrid& grid, double m) {
    if (!(m > 0.0)) throw InvalidArgument("mass must be positive");
    const double coef = 1.0 / (2.0 * m);
    return coef / ((grid.node(0) - grid.inner_wall()) * grid.weight(0));
}

LimitResolvent limit_w(double z, const GridFunction& psi, const ScaledPotential& v, const RadialGrid& grid_x,
                       const RadialGrid& grid_y, double m) {
    if (!(z > 0.0)) throw InvalidArgument("limit_w: z must be positive");
    const auto& g = psi.grid;
    const Eigen::VectorXd vd = potential_diagonal(v, g, 3);
    double pair = 0.0, root = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double r2w = g.node(i) * g.node(i) * g.weight(i);
        pair += vd(ii) * psi.values(ii) * r2w;
        root += std::sqrt(v(g.node(i))) * psi.values(ii) * r2w;
    }
    pair *= 4.0 * std::numbers::pi;
    root *= 4.0 * std::numbers::pi;
    if (std::abs(pair - 1.0) > 1e-3)
        throw InvalidArgument("limit_w: resonance not normalized (<V, psi> = " + std::to_string(pair) + ")");
    if (std::abs(root) < 1e-12) throw InvalidArgument("limit_w: <sqrt(V), psi> vanishes");

    const Eigen::MatrixXd hx = discretize_h0(grid_x, 3, m).entries;
    const Eigen::MatrixXd hy = discretize_h0(grid_y, 3, m).entries;
    LimitResolvent w(hx, hy, point_interaction_strength(grid_x, m), point_interaction_strength(grid_y, m), z);
    w.denominator_constant = std::sqrt(z) / (4.0 * std::numbers::pi) * root * root;
    return w;
}

LimitIdentityReport verify_limit_identity(const LimitResolvent& w, const ProductOperator& h, double z,
                                          const std::vector<Eigen::MatrixXd>& fs) {
    LimitIdentityReport rep;
    for (const auto& f : fs) {
        const Eigen::MatrixXd g = h.apply(f) + z * f;
        const Eigen::MatrixXd back = w.apply_free(g) + w.apply(g);
        const double nf = f.norm();
        const double r = nf > 0.0 ? (back - f).norm() / nf : (back - f).norm();
        rep.residuals.push_back(r);
        rep.max_residual = std::max(rep.max_residual, r);
    }
    return rep;
}

double discrete_resonance_coupling(const ScaledPotential& unit, const RadialGrid& grid, double m) {
    const Eigen::VectorXd vd = potential_diagonal(unit, grid, 3);
    Eigen::Index last = -1;
    for (Eigen::Index i = 0; i < vd.size(); ++i)
        if (vd(i) > 0.0) last = i;
    if (last < 0) throw InvalidArgument("discrete_resonance_coupling: potential vanishes on the grid");
    if (last + 1 >= vd.size()) throw InvalidArgument("discrete_resonance_coupling: support reaches the grid end");
    const double coef = 1.0 / (2.0 * m);

    // Flux c (u_{i+1} - u_i) past the support for the zero-energy solution
    // started at the inner wall.
    auto slope = [&](double lam) {
        double u = 1.0;
        double flux = coef / (grid.node(0) - grid.inner_wall()) * u;
        for (Eigen::Index i = 0; i <= last; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            flux -= grid.weight(ii) * lam * vd(i) * u;
            const double c = coef / (grid.node(ii + 1) - grid.node(ii));
            u += flux / c;
            const double scale = std::max(1.0, std::abs(u));
            u /= scale;
            flux /= scale;
        }
        return flux;
    };

    double lo = 1e-3, hi = lo;
    double f_hi = slope(hi);
    if (!(f_hi > 0.0)) throw NumericalError("discrete_resonance_coupling: no resonance above 1e-3", f_hi);
    int guard = 0;
    while (f_hi > 0.0) {
        lo = hi;
        hi *= 1.02;
        f_hi = slope(hi);
        if (++guard > 2000) throw NumericalError("discrete_resonance_coupling: no resonance found", hi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

FourTermAssembly four_term_assembly(const Eigen::VectorXd& vx, const Eigen::VectorXd& vy, const Eigen::MatrixXd& hx,
                                    const Eigen::MatrixXd& hy, double z) {
    const auto nx = hx.rows(), ny = hy.rows();
    const auto n = nx * ny;
    if (n > kDenseCap / 2) throw InvalidArgument("four_term_assembly: product grid too large for dense assembly");
    const Eigen::MatrixXd r0 = resolvent_matrix(kron_sum(hx, 1.0, hy, 1.0), z);
    Eigen::VectorXd b1(n), b2(n);
    for (Eigen::Index j = 0; j < ny; ++j)
        for (Eigen::Index i = 0; i < nx; ++i) {
            b1(i + nx * j) = std::sqrt(vx(i));
            b2(i + nx * j) = std::sqrt(vy(j));
        }
    Eigen::MatrixXd q(2 * n, 2 * n);
    q.topLeftCorner(n, n) = b1.asDiagonal() * r0 * b1.asDiagonal();
    q.topRightCorner(n, n) = b1.asDiagonal() * r0 * b2.asDiagonal();
    q.bottomLeftCorner(n, n) = b2.asDiagonal() * r0 * b1.asDiagonal();
    q.bottomRightCorner(n, n) = b2.asDiagonal() * r0 * b2.asDiagonal();
    const Eigen::MatrixXd k = (Eigen::MatrixXd::Identity(2 * n, 2 * n) - q).partialPivLu().inverse();
    const Eigen::MatrixXd l1 = r0 * b1.asDiagonal();
    const Eigen::MatrixXd l2 = r0 * b2.asDiagonal();
    FourTermAssembly out;
    out.t11 = l1 * k.topLeftCorner(n, n) * l1.transpose();
    out.t12 = l1 * k.topRightCorner(n, n) * l2.transpose();
    out.t21 = l2 * k.bottomLeftCorner(n, n) * l1.transpose();
    out.t22 = l2 * k.bottomRightCorner(n, n) * l2.transpose();
    return out;
}

ConvergenceReport convergence_study(const BasePotential& v, double z, const std::vector<double>& epsilons,
                                    const std::vector<Eigen::MatrixXd>& fs, const RadialGrid& grid, double m) {
    if (epsilons.empty() || fs.empty()) throw InvalidArgument("convergence_study: empty epsilon or test list");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1])) throw InvalidArgument("convergence_study: epsilons must decrease");
    const Eigen::MatrixXd h = discretize_h0(grid, 3, m).entries;
    const LimitResolvent w(h, h, point_interaction_strength(grid, m), point_interaction_strength(grid, m), z);
    const ProductResolvent r0({h, h}, z);

    std::vector<Eigen::MatrixXd> wf, r0f;
    for (const auto& f : fs) {
        wf.push_back(w.apply(f));
        r0f.push_back(r0.apply(f));
    }

    ConvergenceReport rep;
    rep.epsilons = epsilons;
    for (double e : epsilons) {
        const auto unit = scale_potential(v.with_strength(1.0), ScalingLaw::weak_contact(3, e));
        double lam = 0.0;
        try {
            lam = discrete_resonance_coupling(unit, grid, m);
        } catch (const std::exception& ex) {
            throw NumericalError("convergence_study: assembly failed at eps = " + std::to_string(e) + ": " + ex.what(),
                                 e);
        }
        rep.couplings.push_back(lam);
        Eigen::MatrixXd he = h;
        he.diagonal() -= lam * potential_diagonal(unit, grid, 3);
        const ProductResolvent re({he, he}, z);
        std::vector<double> row;
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const Eigen::MatrixXd we = re.apply(fs[k]) - r0f[k];
            row.push_back((we - wf[k]).norm() / fs[k].norm());
        }
        rep.discrepancy.push_back(std::move(row));
    }
    rep.reduction = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < fs.size(); ++k) {
        for (std::size_t i = 1; i < epsilons.size(); ++i)
            if (!(rep.discrepancy[i][k] < rep.discrepancy[i - 1][k])) rep.monotone = false;
        rep.reduction = std::min(rep.reduction, rep.discrepancy.front()[k] / rep.discrepancy.back()[k]);
    }
    return rep;
}

std::vector<Eigen::MatrixXd> random_bumps(const RadialGrid& gx, const RadialGrid& gy, int count, std::uint64_t seed) {
    if (count < 0) throw InvalidArgument("random_bumps: count must be nonnegative");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double lx = gx.r_max(), ly = gy.r_max();
    std::vector<Eigen::MatrixXd> out;
    for (int c = 0; c < count; ++c) {
        Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(gx.size()),
                                                  static_cast<Eigen::Index>(gy.size()));
        for (int b = 0; b < 3; ++b) {
            const double ax = 0.3 * lx * unit(gen), ay = 0.3 * ly * unit(gen);
            const double sx = (0.02 + 0.08 * unit(gen)) * lx, sy = (0.02 + 0.08 * unit(gen)) * ly;
            const double amp = 2.0 * unit(gen) - 1.0;
            for (std::size_t i = 0; i < gx.size(); ++i)
                for (std::size_t j = 0; j < gy.size(); ++j) {
                    const double dx = (gx.node(i) - ax) / sx, dy = (gy.node(j) - ay) / sy;
                    f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                        amp * std::exp(-0.5 * (dx * dx + dy * dy)) * std::sqrt(gx.weight(i) * gy.weight(j));
                }
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace zrange
