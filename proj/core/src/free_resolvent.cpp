#include "zrange/free_resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <lapacke.h>

#include "zrange/linalg.hpp"

namespace zrange {

namespace {

// Edge conductance between two points: coefficient * rho^(d-1) / dr in the
// psi form, coefficient / dr in the u form (d = 3).
double edge_conductance(int d, double coefficient, double a, double b) {
    const double rho = d == 3 ? 1.0 : std::pow(0.5 * (a + b), d - 1);
    return coefficient * rho / (b - a);
}

// exp(-x) I0(x) and exp(x) K0(x), switching to asymptotic series where the
// unscaled functions would overflow.
double scaled_i0(double x) {
    if (x < 500.0) return std::cyl_bessel_i(0.0, x) * std::exp(-x);
    const double t = 1.0 / (8.0 * x);
    return (1.0 + t + 9.0 * t * t / 2.0) / std::sqrt(2.0 * std::numbers::pi * x);
}

double scaled_k0(double x) {
    if (x < 500.0) return std::cyl_bessel_k(0.0, x) * std::exp(x);
    const double t = 1.0 / (8.0 * x);
    return std::sqrt(std::numbers::pi / (2.0 * x)) * (1.0 - t + 9.0 * t * t / 2.0);
}

void check_dimension(int d) {
    if (d != 2 && d != 3 && d != 4) throw InvalidArgument("radial operators support d in {2,3,4}");
}

}  // namespace

double radial_green_kernel(int d, double z, double r, double r_prime, double m) {
    if (!(z > 0.0)) throw InvalidArgument("radial_green_kernel: only real z > 0 is supported");
    if (!(r > 0.0) || !(r_prime > 0.0)) throw InvalidArgument("radial_green_kernel: radii must be positive");
    if (!(m > 0.0)) throw InvalidArgument("radial_green_kernel: mass must be positive");
    const double k = std::sqrt(2.0 * m * z);
    const double lo = std::min(r, r_prime);
    const double hi = std::max(r, r_prime);
    if (d == 3) {
        // sinh(k lo) exp(-k hi) without overflow.
        const double v = 0.5 * (std::exp(-k * (hi - lo)) - std::exp(-k * (hi + lo)));
        return 2.0 * m / k * v;
    }
    if (d == 2) {
        const double a = k * lo;
        const double b = k * hi;
        return 2.0 * m * std::sqrt(r * r_prime) * scaled_i0(a) * scaled_k0(b) * std::exp(a - b);
    }
    throw InvalidArgument("radial_green_kernel: d must be 2 or 3");
}

Eigen::VectorXd cell_measure(const RadialGrid& grid, int d) {
    check_dimension(d);
    const auto n = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (d == 3) {
            out(i) = grid.weight(i);
        } else {
            const double lo = grid.cell_lo(i), hi = grid.cell_hi(i);
            out(i) = (std::pow(hi, d) - std::pow(lo, d)) / d;
        }
    }
    return out;
}

Eigen::VectorXd reduced_factor(const RadialGrid& grid, int d) {
    check_dimension(d);
    if (d == 3) return grid.nodes_vec();
    return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(grid.size()));
}

Eigen::VectorXd to_basis(const RadialGrid& grid, int d, const Eigen::VectorXd& psi) {
    return (cell_measure(grid, d).cwiseSqrt().array() * reduced_factor(grid, d).array() * psi.array()).matrix();
}

Eigen::VectorXd from_basis(const RadialGrid& grid, int d, const Eigen::VectorXd& phi) {
    return (phi.array() / (cell_measure(grid, d).cwiseSqrt().array() * reduced_factor(grid, d).array())).matrix();
}

Eigen::VectorXd potential_diagonal(const ScaledPotential& v, const RadialGrid& grid, int d) {
    check_dimension(d);
    const auto n = static_cast<Eigen::Index>(grid.size());
    const Eigen::VectorXd meas = cell_measure(grid, d);
    const int power = d == 3 ? 0 : d - 1;
    const double cut = v.support_radius();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lo = grid.cell_lo(i);
        if (lo >= cut) break;
        out(i) = v.integrate(lo, grid.cell_hi(i), power) / meas(i);
    }
    return out;
}

Eigen::MatrixXd kinetic_matrix(const RadialGrid& grid, int d, double coefficient) {
    check_dimension(d);
    if (!(coefficient > 0.0)) throw InvalidArgument("kinetic coefficient must be positive");
    const auto n = static_cast<Eigen::Index>(grid.size());
    const auto& r = grid.nodes();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);

    auto conductance = [&](double a, double b) { return edge_conductance(d, coefficient, a, b); };
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double c = conductance(r[i], r[i + 1]);
        k(i, i) += c;
        k(i + 1, i + 1) += c;
        k(i, i + 1) -= c;
        k(i + 1, i) -= c;
    }
    if (d == 3) k(0, 0) += conductance(grid.inner_wall(), r[0]);
    if (grid.outer() == OuterBoundary::dirichlet) k(n - 1, n - 1) += conductance(r[n - 1], grid.outer_wall());

    const Eigen::VectorXd inv_sqrt = cell_measure(grid, d).cwiseSqrt().cwiseInverse();
    return inv_sqrt.asDiagonal() * k * inv_sqrt.asDiagonal();
}

KineticRoot kinetic_root(const RadialGrid& grid, int d, double coefficient) {
    check_dimension(d);
    if (!(coefficient > 0.0)) throw InvalidArgument("kinetic coefficient must be positive");
    const auto n = static_cast<Eigen::Index>(grid.size());
    const auto& r = grid.nodes();
    const Eigen::VectorXd m = cell_measure(grid, d);
    const bool dirichlet = grid.outer() == OuterBoundary::dirichlet;

    // Rows are cells, columns edges ordered left to right; the product with
    // its transpose is kinetic_matrix.  d = 3 has an inner wall edge, which
    // makes the factor upper bidiagonal; the psi form starts at the first
    // interior edge and is lower bidiagonal.  A missing or extra edge is
    // absorbed by a zero pad.
    const bool upper = d == 3;
    const Eigen::Index size = upper && dirichlet ? n + 1 : n;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(size), off = Eigen::VectorXd::Zero(std::max<Eigen::Index>(size - 1, 1));
    std::vector<double> c;
    if (upper) c.push_back(edge_conductance(d, coefficient, grid.inner_wall(), r[0]));
    for (Eigen::Index i = 0; i + 1 < n; ++i) c.push_back(edge_conductance(d, coefficient, r[i], r[i + 1]));
    if (dirichlet) c.push_back(edge_conductance(d, coefficient, r[n - 1], grid.outer_wall()));
    const auto edges = static_cast<Eigen::Index>(c.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = 1.0 / std::sqrt(m(i));
        if (upper) {
            diag(i) = std::sqrt(c[i]) * s;
            if (i + 1 < edges) off(i) = -std::sqrt(c[i + 1]) * s;
        } else {
            if (i < edges) diag(i) = -std::sqrt(c[i]) * s;
            if (i > 0) off(i - 1) = std::sqrt(c[i - 1]) * s;
        }
    }

    const auto ln = static_cast<lapack_int>(size);
    Eigen::MatrixXd u(size, size), vt(size, size);
    double q = 0.0;
    lapack_int iq = 0;
    const lapack_int info = LAPACKE_dbdsdc(LAPACK_COL_MAJOR, upper ? 'U' : 'L', 'I', ln, diag.data(), off.data(),
                                           u.data(), ln, vt.data(), ln, &q, &iq);
    if (info != 0) throw NumericalError("dbdsdc failed with info=" + std::to_string(info), info);

    KineticRoot out;
    if (size == n) {
        out.sigma = diag;
        out.vectors = u;
        // psi form with a Neumann end has the constant zero mode.
        if (!upper && !dirichlet) out.sigma(n - 1) = 0.0;
        return out;
    }
    // Drop the padding direction: the singular vector living on the pad row.
    Eigen::Index pad = 0;
    u.row(n).cwiseAbs().maxCoeff(&pad);
    out.sigma.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0, j = 0; k < size; ++k) {
        if (k == pad) continue;
        out.sigma(j) = diag(k);
        out.vectors.col(j) = u.col(k).head(n);
        ++j;
    }
    return out;
}

Eigen::MatrixXd KineticRoot::sqrt() const {
    Eigen::MatrixXd s = vectors * sigma.asDiagonal() * vectors.transpose();
    return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd KineticRoot::inverse_sqrt() const {
    if (sigma.size() == 0) return {};
    if (!(sigma.minCoeff() > 0.0)) throw NumericalError("kinetic operator is singular", sigma.minCoeff());
    Eigen::MatrixXd s = vectors * sigma.cwiseInverse().asDiagonal() * vectors.transpose();
    return 0.5 * (s + s.transpose());
}

OperatorMatrix discretize_h0(const RadialGrid& grid, int d, double m) {
    if (!(m > 0.0)) throw InvalidArgument("discretize_h0: mass must be positive");
    return OperatorMatrix(kinetic_matrix(grid, d, 1.0 / (2.0 * m)), grid, m, d, "H0");
}

Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& m) {
    require_symmetric(m, 1e-10, "operator_sqrt");
    const auto eig = symmetric_eigen(m, true);
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    if (eig.values.size() && eig.values(0) < -1e-10 * scale)
        throw NumericalError("operator_sqrt: matrix has a negative eigenvalue " + std::to_string(eig.values(0)),
                             eig.values(0));
    Eigen::MatrixXd s = spectral_apply(eig, [](double x) { return std::sqrt(std::max(x, 0.0)); });
    return 0.5 * (s + s.transpose());
}

OperatorMatrix operator_sqrt(const OperatorMatrix& m) {
    return OperatorMatrix(matrix_sqrt(m.entries), m.grid, m.mass, m.dimension, "sqrt(" + m.label + ")");
}

Eigen::MatrixXd resolvent_matrix(const Eigen::MatrixXd& m, double z) {
    const auto n = m.rows();
    Eigen::MatrixXd shifted = m;
    shifted.diagonal().array() += z;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
    const Eigen::VectorXd dvec = ldlt.vectorD();
    const double dmax = dvec.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || dvec.cwiseAbs().minCoeff() <= 1e-14 * std::max(dmax, 1e-300)) {
        const auto eig = symmetric_eigen(shifted, false);
        const double smallest = eig.values.cwiseAbs().minCoeff();
        throw NumericalError("resolvent: M + zI is singular (smallest |eigenvalue| " + std::to_string(smallest) + ")",
                             smallest);
    }
    Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    return 0.5 * (inv + inv.transpose());
}

GridFunction solve_resolvent(const OperatorMatrix& m, double z, const GridFunction& f) {
    if (f.values.size() != m.size()) throw InvalidArgument("solve_resolvent: size mismatch");
    Eigen::MatrixXd shifted = m.entries;
    shifted.diagonal().array() += z;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
    Eigen::VectorXd g = ldlt.solve(f.values);
    double denom = f.values.norm();
    double res = (shifted * g - f.values).norm();
    if (ldlt.info() == Eigen::Success && denom > 0.0 && res > 1e-12 * denom) {
        // One step of iterative refinement.
        g += ldlt.solve(f.values - shifted * g);
        res = (shifted * g - f.values).norm();
    }
    if (ldlt.info() != Eigen::Success || !g.allFinite() || (denom > 0.0 && res > 1e-10 * denom)) {
        const auto eig = symmetric_eigen(shifted, false);
        const double smallest = eig.values.cwiseAbs().minCoeff();
        throw NumericalError("solve_resolvent: M + zI is singular (smallest |eigenvalue| " +
                                 std::to_string(smallest) + ")",
                             smallest);
    }
    return GridFunction(f.grid, std::move(g));
}

}  // namespace zrange
