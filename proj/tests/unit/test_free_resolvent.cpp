#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zrange/free_resolvent.hpp"
#include "zrange/linalg.hpp"
#include "zrange/spectrum.hpp"

using namespace zrange;

namespace {
constexpr double pi = std::numbers::pi;

// Kernel in u-variables recovered from the dense discrete inverse.
double discrete_kernel(const RadialGrid& g, int d, double z, double m, std::size_t i, std::size_t j) {
    const auto h0 = discretize_h0(g, d, m);
    const Eigen::MatrixXd r0 = resolvent_matrix(h0.entries, z);
    const Eigen::VectorXd meas = cell_measure(g, d);
    const Eigen::VectorXd fac = reduced_factor(g, d);
    double k = r0(i, j) / std::sqrt(meas(i) * meas(j)) / (fac(i) * fac(j));
    if (d == 2) k *= std::sqrt(g.node(i) * g.node(j));
    else k *= g.node(i) * g.node(j);
    return k;
}
}  // namespace

TEST(GreenKernel, Symmetric) {
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int d : {2, 3}) {
        for (int i = 0; i < 20; ++i) {
            const double r = u(gen), s = u(gen), z = u(gen);
            EXPECT_DOUBLE_EQ(radial_green_kernel(d, z, r, s), radial_green_kernel(d, z, s, r));
        }
    }
}

TEST(GreenKernel, DecaysMonotonicallyInZ) {
    for (int d : {2, 3}) {
        double prev = radial_green_kernel(d, 0.1, 1.0, 1.0);
        for (double z = 0.2; z < 1e4; z *= 2.0) {
            const double k = radial_green_kernel(d, z, 1.0, 1.0);
            EXPECT_LT(k, prev);
            prev = k;
        }
        EXPECT_LT(prev, 1e-2);
    }
}

TEST(GreenKernel, RejectsNonpositiveZ) {
    EXPECT_THROW(radial_green_kernel(3, 0.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(radial_green_kernel(3, -1.0, 1.0, 1.0), InvalidArgument);
}

TEST(GreenKernel, MatchesDenseInversion3d) {
    // r = r' = 1 is node 40 of an 800-node grid on (0, 20].
    const auto g = build_grid(800, 20.0, Spacing::linear);
    ASSERT_NEAR(g.node(39), 1.0, 1e-12);
    const double k = discrete_kernel(g, 3, 1.0, 0.5, 39, 39);
    EXPECT_NEAR(k, radial_green_kernel(3, 1.0, 1.0, 1.0, 0.5), 1e-4);
    const double k2 = discrete_kernel(g, 3, 1.0, 0.5, 39, 99);
    EXPECT_NEAR(k2, radial_green_kernel(3, 1.0, 1.0, 2.5, 0.5), 1e-4);
}

TEST(GreenKernel, MatchesDenseInversion2d) {
    const auto g = build_grid(800, 20.0, Spacing::linear);
    const double k = discrete_kernel(g, 2, 1.0, 0.5, 39, 79);
    EXPECT_NEAR(k, radial_green_kernel(2, 1.0, 1.0, 2.0, 0.5), 2e-4);
}

TEST(GreenKernel, GridRefinementConverges) {
    const double z = 0.7;
    double prev = 0.0;
    for (int n : {400, 800}) {
        const auto g = build_grid(n, 20.0, Spacing::linear);
        const std::size_t i = static_cast<std::size_t>(n / 20) - 1;  // r = 1
        const double k = discrete_kernel(g, 3, z, 0.5, i, i);
        if (prev != 0.0) EXPECT_LT(std::abs(k - prev), 1e-3);
        prev = k;
    }
}

TEST(DiscretizeH0, PositiveSemidefinite) {
    for (int d : {2, 3}) {
        const auto rep = eig_spectrum(discretize_h0(build_grid(200, 10.0, Spacing::logarithmic, 1e-3), d));
        EXPECT_GE(rep.eigenvalues.front(), -1e-12);
    }
}

TEST(DiscretizeH0, ParticleInBox) {
    const auto g = build_grid(400, 1.0, Spacing::linear);
    const double m = 0.5;
    const double L = g.outer_wall();
    const auto rep = eig_spectrum(discretize_h0(g, 3, m));
    const double exact = pi * pi / (2.0 * m * L * L);
    EXPECT_NEAR(rep.eigenvalues.front() / exact, 1.0, 0.01);
}

TEST(DiscretizeH0, MassScaling) {
    const auto g = build_grid(64, 5.0, Spacing::linear);
    const auto a = eig_spectrum(discretize_h0(g, 3, 0.5));
    const auto b = eig_spectrum(discretize_h0(g, 3, 1.0));
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
        EXPECT_NEAR(b.eigenvalues[i], 0.5 * a.eigenvalues[i], 1e-12 * a.eigenvalues.back());
}

TEST(OperatorSqrt, IdentityAndDiagonal) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(6, 6);
    EXPECT_LT((matrix_sqrt(id) - id).norm(), 1e-14);
    Eigen::MatrixXd d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
    Eigen::MatrixXd s = matrix_sqrt(d);
    EXPECT_NEAR(s(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(s(1, 1), 3.0, 1e-14);
    EXPECT_NEAR(s(0, 1), 0.0, 1e-14);
}

TEST(OperatorSqrt, ReconstructsRandomSpd) {
    const Eigen::MatrixXd m = oracle::random_spd(50, 21);
    const Eigen::MatrixXd s = matrix_sqrt(m);
    EXPECT_LT((s * s - m).norm() / m.norm(), 1e-8);
    EXPECT_LT((s * m - m * s).norm() / m.norm(), 1e-8);
    EXPECT_GE(symmetric_eigen(s, false).values(0), -1e-12);
}

TEST(OperatorSqrt, RejectsNegative) {
    Eigen::MatrixXd d = Eigen::Vector2d(1.0, -0.5).asDiagonal();
    EXPECT_THROW(matrix_sqrt(d), NumericalError);
}

TEST(SolveResolvent, ZeroOperator) {
    const auto g = build_grid(10, 1.0, Spacing::linear);
    OperatorMatrix zero(Eigen::MatrixXd::Zero(10, 10), g, 0.5, 3, "zero");
    GridFunction f(g, Eigen::VectorXd::LinSpaced(10, 1.0, 2.0));
    EXPECT_LT((solve_resolvent(zero, 1.0, f).values - f.values).norm(), 1e-14);
}

TEST(SolveResolvent, SpectralMapping) {
    const auto g = build_grid(60, 4.0, Spacing::linear);
    const auto h0 = discretize_h0(g, 3);
    const auto rep = eig_spectrum(h0, true);
    const Eigen::VectorXd v = rep.eigenvectors->col(3);
    const double mu = rep.eigenvalues[3];
    const auto out = solve_resolvent(h0, 0.4, GridFunction(g, v));
    EXPECT_LT((out.values - v / (mu + 0.4)).norm(), 1e-12);
}

TEST(SolveResolvent, ResidualSmallAndPositive) {
    const auto g = build_grid(200, 10.0, Spacing::linear);
    const auto h0 = discretize_h0(g, 3);
    std::mt19937 gen(9);
    std::normal_distribution<double> nd;
    Eigen::VectorXd f(200);
    for (auto& x : f) x = nd(gen);
    const auto out = solve_resolvent(h0, 0.3, GridFunction(g, f));
    Eigen::MatrixXd shifted = h0.entries;
    shifted.diagonal().array() += 0.3;
    EXPECT_LT((shifted * out.values - f).norm() / f.norm(), 1e-10);
    EXPECT_GT(symmetric_eigen(resolvent_matrix(h0.entries, 0.3), false).values(0), 0.0);
}

TEST(SolveResolvent, ReportsSingular) {
    const auto g = build_grid(10, 1.0, Spacing::linear);
    OperatorMatrix m(-Eigen::MatrixXd::Identity(10, 10), g, 0.5, 3, "minus-id");
    try {
        solve_resolvent(m, 1.0, GridFunction(g, Eigen::VectorXd::Ones(10)));
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_LT(e.value(), 1e-12);
    }
}
