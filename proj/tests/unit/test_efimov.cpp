#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zrange/effective_operator.hpp"
#include "zrange/free_resolvent.hpp"
#include "zrange/linalg.hpp"
#include "zrange/thresholds.hpp"

using namespace zrange;

namespace {
constexpr double pi = std::numbers::pi;

RadialGrid log_grid(double r_min, double r_max, int per_decade) {
    const int n = static_cast<int>(std::lround(per_decade * std::log10(r_max / r_min))) + 1;
    return build_grid(n, r_max, Spacing::logarithmic, r_min);
}

double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}
}  // namespace

TEST(MellinOracle, KnownValues) {
    EXPECT_NEAR(oracle::mellin_coupling(3, 0.0), 2.0 / pi, 1e-12);
    EXPECT_NEAR(oracle::mellin_coupling(3, 1.3), 1.3 / std::tanh(pi * 1.3 / 2.0), 1e-12);
    EXPECT_NEAR(oracle::mellin_coupling(2, 0.0), 2.0 * std::pow(std::tgamma(0.75) / std::tgamma(0.25), 2), 1e-12);
}

TEST(KineticRoot, SquaresToKineticMatrix) {
    for (int d : {2, 3, 4}) {
        const auto g = log_grid(1e-3, 10.0, 40);
        const auto k = kinetic_matrix(g, d, 0.7);
        const auto root = kinetic_root(g, d, 0.7);
        const Eigen::MatrixXd s = root.sqrt();
        EXPECT_LT((s * s - k).norm(), 1e-12 * k.norm()) << "d = " << d;
        EXPECT_LT((root.inverse_sqrt() * s - Eigen::MatrixXd::Identity(k.rows(), k.cols())).norm(), 1e-9);
    }
}

TEST(KineticRoot, GradedGridKeepsSmallEigenvalues) {
    // Nine decades: a dense eigensolve of the kinetic matrix has no correct
    // digits left at the bottom of the spectrum.  Compare the lowest level
    // with the same problem on a grid that only covers the outer decades,
    // where the inner cutoff is irrelevant for the lowest Dirichlet mode.
    const auto deep = kinetic_root(log_grid(1e-7, 100.0, 40), 3, 1.0);
    const auto shallow = kinetic_root(log_grid(1e-3, 100.0, 40), 3, 1.0);
    const double e_deep = deep.sigma.minCoeff(), e_shallow = shallow.sigma.minCoeff();
    EXPECT_NEAR(e_deep / e_shallow, 1.0, 1e-3);
}

TEST(EffectiveOperator, RejectsBadGrids) {
    EXPECT_THROW(effective_operator(ImageKind::contact_image, 1.0, 3, build_grid(100, 100.0, Spacing::linear)),
                 InvalidArgument);
    EXPECT_THROW(effective_operator(ImageKind::contact_image, 1.0, 3, log_grid(1e-3, 100.0, 20)), InvalidArgument);
    EXPECT_THROW(effective_operator(ImageKind::contact_image, 1.0, 3, log_grid(1e-4, 10.0, 20)), InvalidArgument);
    EXPECT_THROW(effective_operator(ImageKind::contact_image, -1.0, 3, log_grid(1e-4, 100.0, 20)), InvalidArgument);
    EXPECT_THROW(effective_operator(ImageKind::contact_image, 1.0, 4, log_grid(1e-4, 100.0, 20)), InvalidArgument);
}

TEST(EffectiveOperator, SingularProfileCellAverages) {
    const auto g = log_grid(1e-4, 100.0, 20);
    for (int d : {2, 3}) {
        const auto c = image_potential_diagonal(ImageKind::contact_image, g, d);
        const auto w = image_potential_diagonal(ImageKind::weak_image, g, d);
        const int p = d == 3 ? 0 : d - 1;
        for (std::size_t i : {std::size_t{0}, std::size_t{40}, std::size_t{79}, std::size_t{100}}) {
            const double lo = g.cell_lo(i), hi = g.cell_hi(i);
            const double meas = simpson([&](double r) { return std::pow(r, p); }, lo, hi);
            const double inv = simpson([&](double r) { return std::pow(r, p - 1); }, lo, hi) / meas;
            const double b = std::min(hi, 1.0);
            const double lg =
                b > lo ? simpson([&](double r) { return -std::log(r) * std::pow(r, p); }, lo, b) / meas : 0.0;
            const auto ii = static_cast<Eigen::Index>(i);
            EXPECT_NEAR(c(ii), inv, 1e-8 * inv);
            EXPECT_NEAR(w(ii), lg, 1e-8 * std::max(1.0, std::abs(lg)));
        }
        EXPECT_EQ(w(w.size() - 1), 0.0);
    }
}

TEST(EffectiveOperator, FreePartIsPositive) {
    const auto g = log_grid(1e-4, 100.0, 30);
    for (int d : {2, 3}) {
        const auto s = eig_spectrum(effective_operator(ImageKind::contact_image, 0.0, d, g).entries);
        EXPECT_EQ(s.count_negative, 0);
        EXPECT_GT(s.eigenvalues.front(), 0.0);
    }
}

TEST(EffectiveOperator, ContactImageScaleCovariance) {
    const auto g = log_grid(1e-5, 100.0, 40);
    const double s = 2.0;
    const auto a = eig_spectrum(effective_operator(ImageKind::contact_image, 2.0, 3, g).entries).negative();
    const auto b = eig_spectrum(effective_operator(ImageKind::contact_image, 2.0, 3, g.dilated(s)).entries).negative();
    ASSERT_EQ(a.size(), b.size());
    ASSERT_GE(a.size(), 4u);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(b[k], a[k] / s, 0.01 * std::abs(a[k] / s));
}

TEST(EffectiveOperator, WeakImageSmallCouplingHasNoBoundState) {
    for (double r_min : {1e-4, 1e-5, 1e-6}) {
        const auto g = log_grid(r_min, 100.0, 40);
        EXPECT_EQ(eig_spectrum(effective_operator(ImageKind::weak_image, 0.5, 3, g).entries).count_negative, 0);
        EXPECT_EQ(eig_spectrum(effective_operator(ImageKind::weak_image, 0.3, 2, g).entries).count_negative, 0);
    }
}

TEST(EffectiveOperator, CrossingsCountNegativeEigenvalues) {
    const auto g = log_grid(1e-4, 100.0, 40);
    for (auto kind : {ImageKind::contact_image, ImageKind::weak_image}) {
        const auto c = image_thresholds(kind, 3, g);
        for (double C : {0.5, 1.0, 2.0, 4.0}) {
            const auto direct = eig_spectrum(effective_operator(kind, C, 3, g).entries).count_negative;
            const auto counted = std::count_if(c.begin(), c.end(), [&](double x) { return x < C; });
            EXPECT_EQ(direct, counted) << to_string(kind) << " C = " << C;
        }
    }
}

TEST(Thresholds, ContactImageMatchesMellinOracle) {
    const double nu1 = pi / std::log(10.0);  // one level per decade
    for (int d : {3, 2}) {
        const auto rep = find_thresholds(ImageKind::contact_image, d, {0.05, 20.0});
        const double c0 = oracle::mellin_coupling(d, 0.0), c1 = oracle::mellin_coupling(d, nu1);
        EXPECT_NEAR(rep.C0, c0, (d == 3 ? 0.002 : 0.015) * c0) << "d = " << d;
        EXPECT_NEAR(rep.C1, c1, 0.005 * c1) << "d = " << d;
        EXPECT_LT(rep.grid_refinement_drift, 0.01);
        EXPECT_TRUE(rep.converged);
        EXPECT_LE(rep.C0, rep.C1);
        EXPECT_TRUE(rep.accumulates);
    }
}

TEST(Thresholds, CountBehaviourAroundThresholds) {
    const auto rep = find_thresholds(ImageKind::contact_image, 3, {0.05, 20.0});
    for (std::size_t j = 0; j < rep.crossings.size(); ++j) EXPECT_EQ(count_negative(rep, 0.95 * rep.C0, j), 0);
    for (std::size_t j = 0; j + 1 < rep.crossings.size(); ++j)
        EXPECT_GT(count_negative(rep, 1.2 * rep.C1, j + 1), count_negative(rep, 1.2 * rep.C1, j));
}

TEST(Thresholds, WeakImageHasNoAccumulation) {
    for (int d : {2, 3}) {
        const auto rep = find_thresholds(ImageKind::weak_image, d, {0.05, 20.0});
        EXPECT_FALSE(rep.accumulates);
        EXPECT_TRUE(std::isinf(rep.C1));
        EXPECT_LT(rep.grid_refinement_drift, 0.01);
        for (std::size_t j = 1; j < rep.crossings.size(); ++j)
            EXPECT_EQ(count_negative(rep, 10.0, j), count_negative(rep, 10.0, 0));
    }
}

TEST(Thresholds, RejectsNonStraddlingBracket) {
    EXPECT_THROW(find_thresholds(ImageKind::contact_image, 3, {0.7, 20.0}), InvalidArgument);
    EXPECT_THROW(find_thresholds(ImageKind::contact_image, 3, {0.05, 1.0}), InvalidArgument);
    EXPECT_THROW(find_thresholds(ImageKind::three_body_2d, 3, {0.05, 1.0}), InvalidArgument);
}

TEST(GeometricRatio, ExactSequence) {
    std::vector<double> e;
    for (int n = 0; n < 8; ++n) e.push_back(-5.0 * std::pow(0.3, n));
    e.push_back(1.0);
    const auto g = geometric_ratio(make_spectrum(e));
    EXPECT_NEAR(g.ratio, 0.3, 1e-14);
    EXPECT_LT(g.deviation, 1e-13);
    EXPECT_EQ(g.classification, GeometricClass::efimov);
}

TEST(GeometricRatio, LinearSpacingIsNotGeometric) {
    std::vector<double> e;
    for (int n = 0; n < 8; ++n) e.push_back(-8.0 + n);
    EXPECT_EQ(geometric_ratio(make_spectrum(e)).classification, GeometricClass::not_geometric);
    EXPECT_THROW(geometric_ratio(make_spectrum({-3.0, -1.0, -0.3})), InvalidArgument);
    EXPECT_THROW(geometric_ratio(make_spectrum(e), 7, 3), InvalidArgument);
}

TEST(GeometricRatio, ContactImageAboveC1) {
    const double C = 2.0 * oracle::mellin_coupling(3, pi / std::log(10.0));
    const double expected = std::exp(-pi / oracle::mellin_nu(3, C));
    const auto op = effective_operator(ImageKind::contact_image, C, 3, log_grid(1e-4, 100.0, 150));
    const auto s = eig_spectrum(op.entries);
    const auto probes = scale_probes(op);
    const auto g = geometric_ratio(s, 3, 6, probes);
    EXPECT_NEAR(g.ratio, expected, 0.01 * expected);
    EXPECT_LT(g.deviation, 0.03);
    // The image operator itself collapses toward the inner cutoff.
    EXPECT_TRUE(probes.deepest_diverges);
    EXPECT_NEAR(probes.deepest_factor, 10.0, 0.5);
    EXPECT_EQ(g.classification, GeometricClass::thomas);
    // The outer face: a decade more room adds shallow states with the same ratio.
    EXPECT_GE(probes.shallow_added, 1);
    EXPECT_NEAR(probes.added_ratio, g.ratio, 0.03 * g.ratio);
}
