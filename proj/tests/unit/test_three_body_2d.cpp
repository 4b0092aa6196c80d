#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "zrange/potential.hpp"
#include "zrange/three_body_2d.hpp"

using namespace zrange;

namespace {
constexpr double pi = std::numbers::pi;

RadialGrid log_grid(double r_min, double r_max, int per_decade) {
    const int n = static_cast<int>(std::lround(per_decade * std::log10(r_max / r_min))) + 1;
    return build_grid(n, r_max, Spacing::logarithmic, r_min);
}

// Brute-force S^3 average of the regulated kernel with a midpoint rule in
// (chi, theta), independent of the closed-form theta integral.
double brute_average(double eta, int n) {
    double sum = 0.0, norm = 0.0;
    for (int i = 0; i < n; ++i) {
        const double chi = (i + 0.5) * (pi / 2) / n;
        const double w = std::sin(chi) * std::cos(chi);
        for (int j = 0; j < n; ++j) {
            const double th = (j + 0.5) * 2 * pi / n;
            const double s = std::sin(2 * chi);
            sum += w / ((1 + 0.5 * s * std::cos(th)) * (1 + eta * eta + s * std::cos(th)));
            norm += w;
        }
    }
    return sum / norm;
}
}  // namespace

TEST(Kernel22, UnitVectorsAndPole) {
    const Eigen::Vector2d e1(1, 0), e2(0, 1);
    EXPECT_NEAR(kernel22(e1, e2).value, 1.0 / (2.0 * 2.0), 1e-15);
    const auto k = kernel22(e1, e1);
    EXPECT_NEAR(k.value, 1.0 / 12.0, 1e-15);
    EXPECT_FALSE(k.pole);
    const auto p = kernel22(e1, -e1);
    EXPECT_TRUE(p.pole);
    EXPECT_TRUE(std::isinf(p.value));
}

TEST(Kernel22, HomogeneousOfDegreeMinusFour) {
    const Eigen::Vector2d q1(0.3, -1.1), q2(0.7, 0.4);
    for (double t : {0.1, 2.0, 17.0})
        EXPECT_NEAR(kernel22(t * q1, t * q2).value, std::pow(t, -4) * kernel22(q1, q2).value,
                    1e-13 * std::pow(t, -4) * kernel22(q1, q2).value);
}

TEST(Kernel22, SphereAverageMatchesBruteForce) {
    for (double eta : {0.5, 0.2}) {
        const double a = kernel22_sphere_average({16, eta});
        EXPECT_NEAR(a, brute_average(eta, 1200), 1e-4 * a) << "eta = " << eta;
    }
    // Logarithmic growth as the regulator is removed.
    const double a3 = kernel22_sphere_average({16, 1e-3}), a6 = kernel22_sphere_average({16, 1e-6});
    EXPECT_GT(a6, a3);
    EXPECT_THROW(kernel22_sphere_average({16, 0.0}), InvalidArgument);
    EXPECT_THROW(kernel22_sphere_average({0, 0.1}), InvalidArgument);
}

TEST(HyperradialReduce, CoulombProfile) {
    std::vector<double> r;
    for (int k = 0; k <= 12; ++k) r.push_back(0.01 * std::pow(10.0, k / 4.0));
    const auto h = hyperradial_reduce({}, r);
    EXPECT_TRUE(h.converged);
    EXPECT_NEAR(h.exponent, -1.0, 0.05);
    EXPECT_LT(h.prefactor, 0.0);
    EXPECT_NEAR(h.prefactor, -h.angular_average / (4 * pi * pi), 1e-6 * h.angular_average);
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(h.profile[i] * r[i], h.prefactor, 1e-6 * std::abs(h.prefactor));
}

TEST(HyperradialReduce, RejectsNarrowSpan) {
    EXPECT_THROW(hyperradial_reduce({}, {1.0, 2.0, 50.0}), InvalidArgument);
    EXPECT_THROW(hyperradial_reduce({}, {-1.0, 2.0, 500.0}), InvalidArgument);
    EXPECT_THROW(hyperradial_reduce({}, {1.0, 200.0}), InvalidArgument);
}

TEST(MassSweep, CountsAndDilationOracle) {
    const auto g = log_grid(1e-4, 100.0, 40);
    const auto rep = mass_sweep_2d({1.0, 2.0, 4.0, 8.0}, 1.0, g);
    EXPECT_TRUE(rep.count_nondecreasing);
    EXPECT_LT(rep.dilation_error, 0.01);
    // Binding grows linearly with the mass.
    for (std::size_t k = 1; k < rep.masses.size(); ++k)
        EXPECT_NEAR(rep.max_abs_energy[k] / rep.max_abs_energy[0], rep.masses[k], 0.02 * rep.masses[k]);
    EXPECT_FALSE(rep.max_abs_nonincreasing);
    EXPECT_EQ(rep.shallowest_resolved.size(), 4u);
}

TEST(MassSweep, LowLevelsMatchFourDimensionalCoulomb) {
    const auto g = log_grid(1e-4, 200.0, 80);
    const double m = 2.0, c = 1.5;
    const auto rep = mass_sweep_2d({m}, c, g);
    const auto& e = rep.spectra[0].eigenvalues;
    for (int n = 0; n < 3; ++n) {
        const double exact = -m * c * c / (4.0 * (n + 1.5) * (n + 1.5));
        EXPECT_NEAR(e[static_cast<std::size_t>(n)], exact, 0.01 * std::abs(exact)) << "n = " << n;
    }
    EXPECT_THROW(mass_sweep_2d({2.0, 1.0}, 1.0, g), InvalidArgument);
    EXPECT_THROW(mass_sweep_2d({1.0}, 0.0, g), InvalidArgument);
}

TEST(HyperradialReduce, HalvesUnderDoubling) {
    std::vector<double> r;
    for (int k = 0; k < 10; ++k) r.push_back(0.05 * std::pow(2.0, k));
    const auto h = hyperradial_reduce({8, 1e-2}, r);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) EXPECT_NEAR(h.profile[i + 1] / h.profile[i], 0.5, 1e-8);
}
