#pragma once

// Independent reference computations used only by the test suites.  None of
// these routines share code paths with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Zero-energy regular solution of u'' = -2 m V(r) u with u(0)=0, u'(0)=1,
/// integrated by classical RK4 on [0, R] with `steps` steps.  Returns u'(R).
inline double zero_energy_slope(const std::function<double(double)>& v, double m, double R, int steps,
                                double* u_end = nullptr) {
    const double h = R / steps;
    double u = 0.0, p = 1.0, r = 0.0;
    auto acc = [&](double rr, double uu) { return -2.0 * m * v(rr) * uu; };
    for (int i = 0; i < steps; ++i) {
        const double k1u = p, k1p = acc(r, u);
        const double k2u = p + 0.5 * h * k1p, k2p = acc(r + 0.5 * h, u + 0.5 * h * k1u);
        const double k3u = p + 0.5 * h * k2p, k3p = acc(r + 0.5 * h, u + 0.5 * h * k2u);
        const double k4u = p + h * k3p, k4p = acc(r + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        r += h;
    }
    if (u_end) *u_end = u;
    return p;
}

/// Smallest coupling lambda in (lo, hi) with u'(R) = 0 for potential
/// lambda * shape(r): the first zero-energy resonance.
inline double shooting_critical_coupling(const std::function<double(double)>& shape, double m, double R, double lo,
                                         double hi, int steps = 20000) {
    auto f = [&](double lam) { return zero_energy_slope([&](double r) { return lam * shape(r); }, m, R, steps); };
    double flo = f(lo);
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Cyclic Jacobi eigenvalue iteration for small symmetric matrices.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
    const auto n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

inline Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = nd(gen);
    return 0.5 * (m + m.transpose());
}

inline Eigen::MatrixXd random_spd(int n, unsigned seed) {
    Eigen::MatrixXd a = random_symmetric(n, seed);
    return a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// log|Gamma(x + iy)| from the Stirling series after shifting the argument
/// past 20.
inline double log_abs_gamma(double x, double y) {
    std::complex<double> z(x, y), acc(0.0, 0.0);
    while (z.real() < 20.0) {
        acc -= std::log(z);
        z += 1.0;
    }
    const std::complex<double> z2 = z * z;
    const double half_log_2pi = 0.5 * std::log(2.0 * 3.14159265358979323846);
    const std::complex<double> series =
        (z - 0.5) * std::log(z) - z + half_log_2pi + 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) +
        1.0 / (1260.0 * z * z2 * z2) - 1.0 / (1680.0 * z * z2 * z2 * z2);
    return (series + acc).real();
}

/// Coupling C at which sqrt(-Lap) - C / r in R^d has the oscillating
/// zero-energy solutions r^(-(d-1)/2 + i nu): the Mellin symbol of
/// sqrt(-Lap) on r^(-a) is 2 Gamma((d - a)/2) Gamma((a + 1)/2) /
/// (Gamma((d - a - 1)/2) Gamma(a/2)), evaluated at a = (d - 1)/2 + i nu.
inline double mellin_coupling(int d, double nu) {
    const double a = (d + 1) / 4.0, b = (d - 1) / 4.0;
    return 2.0 * std::exp(2.0 * (log_abs_gamma(a, nu / 2.0) - log_abs_gamma(b, nu / 2.0)));
}

/// Inverse of mellin_coupling in nu by bisection (the symbol increases with nu).
inline double mellin_nu(int d, double C) {
    double lo = 0.0, hi = 50.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mellin_coupling(d, mid) < C ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
