#pragma once

#include <vector>

#include <Eigen/Dense>

#include "zrange/grid.hpp"
#include "zrange/spectrum.hpp"

namespace zrange {

struct Kernel22 {
    double value = 0.0;
    bool pole = false;  ///< (q1 + q2)^2 = 0; value is then +inf
};

/// 1 / ((q1^2 + q2^2 + q1.q2) (q1 + q2)^2), q1, q2 in R^2.
Kernel22 kernel22(const Eigen::Vector2d& q1, const Eigen::Vector2d& q2);

/// The S^3 average is done in Hopf coordinates
///   q1 = cos(chi) (cos a, sin a),  q2 = sin(chi) (cos b, sin b);
/// the a - b integral is exact, the chi integral is composite Gauss-Legendre
/// with `panels` panels.  The pole circle q1 = -q2 is regulated by
/// (q1 + q2)^2 -> (q1 + q2)^2 + eta^2 |q|^2, which keeps the kernel
/// homogeneous.
struct AngularQuadrature {
    int panels = 16;
    double eta = 1e-3;
};

struct HyperradialProfile {
    std::vector<double> r;
    std::vector<double> profile;
    /// S^3 average of the kernel on the unit sphere.
    double angular_average = 0.0;
    /// Power-law fit profile = prefactor * r^exponent.
    double exponent = 0.0;
    double prefactor = 0.0;
    /// Relative change of the angular average when the panels are doubled.
    double refinement_change = 0.0;
    bool converged = true;  ///< refinement_change < 1e-8
};

/// S^3 average of the kernel (taken in the normalization in which the free
/// form is sqrt(H0), i.e. multiplied by |q|, degree -3), transformed to the
/// hyperradius r of R^4 by the s-wave Hankel transform, with the sign of an
/// attractive interaction.  r_list must span at least two decades.
HyperradialProfile hyperradial_reduce(const AngularQuadrature& quad, const std::vector<double>& r_list);

/// S^3 average on its own (exposed for the convergence checks).
double kernel22_sphere_average(const AngularQuadrature& quad);

struct MassSweepReport {
    std::vector<double> masses;
    double c = 0.0;
    std::vector<SpectrumReport> spectra;
    std::vector<int> counts;
    std::vector<double> max_abs_energy;
    bool count_nondecreasing = true;
    bool max_abs_nonincreasing = true;
    /// Largest relative deviation from E(m; grid) = m E(1; m grid).
    double dilation_error = 0.0;
    /// Per mass: levels entering dilation_error (those above the rounding
    /// floor 10 n eps ||H||).
    std::vector<int> dilation_levels;
    /// Per mass: weight of the shallowest state beyond r_max / 2 stays below
    /// 1 %.  False means the box, not the potential, sets that level.
    std::vector<bool> shallowest_resolved;
};

/// Spectra of (1/m)(-Lap_4) - c / r on the hyperradial s-wave.
MassSweepReport mass_sweep_2d(const std::vector<double>& masses, double c, const RadialGrid& grid);

}  // namespace zrange
