#pragma once

#include <utility>

#include <Eigen/Dense>

#include "zrange/grid.hpp"
#include "zrange/operator.hpp"
#include "zrange/potential.hpp"

namespace zrange {

/// Smallest spectral parameter used in place of z = 0.
inline constexpr double z_min = 1e-8;

/// Q(z) = B (H0 + z)^(-1) B with B = sqrt(V) from a precomputed potential
/// diagonal (cell basis).  Negative entries are rejected.
Eigen::MatrixXd bs_matrix(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z);

/// Birman-Schwinger operator of `v` on `grid`.  z must be at least z_min.
OperatorMatrix bs_operator(const ScaledPotential& v, const RadialGrid& grid, double z, int d = 3, double m = 0.5);

/// Largest eigenvalue of Q(z) extrapolated to z = 0 from the ladder
/// {z, 2z, 4z}.
double bs_top_eigenvalue_at_zero(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z = z_min);

struct BoundaryFit {
    double C = 0.0;
    double D = 0.0;
    /// RMS misfit relative to the RMS of psi over the window.
    double residual = 0.0;
    bool asymptotic = true;  ///< false when residual > 1e-3
    int points = 0;
};

/// Least-squares psi(r) ~ C / r + D over [2 support_radius, r_max / 2].
BoundaryFit boundary_fit(const GridFunction& psi, double support_radius);

struct ResonanceReport {
    double lambda_critical = 0.0;
    /// Top eigenvalue of Q at z -> 0 evaluated at lambda_critical.
    double bs_top_eigenvalue = 0.0;
    /// Relative gap between the two largest eigenvalues at unit coupling.
    double top_gap = 0.0;
    bool simple = true;
    double boundary_C = 0.0;
    double boundary_D = 0.0;
    double fit_residual = 0.0;
    /// psi on a grid reaching 40 support radii; <V, psi> = 1.
    GridFunction resonance_profile;
};

struct ResonanceOptions {
    int n = 800;
    double m = 0.5;
    double tolerance = 1e-6;
};

/// Coupling strength (of `v`, in place of v.strength) at which the d = 3
/// s-wave problem acquires a zero-energy resonance.  The bracket must
/// contain the crossing of the top Birman-Schwinger eigenvalue through 1.
ResonanceReport find_resonance_coupling(const BasePotential& v, const ScalingLaw& law,
                                        std::pair<double, double> bracket, const ResonanceOptions& opt = {});

struct TwoResonanceOptions {
    int n_inner = 48;
    int n_outer = 96;
    /// Box radius in units of the potential support.
    double box_factor = 200.0;
    double m = 0.5;
};

struct TwoResonanceMatrix {
    double z = 0.0;
    Eigen::Matrix2d entries = Eigen::Matrix2d::Zero();
    Eigen::Vector2d diagonal = Eigen::Vector2d::Zero();
    double off_diagonal = 0.0;
    double determinant = 0.0;
    double condition = 0.0;
};

/// Two identical resonant pairs sharing one spectator coordinate each, on a
/// product grid.  Channel 1 acts on x, channel 2 on y; the channel
/// directions are phi x chi0 and chi0 x phi where phi is the resonance
/// direction of the pair and chi0 the lowest box mode of the spectator.
///
/// The coupling is tuned so that each channel threshold sits exactly at
/// zero; z is then measured from that threshold.
class TwoResonanceModel {
public:
    TwoResonanceModel(const ScaledPotential& v, const TwoResonanceOptions& opt = {});

    TwoResonanceMatrix at(double z) const;

    /// Coupling actually used, in units of the base strength of `v`.
    double coupling() const { return coupling_; }
    /// Relative change from the requested coupling.
    double coupling_shift() const { return shift_; }
    /// False when the retuning moved the coupling by more than 5 %.
    bool channels_resonant() const { return shift_ <= 0.05; }
    double spectator_energy() const { return e0_; }

private:
    RadialGrid grid_;
    Eigen::VectorXd sqrt_v_;
    Eigen::VectorXd e_;
    Eigen::MatrixXd u_;
    Eigen::VectorXd phi_;
    Eigen::VectorXd chi_;
    double e0_ = 0.0;
    double coupling_ = 1.0;
    double shift_ = 0.0;
};

TwoResonanceMatrix two_resonance_matrix(const ScaledPotential& v, double z, const TwoResonanceOptions& opt = {});

}  // namespace zrange
