#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "zrange/grid.hpp"
#include "zrange/potential.hpp"

namespace zrange {

/// Free two-coordinate Hamiltonian after the partial scaling x -> x / eps:
///
///   (1/eps^2) k (-Lap_x) + eps^2 k (-Lap_y) + eps (1/m) (-grad_x . grad_y),
///
/// k = (m + 1) / (2m), each coordinate reduced to its s-wave.  The angular
/// average of grad_x . grad_y over two independent s-waves vanishes, so the
/// cross block is identically zero here; its coefficient is still reported.
struct ScaledFreeHamiltonian {
    double eps = 1.0;
    double m = 0.5;
    Eigen::MatrixXd x_block;  ///< (-Lap_x) on grid_x, coefficient k
    Eigen::MatrixXd y_block;  ///< (-Lap_y) on grid_y, coefficient k
    double x_coefficient = 1.0;
    double y_coefficient = 1.0;
    double cross_coefficient = 1.0;

    Eigen::Index size() const { return x_block.rows() * y_block.rows(); }
    /// Dense Kronecker-sum matrix, x index fastest.
    Eigen::MatrixXd dense() const;
};

/// Rejects product dimensions above `cap`.
ScaledFreeHamiltonian scaled_h0(double eps, double m, const RadialGrid& grid_x, const RadialGrid& grid_y,
                                std::int64_t cap = 10000);

/// h_x (x) 1 + 1 (x) h_y acting on value matrices F(i, j), i on x, j on y.
struct ProductOperator {
    Eigen::MatrixXd hx;
    Eigen::MatrixXd hy;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& f) const { return hx * f + f * hy.transpose(); }
};

/// (h_x (x) 1 + 1 (x) h_y + z)^(-1) through the two one-dimensional
/// eigendecompositions.
class ProductResolvent {
public:
    ProductResolvent(const ProductOperator& h, double z);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& f) const;

private:
    Eigen::MatrixXd ux_, uy_;
    Eigen::MatrixXd denom_;
};

/// Discrete zero-range limit on the product grid: each pair interaction is
/// replaced by the rank-one point interaction that removes the inner-wall
/// coupling of the first cell (zero-energy solution constant near the
/// origin, i.e. psi ~ 1/r).
///
///   W = sum_{a,b} R0 B_a K_ab B_b^T R0,  K = (1 - Q)^(-1),
///
/// with B_1 = sqrt(c) e_0 (x) 1 and B_2 = 1 (x) sqrt(c) e_0.  The a = b
/// terms are the two channels; the a != b terms carry the simultaneous
/// interaction of both pairs.
class LimitResolvent {
public:
    /// `c_x`, `c_y` = 0 switches the corresponding channel off.
    LimitResolvent(const Eigen::MatrixXd& hx, const Eigen::MatrixXd& hy, double c_x, double c_y, double z);

    double z() const { return z_; }
    /// sqrt(z) / (4 pi) |<sqrt(V), psi>|^2.
    double denominator_constant = 0.0;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& f) const;
    /// (H0 + z)^(-1) f.
    Eigen::MatrixXd apply_free(const Eigen::MatrixXd& f) const;
    /// Single channel (1 or 2): R0 B_a (1 - Q_aa)^(-1) B_a^T R0.
    Eigen::MatrixXd apply_channel(const Eigen::MatrixXd& f, int channel) const;
    /// Per spectator mode denominators 1 - Q_11 of channel 1.
    const Eigen::VectorXd& channel_denominators() const { return d1_; }
    Eigen::MatrixXd dense() const;
    Eigen::Index nx() const { return ux_.rows(); }
    Eigen::Index ny() const { return uy_.rows(); }

    /// The limiting Hamiltonian: h with the point interaction in each pair.
    const ProductOperator& limit_hamiltonian() const { return h_inf_; }
    const ProductOperator& free_hamiltonian() const { return h0_; }

private:
    ProductOperator h0_, h_inf_;
    double z_ = 0.0;
    double cx_ = 0.0, cy_ = 0.0;
    Eigen::MatrixXd ux_, uy_;
    Eigen::VectorXd ex_, ey_;
    Eigen::MatrixXd k_;  ///< 2x2 channel block inverse, (nx + ny) square
    Eigen::MatrixXd k11_, k22_;
    Eigen::VectorXd d1_;
};

/// Coupling of the first-cell wall edge in the cell basis (d = 3).
double point_interaction_strength(const RadialGrid& grid, double m);

/// Builds the limit operator for identical channels from the resonance psi
/// of the (unscaled, resonant) potential `v`.  Rejects psi with
/// |<V, psi> - 1| > 1e-3 and |<sqrt(V), psi>| < 1e-12.
LimitResolvent limit_w(double z, const GridFunction& psi, const ScaledPotential& v, const RadialGrid& grid_x,
                       const RadialGrid& grid_y, double m = 0.5);

struct LimitIdentityReport {
    std::vector<double> residuals;
    double max_residual = 0.0;
};

/// || (R0 + W)(H + z) f - f || / ||f|| for each f.
LimitIdentityReport verify_limit_identity(const LimitResolvent& w, const ProductOperator& h, double z,
                                          const std::vector<Eigen::MatrixXd>& fs);

/// Coupling (multiple of the unit-strength profile) that makes the d = 3
/// finite-volume problem on `grid` resonant: the zero-energy solution from
/// the origin has zero slope past the potential support.  Smallest such
/// coupling.
double discrete_resonance_coupling(const ScaledPotential& unit, const RadialGrid& grid, double m = 0.5);

/// Four pieces R0 B_a K_ab B_b R0 of the resolvent difference for
/// H = H0 - V_x (x) 1 - 1 (x) V_y, assembled densely (small grids only).
struct FourTermAssembly {
    Eigen::MatrixXd t11, t12, t21, t22;
    Eigen::MatrixXd sum() const { return t11 + t12 + t21 + t22; }
};
FourTermAssembly four_term_assembly(const Eigen::VectorXd& vx, const Eigen::VectorXd& vy, const Eigen::MatrixXd& hx,
                                    const Eigen::MatrixXd& hy, double z);

struct ConvergenceReport {
    std::vector<double> epsilons;
    std::vector<double> couplings;
    /// discrepancy[k][f] = ||W^eps_k f - W f|| / ||f||.
    std::vector<std::vector<double>> discrepancy;
    bool monotone = true;
    /// Smallest over f of first / last discrepancy.
    double reduction = 0.0;
};

/// W^eps(z) = (H^eps + z)^(-1) - (H0 + z)^(-1) for H^eps = H0 - V^eps(x) - V^eps(y),
/// V^eps weak-contact scaled with the coupling retuned to the discrete
/// resonance at each eps, compared against the limit operator.
ConvergenceReport convergence_study(const BasePotential& v, double z, const std::vector<double>& epsilons,
                                    const std::vector<Eigen::MatrixXd>& fs, const RadialGrid& grid, double m = 0.5);

/// Random Gaussian bumps on the product grid, as cell-basis value matrices.
std::vector<Eigen::MatrixXd> random_bumps(const RadialGrid& gx, const RadialGrid& gy, int count, std::uint64_t seed);

}  // namespace zrange
