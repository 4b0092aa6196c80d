#pragma once

#include <Eigen/Dense>

#include "zrange/grid.hpp"
#include "zrange/operator.hpp"
#include "zrange/potential.hpp"

namespace zrange {

/// s-wave kernel of (H0 + z)^(-1), H0 = -Laplacian / (2m), acting on reduced
/// functions u = r^((d-1)/2) psi with measure dr.
///
///   d = 3:  (2m / k) sinh(k r<) exp(-k r>)
///   d = 2:  2m sqrt(r r') I0(k r<) K0(k r>)
///
/// with k = sqrt(2 m z).  Only real z > 0 is accepted.
double radial_green_kernel(int d, double z, double r, double r_prime, double m = 0.5);

/// Cell measure M_i: the cell width for d = 3 (reduced u variable) and
/// the integral of r^(d-1) over the cell otherwise.
Eigen::VectorXd cell_measure(const RadialGrid& grid, int d);

/// Factor turning nodal psi values into the variable that M_i normalizes
/// (r for d = 3, 1 otherwise).
Eigen::VectorXd reduced_factor(const RadialGrid& grid, int d);

/// Nodal psi values -> orthonormal cell-basis components, and back.
Eigen::VectorXd to_basis(const RadialGrid& grid, int d, const Eigen::VectorXd& psi);
Eigen::VectorXd from_basis(const RadialGrid& grid, int d, const Eigen::VectorXd& phi);

/// Cell averages of V in the measure matching `cell_measure`; this is the
/// diagonal of the potential operator in the cell basis.
Eigen::VectorXd potential_diagonal(const ScaledPotential& v, const RadialGrid& grid, int d);

/// coefficient * (-Laplacian) restricted to the s-wave, finite-volume form.
///
/// d = 3 works with u = r psi and a Dirichlet wall at the inner boundary;
/// d = 2 and d = 4 (hyperradial) use psi with the regular condition at the
/// inner end.  The far end follows grid.outer().
Eigen::MatrixXd kinetic_matrix(const RadialGrid& grid, int d, double coefficient);

/// kinetic_matrix = V diag(sigma^2) V^T from the bidiagonal edge factor.
/// Singular values of a bidiagonal matrix keep full relative accuracy, so
/// this stays exact on strongly graded (many-decade logarithmic) grids where
/// a dense eigensolve of the kinetic matrix loses its small eigenvalues.
struct KineticRoot {
    Eigen::VectorXd sigma;    ///< descending, >= 0
    Eigen::MatrixXd vectors;  ///< orthonormal columns
    /// kinetic_matrix^(1/2).
    Eigen::MatrixXd sqrt() const;
    /// kinetic_matrix^(-1/2); throws when a sigma vanishes.
    Eigen::MatrixXd inverse_sqrt() const;
};
KineticRoot kinetic_root(const RadialGrid& grid, int d, double coefficient);

/// H0 = -Laplacian / (2m) on the grid.  Symmetric positive semidefinite.
OperatorMatrix discretize_h0(const RadialGrid& grid, int d, double m = 0.5);

/// Symmetric square root of a positive semidefinite matrix.  Eigenvalues
/// down to -1e-10 (relative to the largest) are clamped to zero; anything
/// more negative is rejected.
Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& m);
OperatorMatrix operator_sqrt(const OperatorMatrix& m);

/// (M + zI)^(-1) as a dense matrix; throws NumericalError carrying the
/// smallest |eigenvalue| when the shifted matrix is singular.
Eigen::MatrixXd resolvent_matrix(const Eigen::MatrixXd& m, double z);

/// Solves (M + zI) g = f.  `f.values` are cell-basis components.
GridFunction solve_resolvent(const OperatorMatrix& m, double z, const GridFunction& f);

}  // namespace zrange
