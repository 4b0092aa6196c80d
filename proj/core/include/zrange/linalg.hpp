#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace zrange {

/// Eigen-decomposition of a dense symmetric matrix (ascending eigenvalues).
struct SymmetricEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;  ///< columns; empty unless requested
};

/// LAPACK divide-and-conquer symmetric eigensolver.  Only the upper
/// triangle of `m` is read.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m, bool want_vectors = true);

/// Largest eigenvalue only (still a full dense solve).
double top_eigenvalue(const Eigen::MatrixXd& m);

/// max|M - M^T| / max|M|; zero for the zero matrix.
double symmetry_defect(const Eigen::MatrixXd& m);

/// Throws InvalidArgument when symmetry_defect(m) > tol.
void require_symmetric(const Eigen::MatrixXd& m, double tol, std::string_view what);

/// Spectral (2-)norm of a symmetric matrix.
double symmetric_norm(const Eigen::MatrixXd& m);

/// f(M) = V diag(f(lambda)) V^T from a precomputed decomposition.
template <class F>
Eigen::MatrixXd spectral_apply(const SymmetricEigen& eig, F&& f) {
    Eigen::VectorXd fv = eig.values.unaryExpr(f);
    return eig.vectors * fv.asDiagonal() * eig.vectors.transpose();
}

}  // namespace zrange
