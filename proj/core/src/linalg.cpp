#include "zrange/linalg.hpp"

#include <cmath>
#include <string>

#include <lapacke.h>

#include "zrange/potential.hpp"

namespace zrange {

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m, bool want_vectors) {
    if (m.rows() != m.cols()) throw InvalidArgument("symmetric_eigen: matrix must be square");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    SymmetricEigen out;
    out.values.resize(n);
    if (n == 0) return out;
    Eigen::MatrixXd a = m;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'U', n, a.data(), n,
                                           out.values.data());
    if (info != 0) throw NumericalError("dsyevd failed with info=" + std::to_string(info), info);
    if (want_vectors) out.vectors = std::move(a);
    return out;
}

double top_eigenvalue(const Eigen::MatrixXd& m) {
    const auto eig = symmetric_eigen(m, false);
    return eig.values.size() ? eig.values(eig.values.size() - 1) : 0.0;
}

double symmetry_defect(const Eigen::MatrixXd& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

void require_symmetric(const Eigen::MatrixXd& m, double tol, std::string_view what) {
    if (m.rows() != m.cols()) throw InvalidArgument(std::string(what) + ": matrix is not square");
    const double defect = symmetry_defect(m);
    if (defect > tol)
        throw InvalidArgument(std::string(what) + ": matrix is not symmetric (relative defect " +
                              std::to_string(defect) + ")");
}

double symmetric_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    const auto eig = symmetric_eigen(m, false);
    return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

}  // namespace zrange
