#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zrange/operator.hpp"

namespace zrange {

struct SpectrumReport {
    std::vector<double> eigenvalues;  ///< ascending
    int count_negative = 0;
    /// |E_{n+1}| / |E_n| for consecutive negative eigenvalues (ascending order,
    /// so values below 1 mean the levels approach zero).
    std::vector<double> ratios;
    std::optional<Eigen::MatrixXd> eigenvectors;

    std::vector<double> negative() const;
};

/// Builds a report (count, ratios) from already computed eigenvalues.
SpectrumReport make_spectrum(std::vector<double> eigenvalues);

/// Full eigendecomposition.  Rejects inputs whose relative asymmetry exceeds
/// 1e-10.
SpectrumReport eig_spectrum(const Eigen::MatrixXd& m, bool want_vectors = false);
SpectrumReport eig_spectrum(const OperatorMatrix& m, bool want_vectors = false);

}  // namespace zrange
