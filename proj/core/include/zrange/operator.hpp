#pragma once

#include <string>

#include <Eigen/Dense>

#include "zrange/grid.hpp"

namespace zrange {

/// Dense symmetric operator on a radial grid.
///
/// Entries are expressed in the orthonormal cell basis: component i is
/// sqrt(M_i) times the nodal value of the reduced function, where M_i is the
/// cell measure returned by `cell_measure`.  With this convention the
/// discrete L2 inner product is the plain Euclidean one.
struct OperatorMatrix {
    Eigen::MatrixXd entries;
    RadialGrid grid;
    double mass = 0.5;
    int dimension = 3;
    std::string label;

    OperatorMatrix() = default;
    OperatorMatrix(Eigen::MatrixXd m, RadialGrid g, double mass, int dimension, std::string label);

    Eigen::Index size() const { return entries.rows(); }
};

}  // namespace zrange
