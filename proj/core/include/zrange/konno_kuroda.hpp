#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zrange/grid.hpp"
#include "zrange/operator.hpp"
#include "zrange/potential.hpp"

namespace zrange {

enum class Assembly { konno_kuroda, direct };

struct ResolventDifference {
    OperatorMatrix matrix;  ///< R(z) - R0(z), R(z) = (H0 - V + z)^(-1)
    double z = 0.0;
    Assembly assembly = Assembly::konno_kuroda;
    /// Smallest singular value of 1 - Q(z) (konno_kuroda only).
    double min_singular = 0.0;
};

/// R0 B (1 - Q)^(-1) B R0 from a potential diagonal and H0 (cell basis).
/// Throws NumericalError carrying the smallest singular value of 1 - Q
/// when it is below 1e-10.
Eigen::MatrixXd konno_kuroda_matrix(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z,
                                    double* min_singular = nullptr);

/// (H0 - V + z)^(-1) - (H0 + z)^(-1) by two dense inversions.
Eigen::MatrixXd direct_difference_matrix(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z);

ResolventDifference assemble_resolvent_diff(const ScaledPotential& v, double z, const RadialGrid& grid, int d = 3,
                                            double m = 0.5);
ResolventDifference direct_resolvent_diff(const ScaledPotential& v, double z, const RadialGrid& grid, int d = 3,
                                          double m = 0.5);

/// First Born term R0 V R0.
Eigen::MatrixXd born_term(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0, double z);

/// Binding energies |E_n| of H0 - V located as the points where 1 - Q(z)
/// turns singular (an eigenvalue of Q crosses 1), for z in [z_floor, inf).
/// Deepest first.
std::vector<double> bound_states_by_sweep(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& h0,
                                          double z_floor = 1e-8, double rel_tol = 1e-12);

struct DefectReport {
    std::vector<double> epsilons;  ///< strictly decreasing
    std::vector<double> values;
    /// Relative change of each value when the quadrature order is doubled.
    std::vector<double> refinement_change;
    double fitted_exponent = 0.0;
    /// False when some value moved by more than 1 % under refinement.
    bool converged = true;
};

/// || sqrt(V1^eps) sqrt(U^eps) ||_1 in d dimensions, U = sum of `u`.
DefectReport cross_term_norm(const ScaledFamily& v1, const std::vector<ScaledFamily>& u,
                             const std::vector<double>& epsilons);

/// || (sqrt(V2^eps) + sqrt(V3))^2 - V2^eps - V3 ||_1.
DefectReport additivity_defect(const ScaledFamily& v2, const ScaledFamily& v3, const std::vector<double>& epsilons);

struct IndependenceReport {
    double epsilon = 0.0;
    double z = 0.0;
    /// Lowest eigenvalues of H0 - V1 - V2 - V3.
    std::vector<double> actual;
    /// Same levels read off R0 + sum_k (R_k - R0).
    std::vector<double> predicted;
    double discrepancy = 0.0;
};

struct IndependenceInputs {
    std::optional<ScaledFamily> v1;  ///< contact law
    std::optional<ScaledFamily> v2;  ///< weak-contact law
    std::optional<ScaledFamily> v3;  ///< unscaled
};

/// Compares the low spectrum of the full operator with the one predicted by
/// adding single-potential resolvent differences (each assembled by
/// Konno-Kuroda).  `levels` lowest eigenvalues are compared.
IndependenceReport independence_spectrum_check(const IndependenceInputs& in, double eps, double z,
                                               const RadialGrid& grid, int levels = 4, double m = 0.5);

}  // namespace zrange
