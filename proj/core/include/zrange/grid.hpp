#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace zrange {

enum class Spacing { linear, logarithmic, composite };

/// Boundary condition imposed on the reduced radial function at the far end.
/// `neumann` places the boundary on the last node; it reproduces the
/// zero-energy half-line kernel on a grid that only covers a potential's
/// support.
enum class OuterBoundary { dirichlet, neumann };

/// Strictly increasing positive nodes with finite-volume cells.
///
/// Node i owns the cell [cell_lo(i), cell_hi(i)] bounded by midpoints; the
/// first cell starts halfway to the inner wall and the last ends halfway to
/// the outer wall (Dirichlet) or on the last node (Neumann).  `weights()` are
/// the cell widths, so `integrate` is the trapezoid rule for functions that
/// vanish at the walls.
class RadialGrid {
public:
    RadialGrid() = default;

    /// Generic constructor; validates ordering and wall placement.
    RadialGrid(std::vector<double> nodes, double inner_wall, double outer_wall, Spacing spacing,
               OuterBoundary outer = OuterBoundary::dirichlet);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double node(std::size_t i) const { return nodes_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    double cell_lo(std::size_t i) const { return lo_[i]; }
    double cell_hi(std::size_t i) const { return hi_[i]; }

    double r_min() const { return nodes_.front(); }
    double r_max() const { return nodes_.back(); }
    double inner_wall() const { return inner_wall_; }
    /// Position of the far boundary (last node when Neumann).
    double outer_wall() const { return outer_wall_; }
    Spacing spacing() const { return spacing_; }
    OuterBoundary outer() const { return outer_; }

    /// Sum of w_i f_i.
    double integrate(std::span<const double> f) const;
    double integrate(const Eigen::VectorXd& f) const;

    /// Every node, wall and cell boundary multiplied by s > 0.
    RadialGrid dilated(double s) const;

    /// Same nodes with a different far boundary.
    RadialGrid with_outer(OuterBoundary outer) const;

    Eigen::Map<const Eigen::VectorXd> nodes_vec() const {
        return {nodes_.data(), static_cast<Eigen::Index>(nodes_.size())};
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> lo_;
    std::vector<double> hi_;
    double inner_wall_ = 0.0;
    double outer_wall_ = 0.0;
    Spacing spacing_ = Spacing::linear;
    OuterBoundary outer_ = OuterBoundary::dirichlet;
};

/// Values sampled on a grid.
struct GridFunction {
    RadialGrid grid;
    Eigen::VectorXd values;

    GridFunction() = default;
    GridFunction(RadialGrid g, Eigen::VectorXd v);
};

/// `n` nodes ending at `r_max`.
///
/// linear: r_i = i * r_max / n, i = 1..n, walls at 0 and r_max + h.
/// logarithmic: geometric from `r_min` (default r_max * 1e-6) to r_max,
/// walls one ratio beyond each end.
RadialGrid build_grid(int n, double r_max, Spacing spacing, double r_min = 0.0);

/// Uniform nodes on (0, support] followed by `n_outer` geometric nodes up to
/// `r_max`.  The support edge is always a node.
RadialGrid build_support_grid(double support, int n_inner, double r_max = 0.0, int n_outer = 0,
                              OuterBoundary outer = OuterBoundary::neumann);

}  // namespace zrange
