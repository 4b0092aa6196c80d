#include "zrange/grid.hpp"

#include <cmath>
#include <string>

#include "zrange/potential.hpp"

namespace zrange {

RadialGrid::RadialGrid(std::vector<double> nodes, double inner_wall, double outer_wall, Spacing spacing,
                       OuterBoundary outer)
    : nodes_(std::move(nodes)), inner_wall_(inner_wall), outer_wall_(outer_wall), spacing_(spacing), outer_(outer) {
    const std::size_t n = nodes_.size();
    if (n < 2) throw InvalidArgument("grid needs at least two nodes");
    if (!(inner_wall_ >= 0.0) || !(nodes_.front() > inner_wall_))
        throw InvalidArgument("grid nodes must be positive and lie beyond the inner wall");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("grid nodes must be strictly increasing");
    }
    if (outer_ == OuterBoundary::neumann) {
        outer_wall_ = nodes_.back();
    } else if (!(outer_wall_ > nodes_.back())) {
        throw InvalidArgument("Dirichlet outer wall must lie beyond the last node");
    }

    lo_.resize(n);
    hi_.resize(n);
    weights_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i == 0 ? inner_wall_ : nodes_[i - 1];
        lo_[i] = 0.5 * (left + nodes_[i]);
        if (i + 1 < n) {
            hi_[i] = 0.5 * (nodes_[i] + nodes_[i + 1]);
        } else {
            hi_[i] = outer_ == OuterBoundary::neumann ? nodes_[i] : 0.5 * (nodes_[i] + outer_wall_);
        }
        weights_[i] = hi_[i] - lo_[i];
    }
}

double RadialGrid::integrate(std::span<const double> f) const {
    if (f.size() != nodes_.size()) throw InvalidArgument("integrate: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i];
    return s;
}

double RadialGrid::integrate(const Eigen::VectorXd& f) const {
    return integrate(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
}

RadialGrid RadialGrid::dilated(double s) const {
    if (!(s > 0.0)) throw InvalidArgument("dilation factor must be positive");
    std::vector<double> scaled(nodes_);
    for (double& r : scaled) r *= s;
    return RadialGrid(std::move(scaled), inner_wall_ * s, outer_wall_ * s, spacing_, outer_);
}

RadialGrid RadialGrid::with_outer(OuterBoundary outer) const {
    double wall = outer_wall_;
    if (outer == OuterBoundary::dirichlet && outer_ == OuterBoundary::neumann) {
        const std::size_t n = nodes_.size();
        wall = 2.0 * nodes_[n - 1] - nodes_[n - 2];
    }
    return RadialGrid(nodes_, inner_wall_, wall, spacing_, outer);
}

GridFunction::GridFunction(RadialGrid g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.size())
        throw InvalidArgument("grid function length does not match grid size");
}

RadialGrid build_grid(int n, double r_max, Spacing spacing, double r_min) {
    if (n < 8) throw InvalidArgument("grid size n=" + std::to_string(n) + " too small (need n >= 8)");
    if (!(r_max > 0.0)) throw InvalidArgument("r_max must be positive");
    std::vector<double> nodes(static_cast<std::size_t>(n));
    switch (spacing) {
        case Spacing::linear: {
            const double h = r_max / n;
            for (int i = 0; i < n; ++i) nodes[i] = (i + 1) * h;
            nodes.back() = r_max;
            return RadialGrid(std::move(nodes), 0.0, r_max + h, Spacing::linear);
        }
        case Spacing::logarithmic: {
            if (r_min <= 0.0) r_min = r_max * 1e-6;
            if (!(r_min < r_max)) throw InvalidArgument("logarithmic grid needs r_min < r_max");
            const double step = std::log(r_max / r_min) / (n - 1);
            for (int i = 0; i < n; ++i) nodes[i] = r_min * std::exp(step * i);
            nodes.front() = r_min;
            nodes.back() = r_max;
            const double q = std::exp(step);
            return RadialGrid(std::move(nodes), r_min / q, r_max * q, Spacing::logarithmic);
        }
        case Spacing::composite:
            throw InvalidArgument("use build_support_grid for composite grids");
    }
    throw InvalidArgument("unknown spacing");
}

RadialGrid build_support_grid(double support, int n_inner, double r_max, int n_outer, OuterBoundary outer) {
    if (!(support > 0.0)) throw InvalidArgument("support radius must be positive");
    if (n_inner < 8) throw InvalidArgument("support grid needs n_inner >= 8");
    if (n_outer < 0) throw InvalidArgument("n_outer must be nonnegative");
    if (n_outer > 0 && !(r_max > support)) throw InvalidArgument("r_max must exceed the support radius");
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n_inner + n_outer));
    const double h = support / n_inner;
    for (int i = 1; i <= n_inner; ++i) nodes.push_back(i * h);
    nodes.back() = support;
    double q = 1.0 + h / support;
    if (n_outer > 0) {
        q = std::pow(r_max / support, 1.0 / n_outer);
        for (int i = 1; i <= n_outer; ++i) nodes.push_back(support * std::pow(q, i));
        nodes.back() = r_max;
    }
    const double last = nodes.back();
    const double wall = n_outer > 0 ? last * q : last + h;
    return RadialGrid(std::move(nodes), 0.0, wall, n_outer > 0 ? Spacing::composite : Spacing::linear, outer);
}

}  // namespace zrange
