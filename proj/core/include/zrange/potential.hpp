#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zrange {

/// Thrown when an input violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure cannot produce a trustworthy result.
/// `value` carries the diagnostic quantity (smallest singular value,
/// smallest eigenvalue, residual, ...) that triggered the failure.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double value)
        : std::runtime_error(what), value_(value) {}
    double value() const noexcept { return value_; }

private:
    double value_;
};

enum class Profile { gaussian, square_well, exponential };

std::string_view to_string(Profile p);
Profile profile_from_string(std::string_view name);

/// Radial profile with coupling `strength` and length scale `range`.
///
/// Values are stored nonnegative; every Hamiltonian in the toolkit applies
/// them with a minus sign (attractive convention).
struct BasePotential {
    Profile profile = Profile::gaussian;
    double strength = 1.0;
    double range = 1.0;

    void validate() const;
    double operator()(double r) const;

    /// Radius beyond which the profile is below ~1e-25 of its peak
    /// (exactly `range` for the square well).
    double support_radius() const;

    BasePotential with_strength(double s) const {
        BasePotential p = *this;
        p.strength = s;
        return p;
    }
};

/// Regime selected by the (exponent, dimension) pair.
enum class Regime { unscaled, contact_3d, weak_contact_3d, contact_2d, weak_contact_2d };

std::string_view to_string(Regime r);

/// V^eps(r) = eps^(-p) V(r / eps).  An empty exponent leaves V unscaled.
struct ScalingLaw {
    std::optional<int> exponent;
    double epsilon = 1.0;
    int dimension = 3;

    static ScalingLaw unscaled(int dimension) { return {std::nullopt, 1.0, dimension}; }
    static ScalingLaw contact(int dimension, double eps) { return {dimension, eps, dimension}; }
    static ScalingLaw weak_contact(int dimension, double eps) { return {dimension - 1, eps, dimension}; }

    void validate() const;
    Regime regime() const;
};

struct PotentialNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    /// Double integral of V(x)V(y)/|x-y|^2; only defined in d = 3.
    std::optional<double> rollnik;
};

/// A base profile composed with a scaling law.  Immutable.
class ScaledPotential {
public:
    ScaledPotential() = default;
    ScaledPotential(BasePotential base, ScalingLaw law);

    double operator()(double r) const;

    const BasePotential& base() const { return base_; }
    const ScalingLaw& law() const { return law_; }
    int dimension() const { return law_.dimension; }

    /// Multiplicative prefactor eps^(-p) (1 when unscaled).
    double amplitude() const { return amplitude_; }
    /// Length scale eps (1 when unscaled).
    double length_scale() const { return length_; }
    double support_radius() const { return length_ * base_.support_radius(); }

    /// Integral of V over [a, b] against r^(weight_power) dr.  Accurate
    /// across the square-well discontinuity.
    double integrate(double a, double b, int weight_power) const;

    /// L1, L2 and (d = 3) Rollnik norms in d-dimensional measure.
    PotentialNorms norms() const;

    /// Same profile and law with the coupling multiplied by `factor`.
    ScaledPotential scaled_coupling(double factor) const;

private:
    BasePotential base_;
    ScalingLaw law_;
    double amplitude_ = 1.0;
    double length_ = 1.0;
};

/// Composes a base profile with a scaling law after validating both.
ScaledPotential scale_potential(const BasePotential& v, const ScalingLaw& law);

/// A base profile with a scaling exponent but no fixed epsilon, for sweeps.
struct ScaledFamily {
    BasePotential base;
    std::optional<int> exponent;
    int dimension = 3;

    ScaledPotential at(double eps) const;
};

struct QuadratureResult {
    double value = 0.0;
    /// |value - value at doubled order| / |value|; 0 when both vanish.
    double refinement_change = 0.0;
};

/// Integral of f over [a, b] by adaptive Gauss-Kronrod, split at `cuts`.
/// The same integral at twice the rule order is reported alongside.
QuadratureResult radial_quadrature(const std::function<double(double)>& f, double a, double b,
                                   std::vector<double> cuts = {});

/// Surface area of the unit sphere S^(d-1).
double sphere_area(int d);

}  // namespace zrange
