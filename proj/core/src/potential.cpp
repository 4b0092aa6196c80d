#include "zrange/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace zrange {

namespace {

constexpr double kPi = std::numbers::pi;

// Profile-specific cutoffs where the tail drops below ~1e-25.
constexpr double kGaussianCut = 7.6;
constexpr double kExponentialCut = 58.0;

template <class F, unsigned Points = 31>
double gk(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, Points>::integrate(f, a, b, 6, 1e-11);
}

// Splits [a, b] at the listed breakpoints and sums gauss-kronrod pieces.
template <class F, unsigned Points = 31>
double gk_split(F&& f, double a, double b, std::vector<double> cuts) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::max(a, cuts[i]);
        const double hi = std::min(b, cuts[i + 1]);
        if (hi > lo) sum += gk<F&, Points>(f, lo, hi);
    }
    return sum;
}

}  // namespace

std::string_view to_string(Profile p) {
    switch (p) {
        case Profile::gaussian: return "gaussian";
        case Profile::square_well: return "square_well";
        case Profile::exponential: return "exponential";
    }
    return "unknown";
}

Profile profile_from_string(std::string_view name) {
    if (name == "gaussian") return Profile::gaussian;
    if (name == "square_well") return Profile::square_well;
    if (name == "exponential") return Profile::exponential;
    throw InvalidArgument("unknown potential profile '" + std::string(name) + "'");
}

void BasePotential::validate() const {
    if (!(strength > 0.0) || !std::isfinite(strength))
        throw InvalidArgument("potential strength must be positive and finite");
    if (!(range > 0.0) || !std::isfinite(range))
        throw InvalidArgument("potential range must be positive and finite");
}

double BasePotential::operator()(double r) const {
    const double x = r / range;
    switch (profile) {
        case Profile::gaussian: return strength * std::exp(-x * x);
        case Profile::square_well: return x <= 1.0 ? strength : 0.0;
        case Profile::exponential: return strength * std::exp(-x);
    }
    return 0.0;
}

double BasePotential::support_radius() const {
    switch (profile) {
        case Profile::gaussian: return kGaussianCut * range;
        case Profile::square_well: return range;
        case Profile::exponential: return kExponentialCut * range;
    }
    return range;
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::unscaled: return "unscaled";
        case Regime::contact_3d: return "contact_3d";
        case Regime::weak_contact_3d: return "weak_contact_3d";
        case Regime::contact_2d: return "contact_2d";
        case Regime::weak_contact_2d: return "weak_contact_2d";
    }
    return "unknown";
}

void ScalingLaw::validate() const {
    if (dimension != 2 && dimension != 3)
        throw InvalidArgument("dimension must be 2 or 3, got " + std::to_string(dimension));
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidArgument("epsilon must be positive, got " + std::to_string(epsilon));
    (void)regime();
}

Regime ScalingLaw::regime() const {
    if (!exponent) return Regime::unscaled;
    const int p = *exponent;
    if (dimension == 3 && p == 3) return Regime::contact_3d;
    if (dimension == 3 && p == 2) return Regime::weak_contact_3d;
    if (dimension == 2 && p == 2) return Regime::contact_2d;
    if (dimension == 2 && p == 1) return Regime::weak_contact_2d;
    throw InvalidArgument("scaling exponent p=" + std::to_string(p) + " is not a regime in d=" +
                          std::to_string(dimension) + " (allowed: d=3 p in {2,3}; d=2 p in {1,2})");
}

double sphere_area(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * kPi;
        case 3: return 4.0 * kPi;
        case 4: return 2.0 * kPi * kPi;
        default: throw InvalidArgument("sphere_area: unsupported dimension");
    }
}

ScaledPotential::ScaledPotential(BasePotential base, ScalingLaw law)
    : base_(base), law_(law) {
    base_.validate();
    law_.validate();
    if (law_.exponent) {
        length_ = law_.epsilon;
        amplitude_ = std::pow(law_.epsilon, -static_cast<double>(*law_.exponent));
    }
}

ScaledPotential scale_potential(const BasePotential& v, const ScalingLaw& law) {
    return ScaledPotential(v, law);
}

double ScaledPotential::operator()(double r) const {
    return amplitude_ * base_(r / length_);
}

ScaledPotential ScaledPotential::scaled_coupling(double factor) const {
    return ScaledPotential(base_.with_strength(base_.strength * factor), law_);
}

double ScaledPotential::integrate(double a, double b, int weight_power) const {
    const double cut = support_radius();
    b = std::min(b, cut);
    if (!(b > a)) return 0.0;
    auto f = [&](double r) { return (*this)(r) * std::pow(r, weight_power); };
    std::vector<double> cuts;
    if (base_.profile == Profile::square_well) cuts.push_back(length_ * base_.range);
    return gk_split(f, a, b, cuts);
}

PotentialNorms ScaledPotential::norms() const {
    const int d = law_.dimension;
    const double area = sphere_area(d);
    const double cut = support_radius();
    std::vector<double> cuts;
    if (base_.profile == Profile::square_well) cuts.push_back(length_ * base_.range);

    PotentialNorms out;
    out.l1 = area * integrate(0.0, cut, d - 1);
    auto sq = [&](double r) {
        const double v = (*this)(r);
        return v * v * std::pow(r, d - 1);
    };
    out.l2 = std::sqrt(area * gk_split(sq, 0.0, cut, cuts));

    if (d == 3) {
        // Angular integration leaves the kernel 8 pi^2 log((r+s)/|r-s|) / (r s).
        boost::math::quadrature::tanh_sinh<double> ts;
        auto inner = [&](double r) {
            if (r <= 0.0) return 0.0;
            const double vr = (*this)(r);
            if (vr == 0.0) return 0.0;
            auto g = [&](double s) {
                const double diff = std::abs(r - s);
                if (s <= 0.0 || diff == 0.0) return 0.0;
                return (*this)(s) * s * std::log((r + s) / diff);
            };
            std::vector<double> pts{0.0, r, cut};
            for (double c : cuts) pts.push_back(c);
            std::sort(pts.begin(), pts.end());
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
                if (pts[i + 1] > pts[i]) acc += ts.integrate(g, pts[i], pts[i + 1], 1e-12);
            }
            return vr * r * acc;
        };
        std::vector<double> outer_cuts = cuts;
        out.rollnik = 8.0 * kPi * kPi * gk_split(inner, 0.0, cut, outer_cuts);
    }
    return out;
}

ScaledPotential ScaledFamily::at(double eps) const {
    return scale_potential(base, ScalingLaw{exponent, exponent ? eps : 1.0, dimension});
}

QuadratureResult radial_quadrature(const std::function<double(double)>& f, double a, double b,
                                   std::vector<double> cuts) {
    QuadratureResult out;
    out.value = gk_split<const std::function<double(double)>&, 31>(f, a, b, cuts);
    const double fine = gk_split<const std::function<double(double)>&, 61>(f, a, b, std::move(cuts));
    const double scale = std::max(std::abs(out.value), std::abs(fine));
    out.refinement_change = scale > 0.0 ? std::abs(fine - out.value) / scale : 0.0;
    return out;
}

}  // namespace zrange
