#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zrange/grid.hpp"
#include "zrange/spectrum.hpp"

namespace zrange {

/// contact_image:  sqrt(-Lap) - C / r
/// weak_image:     sqrt(-Lap) - C log(1/r) for r <= 1, zero beyond
/// three_body_2d:  (1/m)(-Lap_4) - C / r on the four-dimensional hyperradius
enum class ImageKind { contact_image, weak_image, three_body_2d };

const char* to_string(ImageKind k);

struct EffectiveOperator {
    ImageKind kind = ImageKind::contact_image;
    double C = 0.0;
    int d = 3;
    double m = 1.0;
    RadialGrid grid;
    Eigen::MatrixXd entries;
};

/// Grids must be logarithmic with r_min <= 1e-4 and r_max >= 1e2.
void require_scale_bracket(const RadialGrid& grid);

/// Cell averages of the singular part (1/r or the cut-off logarithm) in the
/// measure of `cell_measure(grid, d)`.
Eigen::VectorXd image_potential_diagonal(ImageKind kind, const RadialGrid& grid, int d);

/// `m` is used by three_body_2d only (d is then forced to 4); the images
/// use sqrt(-Lap) on the s-wave of R^d, d in {2, 3}.
EffectiveOperator effective_operator(ImageKind kind, double C, int d, const RadialGrid& grid, double m = 1.0);

/// Couplings C_1 < C_2 < ... at which successive eigenvalues of the image
/// operator cross zero: the reciprocals of the positive eigenvalues of
/// D^(1/2) K^(-1) D^(1/2), K the kinetic part and D the singular profile.
/// The negative-eigenvalue count at coupling C is the number of C_k below C.
std::vector<double> image_thresholds(ImageKind kind, int d, const RadialGrid& grid, double m = 1.0);

enum class GeometricClass { efimov, thomas, not_geometric };
const char* to_string(GeometricClass c);

/// Behaviour under a change of cutoffs, from rebuilding the operator on
/// extended grids with the same points per decade.
struct ScaleProbes {
    /// |E_1| on the grid with r_min / 10 over |E_1| on the original grid.
    double deepest_factor = 1.0;
    bool deepest_diverges = false;  ///< deepest_factor > 2
    /// Negative states gained with r_max * 10.
    int shallow_added = 0;
    /// |E_{N+1}| / |E_N| on the enlarged grid, N the original count.
    double added_ratio = 0.0;
};

struct GeometricRatio {
    double ratio = 0.0;      ///< geometric mean of |E_{k+1}| / |E_k|, levels ascending
    double deviation = 0.0;  ///< max |r_k - ratio| / ratio over the window
    int first_level = 0;     ///< 1-based, deepest = 1
    int last_level = 0;
    GeometricClass classification = GeometricClass::not_geometric;
};

/// Window defaults to all negative levels except the deepest and the
/// shallowest.  Needs at least 4 negative eigenvalues.  Classification:
/// not_geometric when deviation > 10 %; otherwise thomas when the probes
/// show the deepest level diverging, efimov when they only show new shallow
/// levels (or when no probes are given).
GeometricRatio geometric_ratio(const SpectrumReport& spectrum, std::optional<int> first_level = std::nullopt,
                               std::optional<int> last_level = std::nullopt,
                               const std::optional<ScaleProbes>& probes = std::nullopt);

ScaleProbes scale_probes(const EffectiveOperator& op);

}  // namespace zrange
