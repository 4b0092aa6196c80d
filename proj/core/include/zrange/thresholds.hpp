#pragma once

#include <utility>
#include <vector>

#include "zrange/effective_operator.hpp"

namespace zrange {

struct ThresholdOptions {
    double r_max = 100.0;
    /// Coarsest inner cutoff; each refinement divides it by 10.
    double r_min = 1e-4;
    /// Refinements beyond the coarsest grid (>= 2).
    int refinements = 3;
    int points_per_decade = 60;
};

struct ThresholdReport {
    ImageKind kind = ImageKind::contact_image;
    int d = 3;
    /// Positivity threshold: largest C with no negative eigenvalue.
    double C0 = 0.0;
    /// Onset of unbounded growth: smallest C at which refining r_min by a
    /// decade adds at least one bound state.  +inf when the count stays
    /// bounded (no accumulation).
    double C1 = 0.0;
    bool accumulates = true;
    /// max relative change of C0, C1 under the last refinement.
    double grid_refinement_drift = 0.0;
    bool converged = true;  ///< drift < 1 %

    std::vector<double> r_mins;
    /// Zero-crossing couplings per grid, ascending.
    std::vector<std::vector<double>> crossings;
    /// Estimates from successive grid pairs; the last one is reported.
    std::vector<double> c0_estimates, c1_estimates;
};

/// Negative eigenvalue count of the image operator at coupling C on the
/// grid with index `grid` of the report's ladder.
int count_negative(const ThresholdReport& rep, double C, std::size_t grid);

/// C0 and C1 from a ladder of grids whose r_min drops by one decade per
/// step.  For the contact image the level structure is scale invariant, so
/// C0 is extrapolated in 1/L^2 (L = log(r_max/r_min)) and C1 is the coupling
/// at which the interpolated counting staircases of neighbouring grids differ
/// by exactly one.  Throws InvalidArgument when the bracket does not contain
/// the thresholds.
ThresholdReport find_thresholds(ImageKind kind, int d, std::pair<double, double> bracket,
                                const ThresholdOptions& opt = {});

}  // namespace zrange
