#pragma once

#include <optional>
#include <vector>

#include "pmdq/scan.hpp"

namespace pmdq {

struct DipFeature {
    double center = 0.0;
    double center_sigma = 0.0;  // standard error from the flank fits, 0 for the vertex fallback
    double half_width = 0.0;    // half the base-to-base width
    double fwhm = 0.0;          // full width at half excursion
    double excursion = 0.0;     // signed, relative to the baseline
    double baseline = 0.0;
    double prominence = 0.0;
    std::optional<double> visibility;  // |excursion| / baseline when that is <= 1
    bool overlap_flag = false;
    bool flank_fit = false;  // false when the vertex fallback was used
};

struct DipOptions {
    double min_prominence = 0.05;
    /// Features closer than 2 tau_minus are flagged; zero disables the rule.
    double tau_minus = 0.0;
    /// Background level; the median of the scan when not given.
    std::optional<double> baseline;
};

/// Local extrema whose prominence and distance from the baseline both
/// reach `min_prominence`. Centers come from intersecting straight-line
/// fits to the two flanks (20-80% of the excursion) when each flank has at
/// least four points, otherwise from the vertex of a parabola through the
/// three innermost points. Sorted by center.
std::vector<DipFeature> find_dips(const ScanResult& scan, const DipOptions& options);
std::vector<DipFeature> find_dips(const ScanResult& scan, double min_prominence, double tau_minus = 0.0);

/// Moving average over `window` (axis units), same length as the input.
/// Points near the edges average over what is available.
Eigen::VectorXd boxcar(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double window);

}  // namespace pmdq
