#ifndef LSINV_DETECT_HPP
#define LSINV_DETECT_HPP

#include <optional>
#include <vector>

#include "lsinv/invariants.hpp"

namespace lsinv {

/// Maximal run of samples with |Q'| at or below the constancy floor.
/// Runs are circular when the profile wraps; a run may straddle the
/// supercell boundary, in which case x_end < x_begin.
struct Plateau {
  int begin = 0; // first sample index
  int count = 0;
  double x_begin = 0.0;
  double x_end = 0.0;
  Complex value{0.0, 0.0}; // mean of Q over the run
  double spread = 0.0;     // max |Q - value| over the run
};

/// Complementary run where |Q'| exceeds the floor.
struct Deviation {
  int begin = 0;
  int count = 0;
  double x_begin = 0.0;
  double x_end = 0.0;
  double length = 0.0; // count * dx
  double peak_slope = 0.0;
};

struct SymmetryReport {
  double floor = 0.0;
  double spacing = 0.0;   // grid dx of the segmented profile
  double supercell = 0.0; // wrap period (0 for non-periodic profiles)
  std::vector<Plateau> plateaus;
  std::vector<Deviation> deviations;
  /// One estimate per resolvable deviation, aligned with `deviations`
  /// minus unresolved clusters.
  std::vector<double> defect_estimates;
  /// Deviations whose length exceeds the expected L + w + 2A by > 25%.
  std::vector<bool> width_flags;
  /// Indices into `deviations` that are too long to be a single defect
  /// (length > 2 (L + w + 2A)); reported as a cluster, never split.
  std::vector<std::size_t> unresolved_clusters;
  std::optional<double> inferred_period;
};

/// Constancy floor on |Q'|: max(1e-9 max|Q| per unit length,
/// 5 x median |Q'|). A config knob everywhere it is consumed.
double default_constancy_floor(const CurrentProfile& profile);

/// Partition the profile into plateaus (runs with |Q'| <= floor) and
/// deviation intervals. floor <= 0 selects the default floor. Sub-floor
/// islands shorter than four samples inside a deviation (slope zero
/// crossings) are folded into the deviation.
SymmetryReport segment_constancy(const CurrentProfile& profile,
                                 double floor = 0.0);

/// Defect-center estimates from deviation intervals. For translation by L
/// the deviation sits on (X - L - w/2 - A, X + w/2 + A), so the estimate
/// is the interval midpoint + L/2. For inversion the midpoint itself is
/// reported; each defect also shadows at its mirror image, which a scan
/// over inversion centers disambiguates.
void locate_defects(SymmetryReport& report, const SymmetryTransform& transform,
                    double support_w, double driving_amplitude);

struct PeriodScan {
  std::vector<double> shifts;
  std::vector<double> scores; // constancy score per scan row
  std::vector<double> candidates; // local minima below half the median
  std::optional<double> period;   // smallest candidate among the best
  bool flat = false;              // no minimum below half the median
};

/// Infer the lattice period from a shift scan: score each row with the
/// constancy functional restricted to [trim_lo, trim_hi] (which should
/// exclude defect neighbourhoods), then pick the best local minimum,
/// preferring the smallest shift among score-equivalent minima
/// (multiples of the period also score low).
PeriodScan infer_period(const ScanMap& scan, double trim_lo, double trim_hi);

} // namespace lsinv

#endif
