#include "lsinv/detect.hpp"

#include <algorithm>
#include <cmath>

#include "lsinv/errors.hpp"

namespace lsinv {

namespace {

constexpr int kMinPlateauRun = 4;

double wrap_position(double x, double supercell) {
  if (supercell <= 0.0)
    return x;
  double u = std::remainder(x, supercell);
  if (u >= supercell / 2.0)
    u -= supercell;
  return u;
}

} // namespace

double default_constancy_floor(const CurrentProfile& profile) {
  const Eigen::VectorXd slope = profile_slope(profile);
  Eigen::VectorXd sorted = slope;
  std::sort(sorted.data(), sorted.data() + sorted.size());
  const double median = sorted(sorted.size() / 2);
  const double max_q = profile.values.cwiseAbs().maxCoeff();
  return std::max(1e-9 * max_q, 5.0 * median);
}

SymmetryReport segment_constancy(const CurrentProfile& profile, double floor) {
  const int n = profile.grid.n_points;
  if (n < 8)
    throw ConfigError("segment_constancy: need at least eight samples");
  if (floor <= 0.0)
    floor = default_constancy_floor(profile);

  const bool circular = profile.supercell > 0.0 &&
                        profile.grid.covers_supercell(profile.supercell);
  const Eigen::VectorXd slope = profile_slope(profile);
  const double dx = profile.grid.spacing();

  std::vector<bool> constant(n);
  for (int i = 0; i < n; ++i)
    constant[i] = slope(i) <= floor;

  // Fold sub-floor islands shorter than kMinPlateauRun into deviations,
  // unless the whole profile is constant.
  {
    auto at = [&](int i) { return constant[((i % n) + n) % n]; };
    std::vector<bool> folded = constant;
    int i = 0;
    while (i < n) {
      if (!constant[i]) {
        ++i;
        continue;
      }
      int run = 1;
      while (run < n && at(i + run))
        ++run;
      if (run >= n)
        break; // fully constant
      const bool interior = circular || (i > 0 && i + run < n);
      if (run < kMinPlateauRun && interior) {
        for (int j = 0; j < run; ++j)
          folded[(i + j) % n] = false;
      }
      i += run;
    }
    constant = folded;
  }

  SymmetryReport report;
  report.floor = floor;
  report.spacing = dx;
  report.supercell = circular ? profile.supercell : 0.0;

  const bool all_constant =
      std::all_of(constant.begin(), constant.end(), [](bool b) { return b; });
  const bool none_constant =
      std::none_of(constant.begin(), constant.end(), [](bool b) { return b; });

  auto push_run = [&](int begin, int count) {
    const int end = (begin + count - 1) % n;
    if (constant[begin]) {
      Plateau p;
      p.begin = begin;
      p.count = count;
      p.x_begin = profile.grid.point(begin);
      p.x_end = profile.grid.point(end);
      Complex sum(0.0, 0.0);
      for (int j = 0; j < count; ++j)
        sum += profile.values((begin + j) % n);
      p.value = sum / static_cast<double>(count);
      for (int j = 0; j < count; ++j)
        p.spread = std::max(p.spread,
                            std::abs(profile.values((begin + j) % n) - p.value));
      report.plateaus.push_back(p);
    } else {
      Deviation d;
      d.begin = begin;
      d.count = count;
      d.x_begin = profile.grid.point(begin);
      d.x_end = profile.grid.point(end);
      d.length = count * dx;
      for (int j = 0; j < count; ++j)
        d.peak_slope = std::max(d.peak_slope, slope((begin + j) % n));
      report.deviations.push_back(d);
    }
  };

  if (all_constant || none_constant) {
    push_run(0, n);
    return report;
  }

  // Start each sweep at a boundary so circular runs are contiguous.
  int start = 0;
  if (circular) {
    while (!(constant[start] != constant[(start + n - 1) % n]))
      ++start;
  }
  int i = start, covered = 0;
  while (covered < n) {
    int count = 1;
    while (count < n && constant[(i + count) % n] == constant[i % n] &&
           (circular || i + count < n))
      ++count;
    push_run(i % n, count);
    covered += count;
    i += count;
  }
  return report;
}

namespace {

// Two deviation fragments separated by a short sub-floor window merge when
// their hull still fits a single defect signature. For w < L a genuinely
// symmetric window opens in the middle of a single defect's deviation
// interval (neither x nor xbar touches the defect there), which would
// otherwise split the interval in two.
void coalesce_deviations(SymmetryReport& report, double expected) {
  if (report.deviations.size() < 2 || report.spacing <= 0.0)
    return;
  const bool circular = report.supercell > 0.0;
  const int n = circular
                    ? static_cast<int>(std::round(report.supercell /
                                                  report.spacing))
                    : 0;

  bool merged = true;
  while (merged && report.deviations.size() >= 2) {
    merged = false;
    const std::size_t count = report.deviations.size();
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = (i + 1) % count;
      if (j == i)
        break;
      if (!circular && j < i)
        continue; // no wrap for open profiles
      Deviation& left = report.deviations[i];
      const Deviation& right = report.deviations[j];

      int gap_samples = right.begin - (left.begin + left.count);
      if (circular)
        gap_samples = ((gap_samples % n) + n) % n;
      if (gap_samples < 0)
        continue;
      const double gap = gap_samples * report.spacing;
      const double hull = left.length + gap + right.length;
      if (gap > 0.25 * expected || hull > 1.25 * expected)
        continue;

      // absorb the window and the right fragment into the left one
      const int absorb_begin = left.begin + left.count;
      left.count += gap_samples + right.count;
      left.x_end = right.x_end;
      left.length = left.count * report.spacing;
      left.peak_slope = std::max(left.peak_slope, right.peak_slope);
      report.deviations.erase(report.deviations.begin() + j);

      auto inside_merged = [&](int begin) {
        int rel = begin - absorb_begin;
        if (circular)
          rel = ((rel % n) + n) % n;
        return rel >= 0 && rel < gap_samples;
      };
      std::erase_if(report.plateaus, [&](const Plateau& p) {
        return inside_merged(p.begin);
      });
      merged = true;
      break;
    }
  }
}

} // namespace

void locate_defects(SymmetryReport& report, const SymmetryTransform& transform,
                    double support_w, double driving_amplitude) {
  report.defect_estimates.clear();
  report.width_flags.clear();
  report.unresolved_clusters.clear();

  const double expected =
      transform.kind == SymmetryKind::Translation
          ? transform.parameter + support_w + 2.0 * driving_amplitude
          : support_w + 2.0 * driving_amplitude;

  coalesce_deviations(report, expected);

  for (std::size_t d = 0; d < report.deviations.size(); ++d) {
    const Deviation& dev = report.deviations[d];
    if (dev.length > 2.0 * expected) {
      report.unresolved_clusters.push_back(d);
      report.width_flags.push_back(true);
      continue;
    }
    report.width_flags.push_back(dev.length > 1.25 * expected);

    // x_begin + (count-1) dx / 2, wrapped; valid for intervals that
    // straddle the supercell boundary as well.
    const double midpoint = wrap_position(
        dev.x_begin + 0.5 * (dev.count - 1) * report.spacing, report.supercell);
    const double estimate =
        transform.kind == SymmetryKind::Translation
            ? wrap_position(midpoint + transform.parameter / 2.0,
                            report.supercell)
            : midpoint;
    report.defect_estimates.push_back(estimate);
  }
}

PeriodScan infer_period(const ScanMap& scan, double trim_lo, double trim_hi) {
  if (scan.shifts.size() < 3)
    throw ConfigError("infer_period: need at least three scan rows");

  PeriodScan result;
  result.shifts = scan.shifts;
  result.scores.resize(scan.shifts.size());
  for (std::size_t row = 0; row < scan.shifts.size(); ++row) {
    const Eigen::VectorXd values = scan.abs2.row(row).transpose();
    result.scores[row] = constancy_score(values, scan.grid, trim_lo, trim_hi);
  }

  std::vector<double> sorted = result.scores;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double best = sorted.front();

  // Flat when no row stands out below half the median, or when even the
  // typical row is constant at numerical zero (a continuous symmetry:
  // every shift scores alike, the minimum is only noise).
  if (best >= 0.5 * median || median < 1e-12) {
    result.flat = true;
    return result;
  }

  const std::size_t count = result.scores.size();
  for (std::size_t i = 0; i < count; ++i) {
    const double s = result.scores[i];
    if (s >= 0.5 * median)
      continue;
    const bool left_ok = i == 0 || result.scores[i - 1] >= s;
    const bool right_ok = i + 1 == count || result.scores[i + 1] >= s;
    if (left_ok && right_ok)
      result.candidates.push_back(scan.shifts[i]);
  }

  // Among minima score-equivalent to the best, prefer the smallest shift
  // (a multiple of the period is also a symmetry away from defects).
  double period = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < count; ++i) {
    if (result.scores[i] > 10.0 * best)
      continue;
    const bool is_candidate =
        std::find(result.candidates.begin(), result.candidates.end(),
                  scan.shifts[i]) != result.candidates.end();
    if (!is_candidate)
      continue;
    if (!found || scan.shifts[i] < period) {
      period = scan.shifts[i];
      found = true;
    }
  }
  if (found)
    result.period = period;
  else
    result.flat = true;
  return result;
}

} // namespace lsinv
