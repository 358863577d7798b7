#include "lsinv/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lsinv/errors.hpp"

namespace lsinv {

namespace {

// Width at which exp(-(x/Delta)^2) falls below 1e-12: half-width
// Delta * sqrt(ln 1e12). When that slightly exceeds the smallest gap the
// support is capped just below it, but only while the value truncated at
// the gap is still a tail (below 1e-6 of the peak); closer barriers are a
// genuine overlap and are left for the validator to reject.
double default_support(double width, double min_gap) {
  const double w = 2.0 * width * std::sqrt(std::log(1e12));
  if (w < min_gap)
    return w;
  if (min_gap / 2.0 >= width * std::sqrt(std::log(1e6)))
    return 0.999 * min_gap;
  return w;
}

// Smallest circular gap between adjacent centers on the ring of size R.
double min_circular_gap(const std::vector<double>& centers, double supercell) {
  if (centers.size() < 2)
    return supercell;
  std::vector<double> sorted = centers;
  std::sort(sorted.begin(), sorted.end());
  double min_gap = supercell - (sorted.back() - sorted.front());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
  return min_gap;
}

} // namespace

LatticeSpec::LatticeSpec(double supercell, std::vector<double> centers,
                         std::vector<double> strengths, double width,
                         std::optional<DrivingLaw> driving,
                         std::optional<double> support_w)
    : supercell_(supercell), centers_(std::move(centers)),
      strengths_(std::move(strengths)), width_(width),
      driving_(std::move(driving)) {
  if (supercell_ <= 0.0)
    throw ConfigError("lattice: supercell size must be positive");
  if (width_ <= 0.0)
    throw ConfigError("lattice: Gaussian width must be positive");
  if (centers_.size() != strengths_.size())
    throw ConfigError("lattice: centers and strengths must have equal length");
  for (double x : centers_) {
    if (x < -supercell_ / 2.0 || x >= supercell_ / 2.0)
      throw ConfigError("lattice: barrier center outside [-R/2, R/2)");
  }
  if (driving_) {
    if (driving_->omega <= 0.0)
      throw ConfigError("lattice: driving frequency must be positive");
    if (driving_->amplitude < 0.0)
      throw ConfigError("lattice: driving amplitude must be non-negative");
  }

  const double gap = min_circular_gap(centers_, supercell_);
  support_w_ = support_w ? *support_w : default_support(width_, gap);
  if (support_w_ <= 0.0)
    throw ConfigError("lattice: support width must be positive");
  // Barriers share the common displacement d(t), so relative distances are
  // time independent; non-overlap is a condition on the circular gaps only.
  if (centers_.size() >= 2 && support_w_ > gap)
    throw ConfigError("lattice: barrier supports overlap (w exceeds the "
                      "smallest circular gap between centers)");
}

LatticeSpec LatticeSpec::uniform_chain(int n_barriers, double spacing,
                                       double strength, double width,
                                       std::optional<DrivingLaw> driving) {
  if (n_barriers < 1)
    throw ConfigError("lattice: need at least one barrier");
  if (spacing <= 0.0)
    throw ConfigError("lattice: spacing must be positive");
  std::vector<double> centers(n_barriers);
  for (int n = 0; n < n_barriers; ++n)
    centers[n] = (n - (n_barriers - 1) / 2.0) * spacing;
  std::vector<double> strengths(n_barriers, strength);
  return LatticeSpec(n_barriers * spacing, std::move(centers),
                     std::move(strengths), width, std::move(driving));
}

LatticeSpec LatticeSpec::with_strength(std::size_t index,
                                       double strength) const {
  if (index >= strengths_.size())
    throw ConfigError("lattice: defect index out of range");
  LatticeSpec copy = *this;
  copy.strengths_[index] = strength;
  return copy;
}

double LatticeSpec::potential(double x, double t) const {
  const double d = displacement(t);
  const double half_support = support_w_ / 2.0;
  double value = 0.0;
  for (std::size_t n = 0; n < centers_.size(); ++n) {
    const double u = x - centers_[n] - d;
    if (std::abs(u) > half_support)
      continue;
    const double arg = u / width_;
    value += strengths_[n] * std::exp(-arg * arg);
  }
  return value;
}

Grid Grid::over_supercell(double supercell, int n_points) {
  if (n_points < 2)
    throw ConfigError("grid: need at least two points");
  const double dx = supercell / n_points;
  return Grid{-supercell / 2.0, -supercell / 2.0 + dx * (n_points - 1),
              n_points};
}

bool Grid::covers_supercell(double supercell) const {
  if (n_points < 2)
    return false;
  const double dx = spacing();
  return std::abs(x_max - x_min - (supercell - dx)) < 1e-9 * supercell &&
         std::abs(x_min + supercell / 2.0) < 1e-9 * supercell;
}

} // namespace lsinv
