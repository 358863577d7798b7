#include "lsinv/invariants.hpp"

#include <cmath>

#include "lsinv/errors.hpp"

namespace lsinv {

namespace {

const Complex kHalfOverI(0.0, -0.5); // 1 / (2i)

// Q or Qc from sample arrays at x and xbar. conjugated = true gives Q.
Eigen::VectorXcd combine(int sigma, const Eigen::VectorXcd& psi,
                         const Eigen::VectorXcd& dpsi,
                         const Eigen::VectorXcd& psi_bar,
                         const Eigen::VectorXcd& dpsi_bar, bool conjugated) {
  const double s = static_cast<double>(sigma);
  if (conjugated)
    return kHalfOverI *
           (s * psi.conjugate().cwiseProduct(dpsi_bar) -
            psi_bar.cwiseProduct(dpsi.conjugate()));
  return kHalfOverI * (s * psi.cwiseProduct(dpsi_bar) -
                       psi_bar.cwiseProduct(dpsi));
}

// Phase matrices E(g, idx) = exp(i k_idx xbar_g) and its derivative
// weights, so barred samples of many coefficient vectors are plain
// matrix-vector products.
void mapped_phase_matrices(const PlaneWaveBasis& basis, const Grid& grid,
                           const SymmetryTransform& transform,
                           Eigen::MatrixXcd& value_phases,
                           Eigen::MatrixXcd& derivative_phases) {
  const Complex i_unit(0.0, 1.0);
  value_phases.resize(grid.n_points, basis.size());
  derivative_phases.resize(grid.n_points, basis.size());
  for (int g = 0; g < grid.n_points; ++g) {
    double xbar = transform.map(grid.point(g));
    xbar = std::remainder(xbar, basis.supercell);
    for (int idx = 0; idx < basis.size(); ++idx) {
      const double k = basis.wavenumber(basis.mode(idx));
      const Complex phase = std::exp(i_unit * (k * xbar));
      value_phases(g, idx) = phase;
      derivative_phases(g, idx) = i_unit * k * phase;
    }
  }
}

CurrentProfile
static_profile(const WaveState& state, const PlaneWaveBasis& basis,
               const SymmetryTransform& transform, bool conjugated) {
  Eigen::MatrixXcd value_phases, derivative_phases;
  mapped_phase_matrices(basis, state.grid, transform, value_phases,
                        derivative_phases);
  const Eigen::VectorXcd psi_bar = value_phases * state.coefficients;
  const Eigen::VectorXcd dpsi_bar = derivative_phases * state.coefficients;

  CurrentProfile profile;
  profile.grid = state.grid;
  profile.transform = transform;
  profile.kind = conjugated ? CurrentKind::Static : CurrentKind::Complementary;
  profile.supercell = basis.supercell;
  profile.values = combine(transform.sigma(), state.psi, state.dpsi, psi_bar,
                           dpsi_bar, conjugated);
  return profile;
}

} // namespace

CurrentProfile two_point_current(const WaveState& state,
                                 const PlaneWaveBasis& basis,
                                 const SymmetryTransform& transform) {
  return static_profile(state, basis, transform, true);
}

CurrentProfile complementary_current(const WaveState& state,
                                     const PlaneWaveBasis& basis,
                                     const SymmetryTransform& transform) {
  return static_profile(state, basis, transform, false);
}

CurrentProfile averaged_current(const FloquetMode& mode,
                                const PlaneWaveBasis& basis,
                                const SymmetryTransform& transform) {
  if (mode.samples.size() < 2)
    throw ConfigError("averaged_current: need at least two time samples");

  Eigen::MatrixXcd value_bar, derivative_bar;
  mapped_phase_matrices(basis, mode.grid, transform, value_bar,
                        derivative_bar);

  CurrentProfile profile;
  profile.grid = mode.grid;
  profile.transform = transform;
  profile.kind = CurrentKind::Averaged;
  profile.supercell = basis.supercell;

  if (mode.averaged_density.size() > 0) {
    // Qbar is linear in the one-period averaged density matrix
    // D(nu, mu) = <c_nu c_mu*>, which mode_time_series integrates exactly
    // over each propagation substep. No time-sampling error enters.
    Eigen::MatrixXcd value_x, derivative_x;
    mapped_phase_matrices(basis, mode.grid,
                          SymmetryTransform::translation(0.0), value_x,
                          derivative_x);
    const Eigen::MatrixXcd w1 = derivative_bar * mode.averaged_density;
    const Eigen::MatrixXcd w2 = value_bar * mode.averaged_density;
    const Eigen::VectorXcd term1 =
        w1.cwiseProduct(value_x.conjugate()).rowwise().sum();
    const Eigen::VectorXcd term2 =
        w2.cwiseProduct(derivative_x.conjugate()).rowwise().sum();
    profile.values =
        kHalfOverI *
        (static_cast<double>(transform.sigma()) * term1 - term2);
    return profile;
  }

  // Hand-built modes: periodic-trapezoid average over the stored samples.
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(mode.grid.n_points);
  for (const FloquetTimeSample& sample : mode.samples) {
    const Eigen::VectorXcd psi_bar = value_bar * sample.coefficients;
    const Eigen::VectorXcd dpsi_bar = derivative_bar * sample.coefficients;
    sum += combine(transform.sigma(), sample.psi, sample.dpsi, psi_bar,
                   dpsi_bar, true);
  }
  profile.values = sum / static_cast<double>(mode.samples.size());
  return profile;
}

CurrentProfile instantaneous_current(const FloquetMode& mode,
                                     std::size_t sample_index,
                                     const PlaneWaveBasis& basis,
                                     const SymmetryTransform& transform) {
  if (sample_index >= mode.samples.size())
    throw ConfigError("instantaneous_current: sample index out of range");
  const FloquetTimeSample& sample = mode.samples[sample_index];

  Eigen::MatrixXcd value_phases, derivative_phases;
  mapped_phase_matrices(basis, mode.grid, transform, value_phases,
                        derivative_phases);
  const Eigen::VectorXcd psi_bar = value_phases * sample.coefficients;
  const Eigen::VectorXcd dpsi_bar = derivative_phases * sample.coefficients;

  CurrentProfile profile;
  profile.grid = mode.grid;
  profile.transform = transform;
  profile.kind = CurrentKind::Static;
  profile.supercell = basis.supercell;
  profile.values = combine(transform.sigma(), sample.psi, sample.dpsi,
                           psi_bar, dpsi_bar, true);
  return profile;
}

CurrentProfile probability_current(const WaveState& state,
                                   const PlaneWaveBasis& basis) {
  return two_point_current(state, basis, SymmetryTransform::translation(0.0));
}

CurrentProfile probability_current(const FloquetMode& mode,
                                   const PlaneWaveBasis& basis) {
  return averaged_current(mode, basis, SymmetryTransform::translation(0.0));
}

ScanMap shift_scan(const WaveState& state, const PlaneWaveBasis& basis,
                   const std::vector<double>& shifts) {
  ScanMap scan;
  scan.grid = state.grid;
  scan.supercell = basis.supercell;
  scan.shifts = shifts;
  scan.abs2.resize(shifts.size(), state.grid.n_points);
  for (std::size_t row = 0; row < shifts.size(); ++row) {
    const CurrentProfile profile = two_point_current(
        state, basis, SymmetryTransform::translation(shifts[row]));
    scan.abs2.row(row) = profile.values.cwiseAbs2().transpose();
  }
  return scan;
}

namespace {

// Contiguous index range of grid points inside [lo, hi].
std::pair<int, int> index_range(const Grid& grid, double lo, double hi) {
  int first = -1, last = -1;
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.point(i);
    if (x < lo || x > hi)
      continue;
    if (first < 0)
      first = i;
    last = i;
  }
  if (first < 0 || last - first < 2)
    throw ConfigError("convergence_measure: domain holds fewer than three "
                      "grid points");
  return {first, last};
}

template <typename Vector>
double epsilon_functional(const Vector& values, const Grid& grid, double lo,
                          double hi) {
  const auto [first, last] = index_range(grid, lo, hi);
  const double dx = grid.spacing();
  const int count = last - first + 1;

  Eigen::VectorXd slope_sq(count);
  for (int i = first; i <= last; ++i) {
    typename Vector::Scalar derivative;
    if (i == first)
      derivative = (values(i + 1) - values(i)) / dx;
    else if (i == last)
      derivative = (values(i) - values(i - 1)) / dx;
    else
      derivative = (values(i + 1) - values(i - 1)) / (2.0 * dx);
    slope_sq(i - first) = std::norm(Complex(derivative));
  }

  double numerator = 0.0, denominator = 0.0;
  for (int i = 0; i < count; ++i) {
    const double weight = (i == 0 || i == count - 1) ? 0.5 : 1.0;
    numerator += weight * slope_sq(i);
    denominator += weight * std::norm(Complex(values(first + i)));
  }
  numerator *= dx;
  denominator *= dx;

  if (denominator < 1e-280)
    throw NumericalError("convergence_measure: degenerate profile, "
                         "integral of |Q|^2 vanishes");
  const double domain = grid.point(last) - grid.point(first);
  return domain * domain * numerator / denominator;
}

} // namespace

double convergence_measure(const CurrentProfile& profile, double lo,
                           double hi) {
  return epsilon_functional(profile.values, profile.grid, lo, hi);
}

double constancy_score(const Eigen::VectorXd& values, const Grid& grid,
                       double lo, double hi) {
  return epsilon_functional(values, grid, lo, hi);
}

CurrentProfile grid_sampled_current(const WaveState& state, double supercell,
                                    const SymmetryTransform& transform) {
  const Grid& grid = state.grid;
  if (!grid.covers_supercell(supercell))
    throw ConfigError("grid_sampled_current: grid must cover the supercell "
                      "exclusively");
  const int n = grid.n_points;
  const double dx = grid.spacing();

  // Index of the mapped point; must land on the grid modulo the supercell.
  auto mapped_index = [&](int i) {
    const double xbar = transform.map(grid.point(i));
    const double steps = (xbar - grid.x_min) / dx;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-6)
      throw ConfigError("grid_sampled_current: transform does not map the "
                        "grid onto itself");
    long idx = static_cast<long>(rounded) % n;
    if (idx < 0)
      idx += n;
    return static_cast<int>(idx);
  };

  Eigen::VectorXcd fd_dpsi(n);
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n;
    const int next = (i + 1) % n;
    fd_dpsi(i) = (state.psi(next) - state.psi(prev)) / (2.0 * dx);
  }

  Eigen::VectorXcd psi_bar(n), dpsi_bar(n);
  for (int i = 0; i < n; ++i) {
    const int j = mapped_index(i);
    psi_bar(i) = state.psi(j);
    dpsi_bar(i) = fd_dpsi(j);
  }

  CurrentProfile profile;
  profile.grid = grid;
  profile.transform = transform;
  profile.kind = CurrentKind::Static;
  profile.supercell = supercell;
  profile.values = combine(transform.sigma(), state.psi, fd_dpsi, psi_bar,
                           dpsi_bar, true);
  return profile;
}

Eigen::VectorXd profile_slope(const CurrentProfile& profile) {
  const int n = profile.grid.n_points;
  const double dx = profile.grid.spacing();
  const bool circular =
      profile.supercell > 0.0 && profile.grid.covers_supercell(profile.supercell);
  Eigen::VectorXd slope(n);
  for (int i = 0; i < n; ++i) {
    Complex derivative;
    if (circular) {
      const int prev = (i + n - 1) % n;
      const int next = (i + 1) % n;
      derivative = (profile.values(next) - profile.values(prev)) / (2.0 * dx);
    } else if (i == 0) {
      derivative = (profile.values(1) - profile.values(0)) / dx;
    } else if (i == n - 1) {
      derivative = (profile.values(n - 1) - profile.values(n - 2)) / dx;
    } else {
      derivative = (profile.values(i + 1) - profile.values(i - 1)) / (2.0 * dx);
    }
    slope(i) = std::abs(derivative);
  }
  return slope;
}

double current_scale(const WaveState& state) {
  return state.psi.cwiseAbs().maxCoeff() * state.dpsi.cwiseAbs().maxCoeff();
}

double current_scale(const FloquetMode& mode) {
  double scale = 0.0;
  for (const FloquetTimeSample& sample : mode.samples)
    scale = std::max(scale, sample.psi.cwiseAbs().maxCoeff() *
                                sample.dpsi.cwiseAbs().maxCoeff());
  return scale;
}

bool effectively_null(const CurrentProfile& profile, double scale) {
  return profile.values.cwiseAbs().maxCoeff() < 1e-8 * scale;
}

} // namespace lsinv
