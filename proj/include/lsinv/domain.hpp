#ifndef LSINV_DOMAIN_HPP
#define LSINV_DOMAIN_HPP

#include <Eigen/Core>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace lsinv {

inline constexpr double pi = std::numbers::pi_v<double>;
using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Symmetry transforms
// ---------------------------------------------------------------------------

enum class SymmetryKind { Translation, Inversion };

/// A map x -> xbar, either translation by L (sigma = +1) or inversion
/// through a center alpha (sigma = -1).
struct SymmetryTransform {
  SymmetryKind kind = SymmetryKind::Translation;
  double parameter = 0.0; // L for translation, alpha for inversion

  static SymmetryTransform translation(double length) {
    return {SymmetryKind::Translation, length};
  }
  static SymmetryTransform inversion(double center) {
    return {SymmetryKind::Inversion, center};
  }

  int sigma() const { return kind == SymmetryKind::Translation ? +1 : -1; }

  double map(double x) const {
    return kind == SymmetryKind::Translation ? x + parameter
                                             : -x + 2.0 * parameter;
  }
};

// ---------------------------------------------------------------------------
// Lattice geometry
// ---------------------------------------------------------------------------

/// Lateral shaking law d(t) = A cos(omega t).
struct DrivingLaw {
  double amplitude = 0.0;
  double omega = 0.0;

  double period() const { return 2.0 * pi / omega; }
  double displacement(double t) const { return amplitude * std::cos(omega * t); }
};

/// A supercell of Gaussian barriers: V(x,t) = sum_n Lambda_n
/// exp[-(x - X_n - d(t))^2 / Delta^2], with each term truncated to zero
/// beyond |x - X_n - d(t)| > w/2 so that barriers have strictly compact,
/// non-overlapping support (also across the periodic supercell boundary).
class LatticeSpec {
public:
  /// Constructs and validates. Throws ConfigError if the barrier supports
  /// overlap (circular gaps smaller than w), sizes mismatch, or a center
  /// lies outside [-R/2, R/2). When support_w is not given it defaults to
  /// the width at which the Gaussian drops below 1e-12 of its peak,
  /// w = 2 Delta sqrt(ln 1e12), capped just below the smallest gap.
  LatticeSpec(double supercell, std::vector<double> centers,
              std::vector<double> strengths, double width,
              std::optional<DrivingLaw> driving = std::nullopt,
              std::optional<double> support_w = std::nullopt);

  /// N equidistant barriers of common strength centered on x = 0,
  /// at X_n = (n - (N-1)/2) * spacing, in a supercell R = N * spacing.
  static LatticeSpec uniform_chain(int n_barriers, double spacing,
                                   double strength, double width,
                                   std::optional<DrivingLaw> driving = std::nullopt);

  /// Copy with one barrier strength replaced (defect insertion).
  LatticeSpec with_strength(std::size_t index, double strength) const;

  double supercell() const { return supercell_; }
  const std::vector<double>& centers() const { return centers_; }
  const std::vector<double>& strengths() const { return strengths_; }
  double width() const { return width_; }
  double support_width() const { return support_w_; }
  const std::optional<DrivingLaw>& driving() const { return driving_; }

  double driving_amplitude() const {
    return driving_ ? driving_->amplitude : 0.0;
  }
  /// d(t), or 0 for a static lattice.
  double displacement(double t) const {
    return driving_ ? driving_->displacement(t) : 0.0;
  }

  /// V(x, t): the truncated-Gaussian sum. Terms whose displaced argument
  /// exceeds w/2 in magnitude contribute exactly zero.
  double potential(double x, double t = 0.0) const;

private:
  double supercell_;
  std::vector<double> centers_;
  std::vector<double> strengths_;
  double width_;     // Gaussian Delta
  double support_w_; // compact support w
  std::optional<DrivingLaw> driving_;
};

/// Free-function spelling of LatticeSpec::potential.
inline double potential_value(const LatticeSpec& lattice, double x, double t) {
  return lattice.potential(x, t);
}

inline double map_point(const SymmetryTransform& transform, double x) {
  return transform.map(x);
}

// ---------------------------------------------------------------------------
// Grids and states
// ---------------------------------------------------------------------------

/// Uniform grid; spacing = (x_max - x_min) / (n_points - 1).
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double point(int i) const { return x_min + spacing() * i; }

  /// Grid covering one supercell [-R/2, R/2) with the right endpoint
  /// excluded, so index i and i + n_points are the same physical point
  /// modulo R. spacing is R / n_points.
  static Grid over_supercell(double supercell, int n_points);

  /// True if this grid is an exclusive cover of [-R/2, R/2).
  bool covers_supercell(double supercell) const;
};

/// One stationary state. `coefficients` are plane-wave expansion
/// coefficients scaled so that the supercell L2 norm of psi is 1, i.e.
/// psi(x) = sum_mu c_mu exp(i 2 pi mu x / R) with sum |c_mu|^2 = 1/R.
struct WaveState {
  double energy = 0.0;
  Eigen::VectorXcd coefficients;
  Grid grid;
  Eigen::VectorXcd psi;
  Eigen::VectorXcd dpsi; // analytic basis derivative, not a finite difference
};

/// One time sample of a Floquet mode: t_j, coefficients (same scaling as
/// WaveState), and grid samples of Psi and its spatial derivative.
struct FloquetTimeSample {
  double t = 0.0;
  Eigen::VectorXcd coefficients;
  Eigen::VectorXcd psi;
  Eigen::VectorXcd dpsi;
};

/// Floquet mode Psi(x,t) = exp(-i eps t) Phi(x,t), sampled at the uniform
/// times t_j = j T / n over one period [0, T).
struct FloquetMode {
  double quasienergy = 0.0; // folded into [-omega/2, +omega/2]
  double period = 0.0;
  double mean_energy = 0.0; // (1/T) integral of <Psi|H(t)|Psi>
  Grid grid;
  std::vector<FloquetTimeSample> samples;
  /// (1/T) integral of c(t) c(t)^dag dt, integrated exactly over each
  /// propagation substep in its eigenbasis. Carries the full one-period
  /// average free of time-sampling error; empty for hand-built modes.
  Eigen::MatrixXcd averaged_density;
};

} // namespace lsinv

#endif
