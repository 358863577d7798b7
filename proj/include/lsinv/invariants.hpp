#ifndef LSINV_INVARIANTS_HPP
#define LSINV_INVARIANTS_HPP

#include <Eigen/Core>
#include <vector>

#include "lsinv/domain.hpp"
#include "lsinv/hamiltonian.hpp"

namespace lsinv {

enum class CurrentKind { Static, Averaged, Complementary };

/// Two-point current samples Q(x) on a grid, for a fixed transform
/// x -> xbar. Barred points wrap periodically around the supercell,
/// so the profile is defined on the whole grid.
struct CurrentProfile {
  Grid grid;
  SymmetryTransform transform;
  CurrentKind kind = CurrentKind::Static;
  double supercell = 0.0; // > 0: values are periodic with this period
  Eigen::VectorXcd values;
};

/// |Q|^2 rows over a family of translation shifts.
struct ScanMap {
  Grid grid;
  double supercell = 0.0;
  std::vector<double> shifts;
  Eigen::MatrixXd abs2; // shifts.size() x grid.n_points
};

/// Q(x) = (1/2i) [sigma psi*(x) psi'(xbar) - psi(xbar) psi*'(x)].
/// Barred samples are synthesized from the plane-wave coefficients
/// (exact under the periodic wrap), never interpolated.
CurrentProfile two_point_current(const WaveState& state,
                                 const PlaneWaveBasis& basis,
                                 const SymmetryTransform& transform);

/// Q^c: psi* replaced by psi. For a stationary state the modulus is
/// time independent.
CurrentProfile complementary_current(const WaveState& state,
                                     const PlaneWaveBasis& basis,
                                     const SymmetryTransform& transform);

/// Dynamical invariant: periodic-trapezoid average of Q(x, xbar; t_j)
/// over one period of the mode's samples. Throws on fewer than 2 samples.
CurrentProfile averaged_current(const FloquetMode& mode,
                                const PlaneWaveBasis& basis,
                                const SymmetryTransform& transform);

/// The integral kernel Q(x, xbar; t_j) at a single time sample.
CurrentProfile instantaneous_current(const FloquetMode& mode,
                                     std::size_t sample_index,
                                     const PlaneWaveBasis& basis,
                                     const SymmetryTransform& transform);

/// Coincidence limit: the probability current J(x) (static state) or the
/// period-averaged current Jbar(x) (Floquet mode).
CurrentProfile probability_current(const WaveState& state,
                                   const PlaneWaveBasis& basis);
CurrentProfile probability_current(const FloquetMode& mode,
                                   const PlaneWaveBasis& basis);

/// Rows |Q^{dL}(x)|^2 for each shift dL.
ScanMap shift_scan(const WaveState& state, const PlaneWaveBasis& basis,
                   const std::vector<double>& shifts);

/// eps = D^2 * integral |Q'|^2 / integral |Q|^2 over [lo, hi], with Q' by
/// centered finite differences (one-sided at the domain edges) and
/// trapezoid integrals. Throws NumericalError on a vanishing denominator.
double convergence_measure(const CurrentProfile& profile, double lo,
                           double hi);

/// Same functional applied to raw real samples (used to score scan rows).
double constancy_score(const Eigen::VectorXd& values, const Grid& grid,
                       double lo, double hi);

/// Grid-limited profile: psi' by centered finite differences of the grid
/// samples and psi(xbar) by lookup of the mapped grid point, which must
/// land on the grid (modulo the supercell). Measures the fidelity of the
/// grid representation rather than the basis-exact current; the transform
/// must map the grid onto itself. Requires a supercell-covering grid.
CurrentProfile grid_sampled_current(const WaveState& state, double supercell,
                                    const SymmetryTransform& transform);

/// |dQ/dx| per sample by centered differences; circular when the profile
/// wraps, one-sided at the ends otherwise.
Eigen::VectorXd profile_slope(const CurrentProfile& profile);

/// max |psi| * max |psi'|: the natural magnitude of any current built
/// from the state. Profiles far below this scale are identically zero
/// up to numerical noise (e.g. J for a real state).
double current_scale(const WaveState& state);
double current_scale(const FloquetMode& mode);

/// True if max|Q| < 1e-8 * scale: the profile is a null current, which is
/// trivially constant and carries no constancy information.
bool effectively_null(const CurrentProfile& profile, double scale);

} // namespace lsinv

#endif
