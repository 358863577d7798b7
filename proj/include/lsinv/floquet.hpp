#ifndef LSINV_FLOQUET_HPP
#define LSINV_FLOQUET_HPP

#include <Eigen/Core>
#include <vector>

#include "lsinv/domain.hpp"
#include "lsinv/hamiltonian.hpp"

namespace lsinv {

/// One-period time-evolution operator U(t0 + T, t0) in the plane-wave
/// basis, built as the time-ordered product of exact Hermitian
/// exponentials over piecewise-constant midpoint Hamiltonians.
struct PeriodPropagator {
  Eigen::MatrixXcd matrix;
  double t0 = 0.0;
  double period = 0.0;
  int substeps = 0;
};

/// Max-norm unitarity defect ||U^dag U - 1||.
double unitarity_defect(const PeriodPropagator& propagator);

/// U = prod_j exp(-i H(t_j + dt/2) dt), dt = T / substeps, each factor via
/// Hermitian eigendecomposition (exactly unitary up to solver tolerance).
/// Requires a driven lattice (the driving record fixes T; amplitude zero
/// gives the static limit U = exp(-i H T)). Throws NumericalError when the
/// accumulated unitarity defect exceeds 1e-9, suggesting more substeps.
PeriodPropagator propagate_period(const LatticeSpec& lattice,
                                  const PlaneWaveBasis& basis, double t0,
                                  int substeps);

/// Floquet mode at t0: quasienergy and unit-norm coefficient vector.
struct FloquetSeed {
  double quasienergy = 0.0;
  Eigen::VectorXcd coefficients;
};

/// Eigenphases of U mapped to quasienergies eps_j = -arg(lambda_j)/T,
/// folded into [-omega/2, +omega/2], with orthonormal eigenvectors from
/// the Schur form of the unitary matrix. Rejects non-unitary input;
/// enforces the eigenpair residual ||U v - lambda v|| <= 1e-8. Sorted
/// ascending by quasienergy.
std::vector<FloquetSeed> floquet_modes(const PeriodPropagator& propagator,
                                       double omega);

/// Full time dependence of one mode: the seed is propagated from t = 0
/// with the same substep scheme, recorded at t_j = j T / n_time_samples.
/// substeps is rounded up to a multiple of n_time_samples. The endpoint
/// periodicity Phi(0) = Phi(T) is checked to 1e-6; the mean energy is
/// filled with the same quadrature as the averaged current.
FloquetMode mode_time_series(const LatticeSpec& lattice,
                             const PlaneWaveBasis& basis, const Grid& grid,
                             const FloquetSeed& seed, int n_time_samples,
                             int substeps);

/// (1/T) integral of <Psi(t)|H(t)|Psi(t)> dt from the mode's samples.
double mean_energy(const FloquetMode& mode, const LatticeSpec& lattice,
                   const PlaneWaveBasis& basis);

/// Mean energies of many seeds in one propagation pass (used to select
/// the lowest-mean-energy mode without materializing every time series).
std::vector<double> mean_energies(const LatticeSpec& lattice,
                                  const PlaneWaveBasis& basis,
                                  const std::vector<FloquetSeed>& seeds,
                                  int substeps, int n_energy_samples);

} // namespace lsinv

#endif
