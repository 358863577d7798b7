#include "lsinv/floquet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lsinv/errors.hpp"

namespace lsinv {

namespace {

double require_period(const LatticeSpec& lattice) {
  if (!lattice.driving())
    throw ConfigError("floquet: lattice has no driving record");
  return lattice.driving()->period();
}

// Advances `state` (columns are coefficient vectors) by one substep with
// the exact exponential of the midpoint Hamiltonian.
void apply_substep(const LatticeSpec& lattice, const PlaneWaveBasis& basis,
                   double t_mid, double dt, Eigen::MatrixXcd& state) {
  const Eigen::MatrixXcd h = build_hamiltonian(lattice, basis, t_mid);
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
  hermitian_eigensolve(h, energies, vectors);

  Eigen::VectorXcd phases(energies.size());
  const Complex i_unit(0.0, 1.0);
  for (int j = 0; j < energies.size(); ++j)
    phases(j) = std::exp(-i_unit * (energies(j) * dt));

  state = vectors * (phases.asDiagonal() * (vectors.adjoint() * state));
}

} // namespace

double unitarity_defect(const PeriodPropagator& propagator) {
  const int n = propagator.matrix.rows();
  return (propagator.matrix.adjoint() * propagator.matrix -
          Eigen::MatrixXcd::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

PeriodPropagator propagate_period(const LatticeSpec& lattice,
                                  const PlaneWaveBasis& basis, double t0,
                                  int substeps) {
  const double period = require_period(lattice);
  if (substeps < 1)
    throw ConfigError("propagate_period: need at least one substep");

  const double dt = period / substeps;
  PeriodPropagator propagator;
  propagator.t0 = t0;
  propagator.period = period;
  propagator.substeps = substeps;
  propagator.matrix = Eigen::MatrixXcd::Identity(basis.size(), basis.size());

  for (int j = 0; j < substeps; ++j) {
    const double t_mid = t0 + (j + 0.5) * dt;
    apply_substep(lattice, basis, t_mid, dt, propagator.matrix);
  }

  const double defect = unitarity_defect(propagator);
  if (defect > 1e-9) {
    std::ostringstream msg;
    msg << "propagate_period: unitarity defect " << defect
        << " exceeds 1e-9; increase substeps";
    throw NumericalError(msg.str());
  }
  return propagator;
}

std::vector<FloquetSeed> floquet_modes(const PeriodPropagator& propagator,
                                       double omega) {
  if (std::abs(omega * propagator.period - 2.0 * pi) >
      1e-9 * 2.0 * pi)
    throw ConfigError("floquet_modes: omega does not match the propagator "
                      "period");
  const double defect = unitarity_defect(propagator);
  if (defect > 1e-9)
    throw NumericalError("floquet_modes: propagator not unitary (defect " +
                         std::to_string(defect) + ")");

  // The Schur form of a unitary matrix is diagonal up to rounding, so the
  // Schur vectors are an orthonormal eigenbasis.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(propagator.matrix, true);
  if (schur.info() != Eigen::Success)
    throw NumericalError("floquet_modes: Schur decomposition failed");

  const int n = propagator.matrix.rows();
  std::vector<FloquetSeed> seeds(n);
  double worst_residual = 0.0;
  for (int j = 0; j < n; ++j) {
    const Complex eigenvalue = schur.matrixT()(j, j);
    const Eigen::VectorXcd vector = schur.matrixU().col(j);
    worst_residual = std::max(
        worst_residual,
        (propagator.matrix * vector - eigenvalue * vector).norm());
    seeds[j].quasienergy = -std::arg(eigenvalue) / propagator.period;
    seeds[j].coefficients = vector;
  }
  if (worst_residual > 1e-8) {
    std::ostringstream msg;
    msg << "floquet_modes: eigenpair residual " << worst_residual
        << " exceeds 1e-8";
    throw NumericalError(msg.str());
  }

  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const FloquetSeed& a, const FloquetSeed& b) {
                     return a.quasienergy < b.quasienergy;
                   });
  return seeds;
}

FloquetMode mode_time_series(const LatticeSpec& lattice,
                             const PlaneWaveBasis& basis, const Grid& grid,
                             const FloquetSeed& seed, int n_time_samples,
                             int substeps) {
  const double period = require_period(lattice);
  if (n_time_samples < 1)
    throw ConfigError("mode_time_series: need at least one sample");
  const int per_sample =
      std::max(1, (substeps + n_time_samples - 1) / n_time_samples);
  const int total_steps = per_sample * n_time_samples;
  const double dt = period / total_steps;

  FloquetMode mode;
  mode.quasienergy = seed.quasienergy;
  mode.period = period;
  mode.grid = grid;
  mode.samples.resize(n_time_samples);

  // Exact one-period average of c c^dag: within a substep the evolution is
  // exp(-i H tau) in the eigenbasis, so the average of
  // exp(-i (E_p - E_q) tau) over the piece is a closed-form sinc factor.
  const int size = basis.size();
  Eigen::MatrixXcd density_sum = Eigen::MatrixXcd::Zero(size, size);
  auto sinc_phase = [](double delta_dt) {
    const double half = delta_dt / 2.0;
    const double ratio =
        std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
    return std::polar(ratio, -half);
  };

  const double norm_scale = 1.0 / std::sqrt(basis.supercell);
  Eigen::VectorXcd state = seed.coefficients;
  for (int s = 0; s < n_time_samples; ++s) {
    FloquetTimeSample& sample = mode.samples[s];
    sample.t = s * period / n_time_samples;
    sample.coefficients = state * norm_scale;
    synthesize_wavefunction(sample.coefficients, basis, grid, sample.psi,
                            sample.dpsi);
    for (int j = 0; j < per_sample; ++j) {
      const double t_mid = sample.t + (j + 0.5) * dt;
      const Eigen::MatrixXcd h = build_hamiltonian(lattice, basis, t_mid);
      Eigen::VectorXd energies;
      Eigen::MatrixXcd vectors;
      hermitian_eigensolve(h, energies, vectors);

      const Eigen::VectorXcd rotated = vectors.adjoint() * state;
      Eigen::MatrixXcd piece = rotated * rotated.adjoint();
      for (int p = 0; p < size; ++p)
        for (int q = 0; q < size; ++q)
          piece(p, q) *= sinc_phase((energies(p) - energies(q)) * dt);
      density_sum.noalias() += vectors * piece * vectors.adjoint();

      Eigen::VectorXcd phases(size);
      const Complex i_unit(0.0, 1.0);
      for (int p = 0; p < size; ++p)
        phases(p) = std::exp(-i_unit * (energies(p) * dt));
      state = vectors * (phases.asDiagonal() * rotated);
    }
  }
  mode.averaged_density =
      density_sum / (static_cast<double>(total_steps) * basis.supercell);

  // Phi(T) = e^{+i eps T} Psi(T) must return to Phi(0) = Psi(0).
  const Complex i_unit(0.0, 1.0);
  const double periodicity_defect =
      (state * std::exp(i_unit * (seed.quasienergy * period)) -
       seed.coefficients)
          .norm();
  if (periodicity_defect > 1e-6) {
    std::ostringstream msg;
    msg << "mode_time_series: periodicity defect " << periodicity_defect
        << " exceeds 1e-6 (seed inconsistent with the propagation scheme)";
    throw NumericalError(msg.str());
  }

  mode.mean_energy = mean_energy(mode, lattice, basis);
  return mode;
}

double mean_energy(const FloquetMode& mode, const LatticeSpec& lattice,
                   const PlaneWaveBasis& basis) {
  if (mode.samples.empty())
    throw ConfigError("mean_energy: mode has no samples");
  // Coefficients are L2-scaled by 1/sqrt(R); <Psi|H|Psi> = R c^dag H c.
  double sum = 0.0;
  for (const FloquetTimeSample& sample : mode.samples) {
    const Eigen::MatrixXcd h = build_hamiltonian(lattice, basis, sample.t);
    sum += basis.supercell *
           (sample.coefficients.adjoint() * h * sample.coefficients)(0).real();
  }
  return sum / static_cast<double>(mode.samples.size());
}

std::vector<double> mean_energies(const LatticeSpec& lattice,
                                  const PlaneWaveBasis& basis,
                                  const std::vector<FloquetSeed>& seeds,
                                  int substeps, int n_energy_samples) {
  const double period = require_period(lattice);
  if (seeds.empty())
    return {};
  if (n_energy_samples < 1)
    throw ConfigError("mean_energies: need at least one sample");
  const int per_sample =
      std::max(1, (substeps + n_energy_samples - 1) / n_energy_samples);
  const int total_steps = per_sample * n_energy_samples;
  const double dt = period / total_steps;

  Eigen::MatrixXcd state(basis.size(), seeds.size());
  for (std::size_t j = 0; j < seeds.size(); ++j)
    state.col(j) = seeds[j].coefficients;

  Eigen::VectorXd sums = Eigen::VectorXd::Zero(seeds.size());
  for (int s = 0; s < n_energy_samples; ++s) {
    const double t_sample = s * period / n_energy_samples;
    const Eigen::MatrixXcd h = build_hamiltonian(lattice, basis, t_sample);
    const Eigen::MatrixXcd h_state = h * state;
    for (std::size_t j = 0; j < seeds.size(); ++j)
      sums(j) += state.col(j).dot(h_state.col(j)).real();
    for (int j = 0; j < per_sample; ++j) {
      const double t_mid = t_sample + (j + 0.5) * dt;
      apply_substep(lattice, basis, t_mid, dt, state);
    }
  }

  std::vector<double> means(seeds.size());
  for (std::size_t j = 0; j < seeds.size(); ++j)
    means[j] = sums(j) / n_energy_samples;
  return means;
}

} // namespace lsinv
