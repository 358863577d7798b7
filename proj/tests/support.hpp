#ifndef LSINV_TESTS_SUPPORT_HPP
#define LSINV_TESTS_SUPPORT_HPP

#include <complex>
#include <random>

#include "lsinv/domain.hpp"
#include "lsinv/hamiltonian.hpp"

namespace lsinv::testing {

/// WaveState from raw expansion coefficients (no normalization imposed).
inline WaveState make_state(const Eigen::VectorXcd& coefficients,
                            const PlaneWaveBasis& basis, const Grid& grid,
                            double energy = 0.0) {
  WaveState state;
  state.energy = energy;
  state.coefficients = coefficients;
  state.grid = grid;
  synthesize_wavefunction(coefficients, basis, grid, state.psi, state.dpsi);
  return state;
}

/// Coefficient vector with a single unit entry at plane-wave index mu.
inline Eigen::VectorXcd unit_mode(const PlaneWaveBasis& basis, int mu) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(basis.size());
  c(basis.index(mu)) = 1.0;
  return c;
}

inline Eigen::VectorXcd random_coefficients(const PlaneWaveBasis& basis,
                                            unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXcd c(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    c(i) = std::complex<double>(dist(rng), dist(rng));
  // Damp high modes so derivatives stay moderate.
  for (int i = 0; i < basis.size(); ++i) {
    const int mu = basis.mode(i);
    c(i) /= 1.0 + mu * mu / 16.0;
  }
  return c / std::sqrt(static_cast<double>(basis.size()));
}

} // namespace lsinv::testing

#endif
