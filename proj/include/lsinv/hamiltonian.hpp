#ifndef LSINV_HAMILTONIAN_HPP
#define LSINV_HAMILTONIAN_HPP

#include <Eigen/Core>
#include <vector>

#include "lsinv/domain.hpp"

namespace lsinv {

/// Plane-wave basis <x|mu> = exp(i 2 pi mu x / R) for mu = -k_max..+k_max,
/// periodic over the supercell of size R. Basis size is always odd.
struct PlaneWaveBasis {
  int k_max = 0;
  double supercell = 0.0;

  int size() const { return 2 * k_max + 1; }
  /// mu for a storage row/column index in [0, size).
  int mode(int index) const { return index - k_max; }
  int index(int mu) const { return mu + k_max; }
  double wavenumber(int mu) const { return 2.0 * pi * mu / supercell; }
};

/// Dense matrix of H = -(1/2) d^2/dx^2 + V(x, t) in the plane-wave basis:
/// kinetic diagonal 2 pi^2 mu^2 / R^2 plus the analytic Gaussian elements
/// (sqrt(pi)/R) sum_n Lambda_n Delta exp[i q (X_n + d(t)) - q^2 Delta^2 / 4]
/// with q = 2 pi (nu - mu) / R. The elements are the exact Fourier
/// coefficients of the supercell-periodized lattice potential.
Eigen::MatrixXcd build_hamiltonian(const LatticeSpec& lattice,
                                   const PlaneWaveBasis& basis, double t = 0.0);

/// Max elementwise deviation from H = H^dagger.
double hermiticity_defect(const Eigen::MatrixXcd& matrix);

/// Dense Hermitian eigendecomposition with a residual guarantee:
/// ||H v - E v|| <= 1e-10 ||H|| for every returned pair, else throws
/// NumericalError carrying the residual achieved. Rejects non-Hermitian
/// input (defect above 1e-12). Eigenvalues ascending, eigenvectors
/// orthonormal columns.
void hermitian_eigensolve(const Eigen::MatrixXcd& matrix,
                          Eigen::VectorXd& eigenvalues,
                          Eigen::MatrixXcd& eigenvectors);

/// Eigensolve + synthesis: stationary states sorted ascending by energy,
/// with coefficients scaled so the supercell L2 norm is one, and psi/dpsi
/// sampled on the grid via the analytic basis expansion.
std::vector<WaveState> eigensolve(const Eigen::MatrixXcd& hamiltonian,
                                  const PlaneWaveBasis& basis,
                                  const Grid& grid);

/// psi(x) = sum_mu c_mu exp(i 2 pi mu x / R) and its analytic derivative,
/// evaluated on the grid.
void synthesize_wavefunction(const Eigen::VectorXcd& coefficients,
                             const PlaneWaveBasis& basis, const Grid& grid,
                             Eigen::VectorXcd& psi, Eigen::VectorXcd& dpsi);

/// Point evaluation of the expansion (value, derivative). Positions are
/// folded into [-R/2, R/2); the expansion is exactly R-periodic.
Complex evaluate_wavefunction(const Eigen::VectorXcd& coefficients,
                              const PlaneWaveBasis& basis, double x);
Complex evaluate_wavefunction_derivative(const Eigen::VectorXcd& coefficients,
                                         const PlaneWaveBasis& basis, double x);

} // namespace lsinv

#endif
