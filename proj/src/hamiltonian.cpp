#include "lsinv/hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "lsinv/errors.hpp"

namespace lsinv {

Eigen::MatrixXcd build_hamiltonian(const LatticeSpec& lattice,
                                   const PlaneWaveBasis& basis, double t) {
  if (basis.k_max < 0)
    throw ConfigError("basis: k_max must be non-negative");
  if (std::abs(basis.supercell - lattice.supercell()) >
      1e-12 * lattice.supercell())
    throw ConfigError("basis: supercell size does not match the lattice");

  const int size = basis.size();
  const double R = basis.supercell;
  const double delta = lattice.width();
  const double d = lattice.displacement(t);
  const Complex i_unit(0.0, 1.0);

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);

  // Potential part depends on mu, nu only through m = nu - mu.
  // hat_v(m) = (sqrt(pi)/R) sum_n Lambda_n Delta exp[i q (X_n + d) - q^2 Delta^2/4],
  // q = 2 pi m / R.
  std::vector<Complex> hat_v(2 * size - 1);
  for (int m = -(size - 1); m <= size - 1; ++m) {
    const double q = 2.0 * pi * m / R;
    const double envelope = std::exp(-q * q * delta * delta / 4.0);
    Complex sum(0.0, 0.0);
    for (std::size_t n = 0; n < lattice.centers().size(); ++n) {
      sum += lattice.strengths()[n] *
             std::exp(i_unit * (q * (lattice.centers()[n] + d)));
    }
    hat_v[m + size - 1] = std::sqrt(pi) / R * delta * envelope * sum;
  }

  for (int row = 0; row < size; ++row) {
    const double k_mu = basis.wavenumber(basis.mode(row));
    h(row, row) = 0.5 * k_mu * k_mu;
    for (int col = 0; col < size; ++col) {
      const int m = basis.mode(col) - basis.mode(row);
      h(row, col) += hat_v[m + size - 1];
    }
  }
  return h;
}

double hermiticity_defect(const Eigen::MatrixXcd& matrix) {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

void hermitian_eigensolve(const Eigen::MatrixXcd& matrix,
                          Eigen::VectorXd& eigenvalues,
                          Eigen::MatrixXcd& eigenvectors) {
  if (matrix.rows() != matrix.cols())
    throw ConfigError("eigensolve: matrix must be square");
  const double defect = hermiticity_defect(matrix);
  if (defect > 1e-12)
    throw NumericalError("eigensolve: matrix not Hermitian (defect " +
                         std::to_string(defect) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigensolve: Hermitian eigendecomposition failed "
                         "to converge");
  eigenvalues = solver.eigenvalues();
  eigenvectors = solver.eigenvectors();

  const double scale =
      std::max({std::abs(eigenvalues(0)),
                std::abs(eigenvalues(eigenvalues.size() - 1)), 1e-300});
  const double residual =
      (matrix * eigenvectors - eigenvectors * eigenvalues.asDiagonal())
          .colwise()
          .norm()
          .maxCoeff();
  if (residual > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "eigensolve: residual " << residual << " exceeds 1e-10 * ||H|| = "
        << 1e-10 * scale;
    throw NumericalError(msg.str());
  }
}

std::vector<WaveState> eigensolve(const Eigen::MatrixXcd& hamiltonian,
                                  const PlaneWaveBasis& basis,
                                  const Grid& grid) {
  if (hamiltonian.rows() != basis.size())
    throw ConfigError("eigensolve: matrix size does not match basis");

  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
  hermitian_eigensolve(hamiltonian, energies, vectors);

  const double norm_scale = 1.0 / std::sqrt(basis.supercell);
  std::vector<WaveState> states(basis.size());
  for (int j = 0; j < basis.size(); ++j) {
    WaveState& s = states[j];
    s.energy = energies(j);
    s.coefficients = vectors.col(j) * norm_scale;
    s.grid = grid;
    synthesize_wavefunction(s.coefficients, basis, grid, s.psi, s.dpsi);
  }
  return states;
}

void synthesize_wavefunction(const Eigen::VectorXcd& coefficients,
                             const PlaneWaveBasis& basis, const Grid& grid,
                             Eigen::VectorXcd& psi, Eigen::VectorXcd& dpsi) {
  if (coefficients.size() != basis.size())
    throw ConfigError("synthesize: coefficient count does not match basis");
  psi.resize(grid.n_points);
  dpsi.resize(grid.n_points);
  const Complex i_unit(0.0, 1.0);
  for (int g = 0; g < grid.n_points; ++g) {
    const double x = grid.point(g);
    Complex value(0.0, 0.0);
    Complex derivative(0.0, 0.0);
    for (int idx = 0; idx < basis.size(); ++idx) {
      const double k = basis.wavenumber(basis.mode(idx));
      const Complex wave = coefficients(idx) * std::exp(i_unit * (k * x));
      value += wave;
      derivative += i_unit * k * wave;
    }
    psi(g) = value;
    dpsi(g) = derivative;
  }
}

namespace {

// Fold x into [-R/2, R/2) for well-conditioned phase arguments; the
// expansion itself is exactly R-periodic.
double fold(double x, double supercell) {
  double u = std::remainder(x, supercell);
  if (u >= supercell / 2.0)
    u -= supercell;
  return u;
}

} // namespace

Complex evaluate_wavefunction(const Eigen::VectorXcd& coefficients,
                              const PlaneWaveBasis& basis, double x) {
  const double u = fold(x, basis.supercell);
  const Complex i_unit(0.0, 1.0);
  Complex value(0.0, 0.0);
  for (int idx = 0; idx < basis.size(); ++idx) {
    const double k = basis.wavenumber(basis.mode(idx));
    value += coefficients(idx) * std::exp(i_unit * (k * u));
  }
  return value;
}

Complex evaluate_wavefunction_derivative(const Eigen::VectorXcd& coefficients,
                                         const PlaneWaveBasis& basis,
                                         double x) {
  const double u = fold(x, basis.supercell);
  const Complex i_unit(0.0, 1.0);
  Complex value(0.0, 0.0);
  for (int idx = 0; idx < basis.size(); ++idx) {
    const double k = basis.wavenumber(basis.mode(idx));
    value += i_unit * k * coefficients(idx) * std::exp(i_unit * (k * u));
  }
  return value;
}

} // namespace lsinv
