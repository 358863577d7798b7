#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lsinv/errors.hpp"
#include "lsinv/hamiltonian.hpp"
#include "support.hpp"

using namespace lsinv;
using lsinv::testing::make_state;
using lsinv::testing::random_coefficients;
using lsinv::testing::unit_mode;

namespace {

// Simpson quadrature of (1/R) integral of V(x) exp(i 2 pi m x / R) over the
// supercell: the independent oracle for the analytic matrix elements.
Complex potential_fourier_quadrature(const LatticeSpec& lattice, int m,
                                     int n_intervals = 40000) {
  const double R = lattice.supercell();
  const double h = R / n_intervals;
  const Complex i_unit(0.0, 1.0);
  auto f = [&](double x) {
    // untruncated Gaussian sum, as in the analytic element
    double v = 0.0;
    for (std::size_t n = 0; n < lattice.centers().size(); ++n) {
      const double u = (x - lattice.centers()[n]) / lattice.width();
      v += lattice.strengths()[n] * std::exp(-u * u);
    }
    return v * std::exp(i_unit * (2.0 * pi * m * x / R));
  };
  Complex sum = f(-R / 2.0) + f(R / 2.0);
  for (int j = 1; j < n_intervals; ++j)
    sum += f(-R / 2.0 + j * h) * (j % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0 / R;
}

} // namespace

TEST_CASE("build_hamiltonian: free particle is purely kinetic") {
  const LatticeSpec lattice(25.0, {0.0}, {0.0}, 0.5);
  const PlaneWaveBasis basis{4, 25.0};
  const Eigen::MatrixXcd h = build_hamiltonian(lattice, basis);
  for (int row = 0; row < basis.size(); ++row) {
    const int mu = basis.mode(row);
    CHECK(std::abs(h(row, row) - 2.0 * pi * pi * mu * mu / 625.0) < 1e-14);
    for (int col = 0; col < basis.size(); ++col)
      if (col != row)
        CHECK(std::abs(h(row, col)) < 1e-15);
  }
  // kinetic term at mu = 1, R = 25
  CHECK(h(basis.index(1), basis.index(1)).real() ==
        doctest::Approx(2.0 * pi * pi / 625.0));
}

TEST_CASE("build_hamiltonian: Hermitian to 1e-12 and real-symmetric for a "
          "centered barrier") {
  const PlaneWaveBasis basis{16, 25.0};

  const LatticeSpec centered(25.0, {0.0}, {1.3}, 0.4);
  const Eigen::MatrixXcd h0 = build_hamiltonian(centered, basis);
  CHECK(hermiticity_defect(h0) < 1e-12);
  CHECK((h0 - h0.transpose()).cwiseAbs().maxCoeff() < 1e-15); // X_n = 0: real

  const LatticeSpec offset(25.0, {-7.0, 3.0}, {1.0, 0.8}, 0.5);
  const Eigen::MatrixXcd h1 = build_hamiltonian(offset, basis);
  CHECK(hermiticity_defect(h1) < 1e-12);
  CHECK(h1.imag().cwiseAbs().maxCoeff() > 1e-3); // genuinely complex
}

TEST_CASE("build_hamiltonian: analytic elements match quadrature to 1e-8") {
  // Barrier well inside the cell so the Gaussian tail at |x| = R/2 is
  // below 1e-12 and the full-line integral equals the supercell one.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> center(-3.0, 3.0);
  std::uniform_real_distribution<double> strength(0.3, 2.0);
  std::uniform_real_distribution<double> width(0.3, 0.8);
  const PlaneWaveBasis basis{12, 25.0};

  for (int trial = 0; trial < 6; ++trial) {
    const LatticeSpec lattice(25.0, {center(rng)}, {strength(rng)},
                              width(rng));
    const Eigen::MatrixXcd h = build_hamiltonian(lattice, basis);
    // Row mu = 0 has no kinetic contribution, so h(0, m) is purely the
    // potential element for momentum transfer m.
    for (int m : {-9, -3, 0, 2, 7}) {
      const Complex analytic = h(basis.index(0), basis.index(m));
      const Complex expected = potential_fourier_quadrature(lattice, m);
      CHECK(std::abs(analytic - expected) < 1e-8);
    }
  }
}

TEST_CASE("build_hamiltonian: rejects mismatched supercell") {
  const LatticeSpec lattice(25.0, {0.0}, {1.0}, 0.5);
  CHECK_THROWS_AS(build_hamiltonian(lattice, PlaneWaveBasis{8, 30.0}),
                  ConfigError);
}

TEST_CASE("hermitian_eigensolve: 2x2 analytic spectrum") {
  Eigen::MatrixXcd h(2, 2);
  h << 0.0, 1.0, 1.0, 0.0;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
  hermitian_eigensolve(h, energies, vectors);
  CHECK(energies(0) == doctest::Approx(-1.0));
  CHECK(energies(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eigensolve: rejects non-Hermitian input") {
  Eigen::MatrixXcd h(2, 2);
  h << 0.0, 1.0, 2.0, 0.0;
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;
  CHECK_THROWS_AS(hermitian_eigensolve(h, energies, vectors), NumericalError);
}

TEST_CASE("eigensolve: free-particle spectrum with degenerate +-mu pairs") {
  const LatticeSpec lattice(25.0, {0.0}, {0.0}, 0.5);
  const PlaneWaveBasis basis{6, 25.0};
  const Grid grid = Grid::over_supercell(25.0, 200);
  const auto states = eigensolve(build_hamiltonian(lattice, basis), basis, grid);

  REQUIRE(static_cast<int>(states.size()) == basis.size());
  CHECK(states[0].energy == doctest::Approx(0.0).epsilon(1e-12));
  for (int mu = 1; mu <= 6; ++mu) {
    const double expected = 2.0 * pi * pi * mu * mu / 625.0;
    CHECK(states[2 * mu - 1].energy == doctest::Approx(expected));
    CHECK(states[2 * mu].energy == doctest::Approx(expected));
  }
}

TEST_CASE("eigensolve: states are L2-orthonormal over the supercell") {
  const LatticeSpec lattice =
      LatticeSpec::uniform_chain(3, 5.0, 1.0, 0.5).with_strength(1, 0.8);
  const PlaneWaveBasis basis{10, 15.0};
  const Grid grid = Grid::over_supercell(15.0, 150);
  const auto states = eigensolve(build_hamiltonian(lattice, basis), basis, grid);

  double defect = 0.0;
  for (std::size_t a = 0; a < states.size(); ++a) {
    for (std::size_t b = 0; b < states.size(); ++b) {
      const Complex overlap = basis.supercell *
                              states[a].coefficients.dot(states[b].coefficients);
      defect += std::abs(overlap - (a == b ? 1.0 : 0.0));
    }
  }
  CHECK(defect < 1e-10);
}

TEST_CASE("eigensolve: ground-state energy is variational in k_max") {
  const LatticeSpec lattice =
      LatticeSpec::uniform_chain(5, 5.0, 1.0, 0.5).with_strength(2, 0.8);
  const Grid grid = Grid::over_supercell(25.0, 100);
  double previous = 1e300;
  for (int k_max : {8, 16, 32, 64}) {
    const PlaneWaveBasis basis{k_max, 25.0};
    const auto states =
        eigensolve(build_hamiltonian(lattice, basis), basis, grid);
    CHECK(states[0].energy <= previous + 1e-12);
    previous = states[0].energy;
  }
}

TEST_CASE("eigensolve: ground-state density is enhanced at an attractive "
          "defect") {
  // N = 5, Lambda = 1 except the central 0.8, L = 5, R = 25
  const LatticeSpec lattice =
      LatticeSpec::uniform_chain(5, 5.0, 1.0, 0.5).with_strength(2, 0.8);
  const PlaneWaveBasis basis{48, 25.0};
  const Grid grid = Grid::over_supercell(25.0, 500);
  const auto states = eigensolve(build_hamiltonian(lattice, basis), basis, grid);
  const WaveState& ground = states[0];

  auto cell_weight = [&](double center) {
    double sum = 0.0;
    for (int i = 0; i < grid.n_points; ++i)
      if (std::abs(grid.point(i) - center) <= 2.5)
        sum += std::norm(ground.psi(i));
    return sum;
  };
  CHECK(cell_weight(0.0) > cell_weight(5.0));
  CHECK(cell_weight(0.0) > cell_weight(-5.0));
}

TEST_CASE("synthesize_wavefunction: constant and single-mode expansions") {
  const PlaneWaveBasis basis{5, 25.0};
  const Grid grid = Grid::over_supercell(25.0, 64);

  Eigen::VectorXcd psi, dpsi;
  synthesize_wavefunction(unit_mode(basis, 0), basis, grid, psi, dpsi);
  CHECK((psi.array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK(dpsi.cwiseAbs().maxCoeff() < 1e-14);

  synthesize_wavefunction(unit_mode(basis, 1), basis, grid, psi, dpsi);
  CHECK((psi.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-13);
  const double k = 2.0 * pi / 25.0;
  CHECK(std::abs(psi(3) - std::exp(Complex(0.0, k * grid.point(3)))) < 1e-13);
}

TEST_CASE("synthesize_wavefunction: analytic derivative matches finite "
          "differences at second order") {
  const PlaneWaveBasis basis{8, 20.0};
  const Eigen::VectorXcd c = random_coefficients(basis, 11);

  double error_coarse = 0.0, error_fine = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const int n = pass == 0 ? 200 : 400;
    const Grid grid = Grid::over_supercell(20.0, n);
    const WaveState state = make_state(c, basis, grid);
    const double dx = grid.spacing();
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const Complex fd = (state.psi(i + 1) - state.psi(i - 1)) / (2.0 * dx);
      worst = std::max(worst, std::abs(fd - state.dpsi(i)));
    }
    (pass == 0 ? error_coarse : error_fine) = worst;
  }
  CHECK(error_coarse / error_fine > 3.0); // O(dx^2): ratio ~ 4
  CHECK(error_coarse / error_fine < 5.0);
}

TEST_CASE("evaluate_wavefunction: point evaluation wraps periodically") {
  const PlaneWaveBasis basis{6, 25.0};
  const Eigen::VectorXcd c = random_coefficients(basis, 3);
  const Complex at = evaluate_wavefunction(c, basis, 3.7);
  CHECK(std::abs(evaluate_wavefunction(c, basis, 3.7 + 25.0) - at) < 1e-12);
  CHECK(std::abs(evaluate_wavefunction(c, basis, 3.7 - 50.0) - at) < 1e-12);
  const Complex d_at = evaluate_wavefunction_derivative(c, basis, 3.7);
  CHECK(std::abs(evaluate_wavefunction_derivative(c, basis, 3.7 + 25.0) -
                 d_at) < 1e-12);
}
