#include <doctest.h>

#include <cmath>

#include "lsinv/domain.hpp"
#include "lsinv/errors.hpp"

using namespace lsinv;

TEST_CASE("map_point: translation and inversion definitions") {
  CHECK(map_point(SymmetryTransform::translation(5.0), 1.0) ==
        doctest::Approx(6.0));
  CHECK(map_point(SymmetryTransform::inversion(0.0), 3.0) ==
        doctest::Approx(-3.0));
  // fixed point at the inversion center
  CHECK(map_point(SymmetryTransform::inversion(2.0), 2.0) ==
        doctest::Approx(2.0));
}

TEST_CASE("map_point: inversion is an involution to machine precision") {
  const SymmetryTransform inv = SymmetryTransform::inversion(1.7354);
  for (double x : {-8.25, -1.0, 0.0, 0.3331, 12.75}) {
    const double back = inv.map(inv.map(x));
    CHECK(std::abs(back - x) <= 4e-16 * std::max(std::abs(x), 4.0));
  }
  const SymmetryTransform shift = SymmetryTransform::translation(2.5);
  CHECK(shift.map(shift.map(1.25)) == doctest::Approx(1.25 + 5.0));
}

TEST_CASE("potential_value: single barrier peak and compact tails") {
  const LatticeSpec lattice(25.0, {0.0}, {1.0}, 0.5);
  CHECK(lattice.potential(0.0) == doctest::Approx(1.0));
  CHECK(lattice.potential(0.5) == doctest::Approx(std::exp(-1.0)));
  // truncated to exactly zero beyond the compact support
  CHECK(lattice.potential(lattice.support_width() / 2.0 + 0.01) == 0.0);
  CHECK(lattice.potential(-1e6) == 0.0);
}

TEST_CASE("potential_value: lateral driving shifts the peak to X_n + A at t=0") {
  const LatticeSpec lattice =
      LatticeSpec::uniform_chain(5, 5.0, 1.0, 0.5, DrivingLaw{1.0, 0.5});
  // d(0) = A = 1: peak of the n-th barrier sits at X_n + 1
  for (double center : lattice.centers()) {
    CHECK(lattice.potential(center + 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(lattice.potential(center + 1.0, 0.0) >
          lattice.potential(center, 0.0));
  }
}

TEST_CASE("potential_value: defect-free lattice is exactly L-periodic inside") {
  const LatticeSpec lattice = LatticeSpec::uniform_chain(5, 5.0, 1.0, 0.5);
  const double L = 5.0, R = lattice.supercell();
  for (int i = 0; i <= 400; ++i) {
    const double x = -R / 2.0 + i * (R - L) / 400.0;
    if (x + L >= R / 2.0)
      continue;
    CHECK(std::abs(lattice.potential(x) - lattice.potential(x + L)) < 1e-12);
  }
}

TEST_CASE("potential_value: time periodicity V(t) = V(t + T)") {
  const DrivingLaw law{0.7, 0.5};
  const LatticeSpec lattice = LatticeSpec::uniform_chain(3, 5.0, 1.0, 0.5, law);
  const double T = law.period();
  for (double t : {0.0, 1.3, 4.99}) {
    for (double x : {-3.2, 0.0, 2.75}) {
      CHECK(lattice.potential(x, t) ==
            doctest::Approx(lattice.potential(x, t + T)).epsilon(1e-14));
    }
  }
}

TEST_CASE("LatticeSpec: validation rejects bad geometry") {
  CHECK_THROWS_AS(LatticeSpec(25.0, {0.0, 1.0}, {1.0}, 0.5), ConfigError);
  CHECK_THROWS_AS(LatticeSpec(25.0, {13.0}, {1.0}, 0.5), ConfigError);
  CHECK_THROWS_AS(LatticeSpec(-1.0, {0.0}, {1.0}, 0.5), ConfigError);
  // overlapping supports: two barriers closer than w
  CHECK_THROWS_AS(LatticeSpec(25.0, {0.0, 0.5}, {1.0, 1.0}, 0.5), ConfigError);
  // overlap across the periodic boundary
  CHECK_THROWS_AS(LatticeSpec(25.0, {-12.4, 12.3}, {1.0, 1.0}, 0.5),
                  ConfigError);
  CHECK_THROWS_AS(LatticeSpec(25.0, {0.0}, {1.0}, 0.5, DrivingLaw{1.0, -2.0}),
                  ConfigError);
}

TEST_CASE("LatticeSpec: support width defaults to the 1e-12 falloff, capped "
          "below the smallest gap") {
  const LatticeSpec lone(25.0, {0.0}, {1.0}, 0.5);
  CHECK(lone.support_width() ==
        doctest::Approx(2.0 * 0.5 * std::sqrt(std::log(1e12))));

  // Spacing 5 with Delta = 0.5 caps w just below the gap.
  const LatticeSpec chain = LatticeSpec::uniform_chain(5, 5.0, 1.0, 0.5);
  CHECK(chain.support_width() == doctest::Approx(0.999 * 5.0));
  CHECK(chain.support_width() < 5.0);
}

TEST_CASE("Grid: supercell cover excludes the duplicate endpoint") {
  const Grid grid = Grid::over_supercell(25.0, 500);
  CHECK(grid.n_points == 500);
  CHECK(grid.spacing() == doctest::Approx(0.05));
  CHECK(grid.point(0) == doctest::Approx(-12.5));
  CHECK(grid.point(499) == doctest::Approx(12.45));
  CHECK(grid.covers_supercell(25.0));

  const Grid partial{0.0, 1.0, 11};
  CHECK(!partial.covers_supercell(25.0));
  CHECK(partial.spacing() == doctest::Approx(0.1));
}

TEST_CASE("LatticeSpec: with_strength inserts a defect") {
  const LatticeSpec lattice = LatticeSpec::uniform_chain(5, 5.0, 1.0, 0.5);
  const LatticeSpec defective = lattice.with_strength(2, 0.8);
  CHECK(defective.strengths()[2] == doctest::Approx(0.8));
  CHECK(defective.potential(defective.centers()[2]) < 0.9);
  CHECK_THROWS_AS(lattice.with_strength(9, 1.0), ConfigError);
}
