#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qwscatter/lattice.hpp"
#include "qwscatter/scattering.hpp"

using namespace qws;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("spec validation rejects malformed lattices") {
  CHECK_THROWS_AS(validate(LatticeSpec{4, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LatticeSpec{1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LatticeSpec{-5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(LatticeSpec{5, std::nan("")}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(LatticeSpec{5, 1.0, 2.0}), std::invalid_argument);
  CHECK_NOTHROW(validate(LatticeSpec{5, -3.0}));
}

TEST_CASE("site indexing is centered") {
  const LatticeSpec spec{7, 0.5};
  CHECK(spec.j_min() == -3);
  CHECK(spec.j_max() == 3);
  CHECK(spec.index_of(0) == 3);
  CHECK(spec.index_of(-3) == 0);
  CHECK(spec.defect_site() == 0);
}

TEST_CASE("hamiltonian has the defect on the center diagonal") {
  const LatticeSpec spec{5, 2.5};
  const TridiagonalMatrix h = build_hamiltonian(spec);
  CHECK(h.diag == std::vector<double>{2.0, 2.0, 4.5, 2.0, 2.0});
  CHECK(h.off == std::vector<double>(4, -1.0));
}

TEST_CASE("H recomposes exactly from -L + V") {
  const LatticeSpec spec{9, -1.7};
  const TridiagonalMatrix h = build_hamiltonian(spec);
  const HamiltonianSplit parts = split_hamiltonian(spec);
  for (int i = 0; i < spec.n_sites; ++i) {
    CHECK(-parts.laplacian.diag[i] + parts.potential[i] == h.diag[i]);
  }
  for (int i = 0; i + 1 < spec.n_sites; ++i) {
    CHECK(-parts.laplacian.off[i] == h.off[i]);
  }
}

TEST_CASE("dispersion relation and velocities") {
  CHECK(dispersion(0.0).energy == 0.0);
  CHECK(std::abs(dispersion(pi).energy - 4.0) < 1e-15);
  CHECK(std::abs(dispersion(0.5 * pi).energy - 2.0) < 1e-15);
  CHECK(std::abs(dispersion(0.5 * pi).group_velocity - 2.0) < 1e-15);
  CHECK(std::abs(dispersion(0.5 * pi).phase_velocity - 4.0 / pi) < 1e-15);
  CHECK(dispersion(0.0).phase_velocity == 0.0);
  CHECK(dispersion(0.0).group_velocity == 0.0);
  // Odd/even structure across the zone.
  CHECK(dispersion(-1.1).energy == dispersion(1.1).energy);
  CHECK(dispersion(-1.1).group_velocity == -dispersion(1.1).group_velocity);
  CHECK_THROWS_AS(dispersion(-pi), std::invalid_argument);
  CHECK_THROWS_AS(dispersion(4.0), std::invalid_argument);
}

TEST_CASE("free plane wave satisfies the recurrence") {
  const double k = 0.9;
  const double energy = dispersion(k).energy;
  std::vector<std::complex<double>> psi;
  for (int j = -10; j <= 10; ++j) psi.push_back(std::polar(1.0, k * j));
  CHECK(recurrence_residual(psi, -10, energy, 0.0) < 1e-12);
  // Negative control: a wrong energy leaves a visible residual.
  CHECK(recurrence_residual(psi, -10, energy + 0.1, 0.0) > 0.01);
}

TEST_CASE("scattering state satisfies the recurrence through the defect") {
  const double delta = 2.0, k = 0.9;
  const double energy = dispersion(k).energy;
  const AmplitudeRatios r = amplitude_ratios(delta, k);
  std::vector<std::complex<double>> psi;
  for (int j = -8; j <= 8; ++j) {
    if (j <= 0) {
      psi.push_back(std::polar(1.0, k * j) +
                    r.b_over_a * std::polar(1.0, -k * j));
    } else {
      psi.push_back(r.c_over_a * std::polar(1.0, k * j));
    }
  }
  CHECK(recurrence_residual(psi, -8, energy, delta) < 1e-12);
  // The defect row is what distinguishes the state: dropping delta breaks it.
  CHECK(recurrence_residual(psi, -8, energy, 0.0) > 0.1);
}

TEST_CASE("recurrence residual needs at least three sites") {
  std::vector<std::complex<double>> psi(2, 1.0);
  CHECK_THROWS_AS(recurrence_residual(psi, 0, 1.0, 0.0),
                  std::invalid_argument);
}
