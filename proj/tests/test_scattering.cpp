#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "qwscatter/checks.hpp"
#include "qwscatter/quadrature.hpp"
#include "qwscatter/scattering.hpp"

using namespace qws;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("closed forms at delta = 2, k = pi/2") {
  const ScatterPoint p = scatter_point(2.0, 0.5 * pi);
  CHECK(std::abs(p.reflection - 0.5) < 1e-15);
  CHECK(std::abs(p.transmission - 0.5) < 1e-15);
  CHECK(std::abs(p.phase - 0.25 * pi) < 1e-15);
  CHECK(std::abs(p.d_reflection - 0.25) < 1e-15);
  CHECK(std::abs(p.d_transmission + 0.25) < 1e-15);
  CHECK(std::abs(p.d_phase + 0.25) < 1e-15);
  CHECK_FALSE(p.degenerate);
}

TEST_CASE("closed forms at delta = 1, k = pi/3") {
  const ScatterPoint p = scatter_point(1.0, pi / 3.0);
  CHECK(std::abs(p.reflection - 0.25) < 1e-15);
  CHECK(std::abs(p.transmission - 0.75) < 1e-15);
  CHECK(std::abs(p.phase - pi / 3.0) < 1e-15);
  CHECK(std::abs(p.d_reflection - 0.375) < 1e-15);
  CHECK(std::abs(p.d_phase + 0.25 * std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("conservation and parity over the zone") {
  for (double delta : {-3.0, -0.7, 0.4, 1.0, 4.0}) {
    for (int i = 1; i < 30; ++i) {
      const double k = -pi + i * 2.0 * pi / 30.0;
      const ScatterPoint p = scatter_point(delta, k);
      const ScatterPoint m = scatter_point(-delta, k);
      CHECK(p.reflection + p.transmission == 1.0);
      CHECK(p.d_reflection + p.d_transmission == 0.0);
      CHECK(p.reflection == m.reflection);
      CHECK(p.phase == -m.phase);
      CHECK(p.d_reflection == -m.d_reflection);
      CHECK(p.reflection >= 0.0);
      CHECK(p.transmission >= 0.0);
    }
  }
}

TEST_CASE("free propagation and the degenerate point") {
  const ScatterPoint free = scatter_point(0.0, 0.5);
  CHECK_FALSE(free.degenerate);
  CHECK(free.reflection == 0.0);
  CHECK(free.transmission == 1.0);
  CHECK(std::abs(free.phase - 0.5 * pi) < 1e-15);
  CHECK(std::abs(free.d_phase + 1.0 / (2.0 * std::sin(0.5))) < 1e-15);
  CHECK(scatter_point(0.0, -0.5).phase == -free.phase);

  const ScatterPoint deg = scatter_point(0.0, 0.0);
  CHECK(deg.degenerate);
  CHECK(deg.reflection == 0.0);
  CHECK(deg.transmission == 1.0);
  CHECK(deg.phase == 0.0);
  CHECK(deg.d_phase == 0.0);

  // sin(pi) is not zero in floating point, so k = pi is a regular free point
  // with a finite (huge) phase slope rather than a degenerate one.
  const ScatterPoint edge = scatter_point(0.0, pi);
  CHECK_FALSE(edge.degenerate);
  CHECK(edge.reflection == 0.0);
  CHECK(std::abs(edge.phase - 0.5 * pi) < 1e-15);

  CHECK_THROWS_AS(scatter_point(1.0, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(scatter_point(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("amplitude ratios at delta = 2, k = pi/2") {
  const AmplitudeRatios r = amplitude_ratios(2.0, 0.5 * pi);
  CHECK(std::abs(r.b_over_a - std::complex<double>(-0.5, -0.5)) < 1e-15);
  CHECK(std::abs(r.c_over_a - std::complex<double>(0.5, -0.5)) < 1e-15);
  CHECK(std::abs(r.c_over_b - std::complex<double>(0.0, 1.0)) < 1e-15);
}

TEST_CASE("amplitude ratios reproduce the coefficients everywhere") {
  for (double delta : {-2.0, 0.6, 3.5}) {
    for (double k : {-2.8, -1.0, 0.3, 1.9}) {
      const ScatterPoint p = scatter_point(delta, k);
      const AmplitudeRatios r = amplitude_ratios(delta, k);
      CHECK(std::abs(std::norm(r.b_over_a) - p.reflection) < 1e-15);
      CHECK(std::abs(std::norm(r.c_over_a) - p.transmission) < 1e-15);
      // Transmitted and reflected waves stay a quarter period apart.
      CHECK(std::abs(std::abs(std::arg(r.c_over_b)) - 0.5 * pi) < 1e-15);
      // Continuity at the defect site: A + B = C.
      CHECK(std::abs(1.0 + r.b_over_a - r.c_over_a) < 1e-15);
    }
  }
}

TEST_CASE("amplitude ratios at the edges of their domain") {
  CHECK_THROWS_AS(amplitude_ratios(0.0, 0.0), std::invalid_argument);
  const AmplitudeRatios free = amplitude_ratios(0.0, 1.0);
  CHECK(std::abs(free.b_over_a) == 0.0);
  CHECK(std::abs(free.c_over_a - std::complex<double>(1.0, 0.0)) < 1e-15);
  CHECK(std::isinf(free.c_over_b.imag()));
  // sin k = 0 with a defect: total reflection.
  const AmplitudeRatios wall = amplitude_ratios(1.5, pi);
  CHECK(std::abs(wall.b_over_a + 1.0) < 1e-15);
  CHECK(std::abs(wall.c_over_a) < 1e-15);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  const std::vector<double> deltas{0.3, 1.0, 2.2, 3.8};
  for (double k : {0.4, 1.1, 2.0, 2.9}) {
    CHECK(max_fd_relative_error(
              [k](double d) { return scatter_point(d, k).reflection; },
              [k](double d) { return scatter_point(d, k).d_reflection; },
              deltas) < 1e-6);
    CHECK(max_fd_relative_error(
              [k](double d) { return scatter_point(d, k).phase; },
              [k](double d) { return scatter_point(d, k).d_phase; },
              deltas) < 1e-6);
  }
  // Negative control: a 1% bias must be caught by the same comparator.
  CHECK(max_fd_relative_error(
            [](double d) { return scatter_point(d, 1.1).reflection; },
            [](double d) { return 1.01 * scatter_point(d, 1.1).d_reflection; },
            deltas) > 1e-3);
}

TEST_CASE("scattered packet conserves probability and splits it as R and T") {
  const GaussianPacket packet = make_gaussian_packet(-50.0, 5.0, 0.5 * pi);
  const ScatteredPacket sp = scatter_packet(packet, 2.0);
  const std::vector<double> splits{-packet.k0 - 2.0, -packet.k0,
                                   -packet.k0 + 2.0, packet.k0 - 2.0,
                                   packet.k0,        packet.k0 + 2.0};
  const double reflected_mass =
      integrate_split([&](double k) { return std::norm(sp.reflected(k)); },
                      -pi, pi, splits, 1e-12)
          .value;
  const double transmitted_mass =
      integrate_split([&](double k) { return std::norm(sp.transmitted(k)); },
                      -pi, pi, splits, 1e-12)
          .value;
  CHECK(std::abs(reflected_mass + transmitted_mass - 1.0) < 1e-8);

  const GaussianProbs probs = gaussian_probs(packet.k0, packet.sigma, 2.0);
  CHECK(std::abs(reflected_mass - probs.rho) < 1e-8);
  CHECK(std::abs(transmitted_mass - probs.tau) < 1e-8);
}

TEST_CASE("packet-averaged probabilities against frozen references") {
  // References from an independent 4e6-point Simpson integration.
  const struct {
    double k0, sigma, delta, tau;
  } cases[] = {
      {1.6, 15.0, 1.0, 0.799506},
      {0.78, 15.0, 1.0, 0.662912},
      {0.44, 15.0, 1.0, 0.418364},
      {1.6, 15.0, 2.0, 0.499230},
      {1.6, 15.0, 3.0, 0.307037},
  };
  for (const auto& c : cases) {
    const GaussianProbs p = gaussian_probs(c.k0, c.sigma, c.delta);
    CHECK(std::abs(p.tau - c.tau) < 1e-6);
    CHECK(std::abs(p.rho + p.tau - 1.0) < 1e-9);
  }
  // The sharpest-packet case sits within its coarse design band too.
  CHECK(std::abs(gaussian_probs(1.6, 15.0, 3.0).tau - 0.3075) < 2e-3);
}

TEST_CASE("free packets transmit completely") {
  const GaussianProbs p = gaussian_probs(1.0, 10.0, 0.0);
  CHECK(p.rho == 0.0);
  CHECK(std::abs(p.tau - 1.0) < 1e-9);
}

TEST_CASE("tau derivative is consistent and vanishes at delta = 0") {
  CHECK(gaussian_tau_derivative(1.1, 10.0, 0.0) == 0.0);
  const auto tau_of = [](double d) {
    return gaussian_probs(1.3, 12.0, d, 1e-13).tau;
  };
  const auto dtau_of = [](double d) {
    return gaussian_tau_derivative(1.3, 12.0, d, 1e-13);
  };
  CHECK(max_fd_relative_error(tau_of, dtau_of, {0.5, 1.5, 3.0}) < 1e-6);
  CHECK(gaussian_tau_derivative(1.3, 12.0, 1.5) < 0.0);
}
