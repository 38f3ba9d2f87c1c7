#include "qwscatter/scattering.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qwscatter/quadrature.hpp"

namespace qws {

namespace {

constexpr double k_pi = std::numbers::pi;

void require_zone(double k, const char* who) {
  if (!(k > -k_pi && k <= k_pi)) {
    std::ostringstream msg;
    msg << who << ": k must lie in (-pi, pi], got " << k;
    throw std::invalid_argument(msg.str());
  }
}

// B/A and C/A without the C/B ratio, safe everywhere except the degenerate
// point (where they are simply not called).
std::complex<double> ratio_b(double delta, double s) {
  return delta / std::complex<double>(-delta, 2.0 * s);
}

std::complex<double> ratio_c(double delta, double s) {
  return std::complex<double>(0.0, 2.0 * s) /
         std::complex<double>(-delta, 2.0 * s);
}

// Interior points seeding the adaptive subdivision: the packet peak and the
// 10/sigma shoulders on each side.
std::vector<double> packet_splits(double k0, double sigma) {
  return {k0 - 10.0 / sigma, k0, k0 + 10.0 / sigma};
}

}  // namespace

ScatterPoint scatter_point(double delta, double k) {
  require_zone(k, "scatter_point");
  if (!std::isfinite(delta)) {
    throw std::invalid_argument("scatter_point: delta must be finite");
  }
  const double s = std::sin(k);
  ScatterPoint p;
  p.delta = delta;
  p.k = k;
  p.degenerate = (delta == 0.0 && s == 0.0);
  if (p.degenerate) {
    p.reflection = 0.0;
    p.transmission = 1.0;
    p.phase = 0.0;
    p.d_reflection = 0.0;
    p.d_transmission = 0.0;
    p.d_phase = 0.0;
    return p;
  }
  const double d = delta * delta + 4.0 * s * s;
  p.reflection = delta * delta / d;
  p.transmission = 1.0 - p.reflection;
  p.phase = (delta == 0.0) ? std::copysign(0.5 * k_pi, s)
                           : std::atan(2.0 * s / delta);
  p.d_reflection = 8.0 * delta * s * s / (d * d);
  p.d_transmission = -p.d_reflection;
  p.d_phase = -2.0 * s / d;
  return p;
}

AmplitudeRatios amplitude_ratios(double delta, double k) {
  require_zone(k, "amplitude_ratios");
  const double s = std::sin(k);
  if (delta == 0.0 && s == 0.0) {
    throw std::invalid_argument(
        "amplitude_ratios: undefined at delta = 0, sin k = 0");
  }
  AmplitudeRatios r;
  r.b_over_a = ratio_b(delta, s);
  r.c_over_a = ratio_c(delta, s);
  if (delta == 0.0) {
    // Free propagation: B = 0, so C/B diverges along the imaginary axis.
    r.c_over_b = std::complex<double>(
        0.0, std::copysign(std::numeric_limits<double>::infinity(), s));
  } else {
    r.c_over_b = std::complex<double>(0.0, 2.0 * s / delta);
  }
  return r;
}

ScatteredPacket scatter_packet(const GaussianPacket& packet, double delta) {
  if (!std::isfinite(delta)) {
    throw std::invalid_argument("scatter_packet: delta must be finite");
  }
  ScatteredPacket out;
  out.incident = packet;
  out.delta = delta;
  out.transmitted = [packet, delta](double k) {
    return ratio_c(delta, std::sin(k)) * momentum_amplitude_approx(packet, k);
  };
  out.reflected = [packet, delta](double k) {
    // The branch at momentum k originates from the incident component at -k.
    return ratio_b(delta, std::sin(-k)) *
           momentum_amplitude_approx(packet, -k);
  };
  return out;
}

GaussianProbs gaussian_probs(double k0, double sigma, double delta,
                             double quad_tol) {
  const GaussianPacket packet = make_gaussian_packet(0.0, sigma, k0);
  const auto splits = packet_splits(k0, sigma);
  const auto rho = integrate_split(
      [&](double k) {
        return scatter_point(delta, k).reflection * momentum_density(packet, k);
      },
      -k_pi, k_pi, splits, quad_tol);
  const auto tau = integrate_split(
      [&](double k) {
        return scatter_point(delta, k).transmission *
               momentum_density(packet, k);
      },
      -k_pi, k_pi, splits, quad_tol);
  return {rho.value, tau.value};
}

double gaussian_tau_derivative(double k0, double sigma, double delta,
                               double quad_tol) {
  const GaussianPacket packet = make_gaussian_packet(0.0, sigma, k0);
  const auto result = integrate_split(
      [&](double k) {
        return scatter_point(delta, k).d_transmission *
               momentum_density(packet, k);
      },
      -k_pi, k_pi, packet_splits(k0, sigma), quad_tol);
  return result.value;
}

}  // namespace qws
