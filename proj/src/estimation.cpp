#include "qwscatter/estimation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qwscatter/quadrature.hpp"
#include "qwscatter/scattering.hpp"
#include "qwscatter/wavepacket.hpp"

namespace qws {

namespace {

constexpr double k_pi = std::numbers::pi;

std::vector<double> packet_splits(double k0, double sigma) {
  return {k0 - 10.0 / sigma, k0, k0 + 10.0 / sigma};
}

// The Fisher-information bracket (dR)^2/R + (dT)^2/T + 4 (dphase)^2 in its
// reduced form 32 s^2 / D^2, which is also its limit wherever R or T
// vanishes.
double information_bracket(double delta, double k) {
  const double s = std::sin(k);
  const double d = delta * delta + 4.0 * s * s;
  if (d == 0.0) return 0.0;
  return 32.0 * s * s / (d * d);
}

double phase_derivative(double delta, double k) {
  const double s = std::sin(k);
  const double d = delta * delta + 4.0 * s * s;
  if (d == 0.0) return 0.0;
  return -2.0 * s / d;
}

}  // namespace

double qfi_gaussian(double k0, double sigma, double delta, double quad_tol) {
  if (delta == 0.0) {
    // At delta = 0 the phase derivative is -1/(2 sin k), so the bracket
    // behaves like 2/sin^2 k at the band bottom and any finite-width packet
    // puts weight there: the integral grows like 2 pi |g(0)|^2 / delta with
    // no finite limit.
    return std::numeric_limits<double>::infinity();
  }
  const GaussianPacket packet = make_gaussian_packet(0.0, sigma, k0);
  const auto splits = packet_splits(k0, sigma);
  const double bracket_avg =
      integrate_split(
          [&](double k) {
            return information_bracket(delta, k) * momentum_density(packet, k);
          },
          -k_pi, k_pi, splits, quad_tol)
          .value;
  const double phase_avg =
      integrate_split(
          [&](double k) {
            return phase_derivative(delta, k) * momentum_density(packet, k);
          },
          -k_pi, k_pi, splits, quad_tol)
          .value;
  return bracket_avg - 4.0 * phase_avg * phase_avg;
}

double qfi_leading(double k0, double delta) {
  const double s = std::sin(k0);
  const double d = delta * delta + 4.0 * s * s;
  if (d == 0.0) return 0.0;
  return 16.0 * s * s / (d * d);
}

double g_h(double k0, double delta) {
  const double d2 = delta * delta;
  const double d4 = d2 * d2;
  const double c2 = std::cos(2.0 * k0);
  const double c4 = std::cos(4.0 * k0);
  const double c6 = std::cos(6.0 * k0);
  const double den = d2 + 2.0 * (1.0 - c2);
  if (den == 0.0) return 0.0;
  const double num = 3.0 * c6 + 2.0 * (5.0 * d2 - 1.0) * c4 +
                     (3.0 * d4 - 19.0) * c2 + d4 - 10.0 * d2 + 18.0;
  return 4.0 * num / (den * den * den * den);
}

double g_f(double k0, double delta) {
  const double d2 = delta * delta;
  const double d4 = d2 * d2;
  const double c2 = std::cos(2.0 * k0);
  const double c4 = std::cos(4.0 * k0);
  const double c6 = std::cos(6.0 * k0);
  const double den = d2 + 2.0 * (1.0 - c2);
  if (den == 0.0) return 0.0;
  const double num = c6 + 6.0 * d2 * c4 + (d4 - 9.0) * c2 - 6.0 * d2 + 8.0;
  return 8.0 * num / (den * den * den * den);
}

double fi_dichotomic(double k0, double sigma, double delta, double quad_tol) {
  const double dtau = gaussian_tau_derivative(k0, sigma, delta, quad_tol);
  if (dtau == 0.0) return 0.0;
  const GaussianProbs probs = gaussian_probs(k0, sigma, delta, quad_tol);
  // rho stands in for 1 - tau: it is the same quantity up to the quadrature
  // tolerance and stays accurate when tau rounds to 1.
  if (!(probs.tau > 0.0) || !(probs.rho > 0.0)) {
    std::ostringstream msg;
    msg << "fi_dichotomic: tau = " << probs.tau
        << " is at the boundary of (0, 1), information is undefined";
    throw std::domain_error(msg.str());
  }
  return dtau * dtau / (probs.tau * probs.rho);
}

double qsnr(double k0, double sigma, double delta, double quad_tol) {
  // delta^2 * qfi tends to 0 as delta -> 0 (qfi diverges only like 1/delta);
  // take the limit value rather than 0 * inf.
  if (delta == 0.0) return 0.0;
  return delta * delta * qfi_gaussian(k0, sigma, delta, quad_tol);
}

OptimalDelta optimal_delta(double k0, double sigma, double quad_tol) {
  OptimalDelta result;
  result.leading = 2.0 * std::abs(std::sin(k0));
  if (result.leading == 0.0) {
    throw std::invalid_argument("optimal_delta: sin k0 = 0, no optimum");
  }
  // Golden-section maximization of qsnr over a bracket around the
  // leading-order value (the peak is single over this range).
  double lo = 0.5 * result.leading;
  double hi = std::min(1.5 * result.leading, 4.0);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = qsnr(k0, sigma, x1, quad_tol);
  double f2 = qsnr(k0, sigma, x2, quad_tol);
  for (int iter = 0; iter < 80 && hi - lo > 1e-10; ++iter) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = qsnr(k0, sigma, x2, quad_tol);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = qsnr(k0, sigma, x1, quad_tol);
    }
  }
  result.refined = 0.5 * (lo + hi);
  return result;
}

CramerRaoBound cr_bound(double info, int m_samples) {
  if (!(info > 0.0)) {
    throw std::invalid_argument("cr_bound: information must be positive");
  }
  if (m_samples < 1) {
    throw std::invalid_argument("cr_bound: need at least one sample");
  }
  return {info, m_samples, 1.0 / (m_samples * info)};
}

EstimationReport estimation_report(double k0, double sigma, double delta,
                                   double quad_tol) {
  EstimationReport r;
  r.k0 = k0;
  r.sigma = sigma;
  r.delta = delta;
  r.qfi = qfi_gaussian(k0, sigma, delta, quad_tol);
  try {
    r.fi = fi_dichotomic(k0, sigma, delta, quad_tol);
  } catch (const std::domain_error&) {
    r.fi = std::numeric_limits<double>::quiet_NaN();
  }
  r.gamma = (r.qfi > 0.0) ? r.fi / r.qfi
                          : std::numeric_limits<double>::quiet_NaN();
  r.qsnr = (delta == 0.0) ? 0.0 : delta * delta * r.qfi;
  r.qfi_leading = qfi_leading(k0, delta);
  r.g_h = g_h(k0, delta);
  r.g_f = g_f(k0, delta);
  r.valid = validity_check(make_gaussian_packet(0.0, sigma, k0)).ok;
  return r;
}

}  // namespace qws
