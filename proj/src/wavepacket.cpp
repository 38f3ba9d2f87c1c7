#include "qwscatter/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qws {

namespace {
constexpr double k_pi = std::numbers::pi;
}

GaussianPacket make_gaussian_packet(double mu, double sigma, double k0) {
  if (!std::isfinite(mu)) {
    throw std::invalid_argument("packet: mu must be finite");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("packet: sigma must be positive");
  }
  if (!(k0 > -k_pi && k0 <= k_pi)) {
    std::ostringstream msg;
    msg << "packet: k0 must lie in (-pi, pi], got " << k0;
    throw std::invalid_argument(msg.str());
  }
  GaussianPacket p;
  p.mu = mu;
  p.sigma = sigma;
  p.k0 = k0;
  p.norm = 1.0 / (std::pow(k_pi, 0.25) * std::sqrt(sigma));
  return p;
}

SiteWindow default_window(const GaussianPacket& packet) {
  SiteWindow w;
  w.j_min = static_cast<int>(std::floor(packet.mu - 8.0 * packet.sigma));
  w.j_max = static_cast<int>(std::ceil(packet.mu + 8.0 * packet.sigma));
  return w;
}

std::vector<std::complex<double>> sample_position(const GaussianPacket& packet,
                                                  const SiteWindow& window) {
  if (window.j_max < window.j_min) {
    throw std::invalid_argument("sample_position: empty window");
  }
  std::vector<std::complex<double>> psi;
  psi.reserve(window.j_max - window.j_min + 1);
  for (int j = window.j_min; j <= window.j_max; ++j) {
    const double x = (j - packet.mu) / packet.sigma;
    const double envelope = packet.norm * std::exp(-0.5 * x * x);
    psi.push_back(std::polar(envelope, packet.k0 * j));
  }
  return psi;
}

std::complex<double> momentum_amplitude_approx(const GaussianPacket& packet,
                                               double k) {
  const double q = k - packet.k0;
  const double amp = std::sqrt(packet.sigma / std::sqrt(k_pi)) *
                     std::exp(-0.5 * q * q * packet.sigma * packet.sigma);
  return std::polar(amp, -packet.mu * k);
}

std::complex<double> momentum_amplitude_exact(const GaussianPacket& packet,
                                              double k, int n_terms) {
  if (n_terms < 0) {
    throw std::invalid_argument("momentum_amplitude_exact: n_terms must be >= 0");
  }
  const double scale = std::sqrt(packet.sigma / std::sqrt(k_pi));
  std::complex<double> sum = 0.0;
  for (int n = -n_terms; n <= n_terms; ++n) {
    const double q = k - packet.k0 + 2.0 * k_pi * n;
    const double amp =
        scale * std::exp(-0.5 * q * q * packet.sigma * packet.sigma);
    sum += std::polar(amp, -packet.mu * (k + 2.0 * k_pi * n));
  }
  return sum;
}

double momentum_density(const GaussianPacket& packet, double k) {
  const double q = k - packet.k0;
  return packet.sigma / std::sqrt(k_pi) *
         std::exp(-q * q * packet.sigma * packet.sigma);
}

ValidityReport validity_check(const GaussianPacket& packet) {
  std::ostringstream why;
  if (packet.sigma < 5.0) {
    why << "sigma = " << packet.sigma
        << " < 5: periodic images of g(k) are not negligible";
    return {false, why.str()};
  }
  const double edge_gap = std::min(std::abs(packet.k0), k_pi - std::abs(packet.k0));
  if (edge_gap < 5.0 / packet.sigma) {
    why << "min(|k0|, pi - |k0|) = " << edge_gap << " < 5/sigma = "
        << 5.0 / packet.sigma
        << ": packet overlaps a band edge where v_g vanishes";
    return {false, why.str()};
  }
  return {true, ""};
}

}  // namespace qws
