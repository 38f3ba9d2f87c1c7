#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qws {

// Normalized Gaussian packet on the integer lattice,
//   psi_j = norm * exp(-(j - mu)^2 / (2 sigma^2)) * exp(i k0 j),
// with the continuum normalization |norm| = 1 / (pi^{1/4} sqrt(sigma)).
struct GaussianPacket {
  double mu;
  double sigma;
  double k0;
  double norm;
};

// Throws std::invalid_argument unless sigma > 0 and k0 lies in (-pi, pi].
GaussianPacket make_gaussian_packet(double mu, double sigma, double k0);

struct SiteWindow {
  int j_min;
  int j_max;
};

// Window covering mu +- 8 sigma (rounded outward): the truncated mass is
// below 1e-14 of the total.
SiteWindow default_window(const GaussianPacket& packet);

// Position amplitudes on the window, psi[i] for site j_min + i.
std::vector<std::complex<double>> sample_position(const GaussianPacket& packet,
                                                  const SiteWindow& window);

// Continuum approximation of the momentum amplitude,
//   g(k) = sqrt(sigma / sqrt(pi)) exp(-(k - k0)^2 sigma^2 / 2) exp(-i mu k).
std::complex<double> momentum_amplitude_approx(const GaussianPacket& packet,
                                               double k);

// Exact lattice momentum amplitude as the periodic image sum
//   sqrt(sigma / sqrt(pi)) * sum_{|n| <= n_terms}
//     exp(-(k - k0 + 2 pi n)^2 sigma^2 / 2) exp(-i mu (k + 2 pi n)).
// n_terms = 0 keeps the central image only and equals the approximation.
std::complex<double> momentum_amplitude_exact(const GaussianPacket& packet,
                                              double k, int n_terms = 3);

// |g(k)|^2 of the continuum approximation (no mu dependence).
double momentum_density(const GaussianPacket& packet, double k);

struct ValidityReport {
  bool ok;
  std::string reason;   // empty when ok
};

// Checks the regime the asymptotic scattering formulas assume: sigma >= 5
// (image sum negligible) and min(|k0|, pi - |k0|) >= 5 / sigma (reflected
// and transmitted peaks stay clear of the band edges k = 0, pi).
ValidityReport validity_check(const GaussianPacket& packet);

}  // namespace qws
