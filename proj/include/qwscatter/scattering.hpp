#pragma once

#include <complex>
#include <functional>

#include "qwscatter/wavepacket.hpp"

namespace qws {

// Plane-wave scattering data at momentum k for defect height delta.
// With s = sin k and D = delta^2 + 4 s^2:
//   R = delta^2 / D, T = 4 s^2 / D, phase = arctan(2 s / delta),
// and the delta-derivatives d_reflection = 8 delta s^2 / D^2,
// d_transmission = -d_reflection, d_phase = -2 s / D.
// degenerate marks the removable point delta = 0, sin k = 0 where the
// coefficients have no limit; there R = 0, T = 1 and derivatives 0 are
// reported as the free-propagation values.
struct ScatterPoint {
  double delta;
  double k;
  double reflection;
  double transmission;
  double phase;
  double d_reflection;
  double d_transmission;
  double d_phase;
  bool degenerate;
};

ScatterPoint scatter_point(double delta, double k);

// Amplitude ratios of the stationary scattering state
// psi_j = A e^{ikj} + B e^{-ikj} (j <= 0), psi_j = C e^{ikj} (j >= 0):
//   B/A = 1 / (2 i s / delta - 1), C/A = 1 / (1 - delta / (2 i s)),
//   C/B = 2 i s / delta.
// Throws std::invalid_argument at the degenerate point delta = 0, sin k = 0.
// At delta = 0 there is no reflected wave and C/B is reported as an
// infinite imaginary part.
struct AmplitudeRatios {
  std::complex<double> b_over_a;
  std::complex<double> c_over_a;
  std::complex<double> c_over_b;
};

AmplitudeRatios amplitude_ratios(double delta, double k);

// Asymptotic scattered packet in momentum representation: the component at
// momentum k is (C/A)(k) g(k) on the transmitted side plus (B/A)(-k) g(-k)
// on the mirrored reflected side. Amplitudes use the continuum g; callers
// integrate them over the zone.
struct ScatteredPacket {
  GaussianPacket incident;
  double delta;
  std::function<std::complex<double>(double)> reflected;     // support k0 < 0 side
  std::function<std::complex<double>(double)> transmitted;   // support k0 side
};

ScatteredPacket scatter_packet(const GaussianPacket& packet, double delta);

// Packet-averaged probabilities rho = int R |g|^2 dk, tau = int T |g|^2 dk
// over the Brillouin zone (continuum |g|^2, normalized so rho + tau = 1 up
// to the quadrature tolerance).
struct GaussianProbs {
  double rho;
  double tau;
};

GaussianProbs gaussian_probs(double k0, double sigma, double delta,
                             double quad_tol = 1e-10);

// d tau / d delta = int dT/ddelta |g|^2 dk (analytic integrand).
double gaussian_tau_derivative(double k0, double sigma, double delta,
                               double quad_tol = 1e-10);

}  // namespace qws
