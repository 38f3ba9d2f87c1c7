#pragma once

namespace qws {

// Quantum Fisher information about delta carried by the scattered packet,
//   H = int |g|^2 [ (dR)^2/R + (dT)^2/T + 4 (dphase)^2 ] dk
//       - 4 ( int |g|^2 dphase dk )^2,
// with the bracket reducing to 32 s^2 / D^2 (s = sin k, D = delta^2 + 4s^2),
// which is also its limit at the R = 0 or T = 0 endpoints. Returns +inf at
// delta = 0 exactly: the packet tail at the band bottom makes H grow like
// 2 pi |g(0)|^2 / delta, so there is no finite value to report.
double qfi_gaussian(double k0, double sigma, double delta,
                    double quad_tol = 1e-10);

// Sharp-momentum limit of qfi_gaussian: 32 s^2 / D^2 - 4 (2s/D)^2
// = 16 sin^2 k0 / (2 + delta^2 - 2 cos 2k0)^2.
double qfi_leading(double k0, double delta);

// 1/sigma^2 coefficients of the large-sigma expansions
// qfi   = qfi_leading + g_h / sigma^2 + O(sigma^{-3}),
// fi    = fi_leading  + g_f / sigma^2 + O(sigma^{-3}).
double g_h(double k0, double delta);
double g_f(double k0, double delta);

// Classical Fisher information of the reflected-vs-transmitted dichotomic
// measurement, F = (d tau)^2 / (tau (1 - tau)). Returns 0 when d tau = 0
// (delta = 0 by symmetry); throws std::domain_error if tau lies outside
// (0, 1) while d tau != 0.
double fi_dichotomic(double k0, double sigma, double delta,
                     double quad_tol = 1e-10);

// Signal-to-noise ratio of the optimal estimator, delta^2 * qfi; 0 at
// delta = 0 by continuity (qfi diverges only like 1/delta there).
double qsnr(double k0, double sigma, double delta, double quad_tol = 1e-10);

// Defect height maximizing the QSNR: leading order 2 |sin k0| (where
// R = T = 1/2), plus a golden-section refinement at the given sigma.
struct OptimalDelta {
  double leading;
  double refined;
};

OptimalDelta optimal_delta(double k0, double sigma, double quad_tol = 1e-10);

// Cramer-Rao bound for m independent packets, var >= 1 / (m * info).
struct CramerRaoBound {
  double info;
  int m_samples;
  double variance_bound;
};

// Throws std::invalid_argument unless info > 0 and m_samples >= 1.
CramerRaoBound cr_bound(double info, int m_samples);

// Everything the estimate command reports for one parameter point. A point
// where fi_dichotomic is out of its domain is recorded with fi = NaN rather
// than aborting the surrounding sweep.
struct EstimationReport {
  double k0;
  double sigma;
  double delta;
  double qfi;
  double fi;
  double gamma;        // fi / qfi, NaN where qfi = 0
  double qsnr;
  double qfi_leading;
  double g_h;
  double g_f;
  bool valid;          // packet validity_check outcome
};

EstimationReport estimation_report(double k0, double sigma, double delta,
                                   double quad_tol = 1e-10);

}  // namespace qws
