#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "qwscatter/lattice.hpp"
#include "qwscatter/wavepacket.hpp"

namespace qws {

// Region probabilities along an evolution: rho = sum_{j<0} |psi_j|^2,
// defect_occupation = |psi_0|^2, tau = sum_{j>0} |psi_j|^2, and the mass on
// the outermost 5 sites of each edge (reflection-off-the-boundary monitor).
struct DynamicsTrace {
  std::vector<double> times;
  std::vector<double> rho;
  std::vector<double> tau;
  std::vector<double> defect_occupation;
  std::vector<double> boundary_mass;
};

struct EvolveResult {
  DynamicsTrace trace;
  std::vector<std::complex<double>> final_state;
};

// Exact evolution psi(t) = e^{-iHt} psi(0) through one dense
// eigendecomposition of the tridiagonal H, evaluated at the given times
// (nonnegative, strictly increasing). The initial state must have
// spec.n_sites entries and unit norm within 1e-9. Throws std::runtime_error
// naming the first offending time if the boundary mass ever exceeds 1e-6
// (the box was too small for the requested horizon).
EvolveResult evolve(const LatticeSpec& spec,
                    std::span<const std::complex<double>> initial,
                    std::span<const double> times);

// Long-time transmission read off the tail of a trace: the mean of tau over
// the last 10% of samples. Converged requires at least 4 tail samples, tail
// defect occupation below 1e-4 and mean |dtau/dt| over the tail below 1e-5.
struct PlateauEstimate {
  bool converged;
  double value;
  double tail_begin_time;
  int tail_samples;
  std::string note;   // empty when converged, else the failed condition
};

PlateauEstimate plateau_value(const DynamicsTrace& trace);

// Scattering-experiment geometry for a packet of width sigma at momentum k0:
// start at mu = -max(5 sigma, 50), run to t_max = 2 |mu| / v_g(k0), and size
// the box so both outgoing packets stay clear of the edges,
// n_sites = 2 ceil(|mu| + 2 t_max + 8 sigma) + 1.
struct ExperimentGeometry {
  double mu;
  double t_max;
  int n_sites;
};

// Throws std::invalid_argument when the group velocity at k0 is too small
// to outrun dispersion (|v_g| < 0.1).
ExperimentGeometry default_geometry(double k0, double sigma);

}  // namespace qws
