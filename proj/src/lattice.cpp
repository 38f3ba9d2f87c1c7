#include "qwscatter/lattice.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qws {

void validate(const LatticeSpec& spec) {
  if (spec.n_sites < 3 || spec.n_sites % 2 == 0) {
    std::ostringstream msg;
    msg << "lattice: n_sites must be odd and >= 3, got " << spec.n_sites;
    throw std::invalid_argument(msg.str());
  }
  if (!std::isfinite(spec.delta)) {
    throw std::invalid_argument("lattice: delta must be finite");
  }
  if (spec.coupling != 1.0) {
    throw std::invalid_argument("lattice: coupling is the energy unit and must be 1");
  }
}

TridiagonalMatrix build_hamiltonian(const LatticeSpec& spec) {
  validate(spec);
  TridiagonalMatrix h;
  h.diag.assign(spec.n_sites, 2.0);
  h.diag[spec.index_of(0)] += spec.delta;
  h.off.assign(spec.n_sites - 1, -1.0);
  return h;
}

HamiltonianSplit split_hamiltonian(const LatticeSpec& spec) {
  validate(spec);
  HamiltonianSplit parts;
  parts.laplacian.diag.assign(spec.n_sites, -2.0);
  parts.laplacian.off.assign(spec.n_sites - 1, 1.0);
  parts.potential.assign(spec.n_sites, 0.0);
  parts.potential[spec.index_of(0)] = spec.delta;
  return parts;
}

DispersionPoint dispersion(double k) {
  if (!(k > -std::numbers::pi && k <= std::numbers::pi)) {
    std::ostringstream msg;
    msg << "dispersion: k must lie in (-pi, pi], got " << k;
    throw std::invalid_argument(msg.str());
  }
  DispersionPoint p;
  p.k = k;
  p.energy = 2.0 - 2.0 * std::cos(k);
  p.group_velocity = 2.0 * std::sin(k);
  p.phase_velocity = (k == 0.0) ? 0.0 : p.energy / k;
  return p;
}

double recurrence_residual(std::span<const std::complex<double>> psi,
                           int j_min, double energy, double delta) {
  if (psi.size() < 3) {
    throw std::invalid_argument("recurrence_residual: need at least 3 sites");
  }
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
    const int j = j_min + static_cast<int>(i);
    const double v = (j == 0) ? delta : 0.0;
    const std::complex<double> r =
        -psi[i + 1] + (2.0 + v - energy) * psi[i] - psi[i - 1];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace qws
