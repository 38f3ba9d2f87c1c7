#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qws {

// One-dimensional chain with a single on-site defect at j = 0. Sites are
// labeled j = -(n_sites-1)/2 .. +(n_sites-1)/2, so n_sites must be odd.
struct LatticeSpec {
  int n_sites;
  double delta;            // defect height
  double coupling = 1.0;   // hopping, fixed to 1 (sets the energy unit)

  int j_min() const { return -(n_sites - 1) / 2; }
  int j_max() const { return (n_sites - 1) / 2; }
  // array index of site j
  int index_of(int j) const { return j - j_min(); }
  int defect_site() const { return 0; }
};

// Throws std::invalid_argument unless n_sites is odd and >= 3, delta is
// finite and coupling equals 1.
void validate(const LatticeSpec& spec);

// Real symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> off;
};

// H = -Laplacian + V: diagonal 2 (2 + delta at j = 0), off-diagonal -1.
TridiagonalMatrix build_hamiltonian(const LatticeSpec& spec);

struct HamiltonianSplit {
  TridiagonalMatrix laplacian;     // diag -2, off +1
  std::vector<double> potential;   // delta at j = 0, zero elsewhere
};

// Split H into -L + V; recomposing must reproduce build_hamiltonian exactly.
HamiltonianSplit split_hamiltonian(const LatticeSpec& spec);

struct DispersionPoint {
  double k;
  double energy;           // E_k = 2 - 2 cos k
  double group_velocity;   // dE/dk = 2 sin k
  double phase_velocity;   // E_k / k, limit 0 at k = 0
};

// Throws std::invalid_argument unless k lies in (-pi, pi].
DispersionPoint dispersion(double k);

// Max over interior sites of |-psi_{j+1} + 2 psi_j - psi_{j-1}
// + V_j psi_j - E psi_j| for a state sampled on sites j_min .. j_min+len-1.
// The defect term applies where the site index is 0.
double recurrence_residual(std::span<const std::complex<double>> psi,
                           int j_min, double energy, double delta);

}  // namespace qws
