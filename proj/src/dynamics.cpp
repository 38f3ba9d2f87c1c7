#include "qwscatter/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qws {

EvolveResult evolve(const LatticeSpec& spec,
                    std::span<const std::complex<double>> initial,
                    std::span<const double> times) {
  validate(spec);
  const int n = spec.n_sites;
  if (static_cast<int>(initial.size()) != n) {
    std::ostringstream msg;
    msg << "evolve: initial state has " << initial.size() << " entries, lattice has "
        << n << " sites";
    throw std::invalid_argument(msg.str());
  }
  if (times.empty()) {
    throw std::invalid_argument("evolve: need at least one time");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw std::invalid_argument(
          "evolve: times must be nonnegative and strictly increasing");
    }
  }

  Eigen::VectorXd re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re[i] = initial[i].real();
    im[i] = initial[i].imag();
  }
  const double norm2 = re.squaredNorm() + im.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "evolve: initial state norm^2 = " << norm2 << ", expected 1";
    throw std::invalid_argument(msg.str());
  }

  const TridiagonalMatrix h = build_hamiltonian(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(
      Eigen::Map<const Eigen::VectorXd>(h.diag.data(), n),
      Eigen::Map<const Eigen::VectorXd>(h.off.data(), n - 1),
      Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("evolve: eigendecomposition failed");
  }
  const Eigen::MatrixXd& u = solver.eigenvectors();
  const Eigen::VectorXd& lambda = solver.eigenvalues();

  // Eigenbasis coefficients of the initial state.
  const Eigen::VectorXd c_re = u.transpose() * re;
  const Eigen::VectorXd c_im = u.transpose() * im;

  EvolveResult result;
  auto& trace = result.trace;
  trace.times.assign(times.begin(), times.end());
  trace.rho.reserve(times.size());
  trace.tau.reserve(times.size());
  trace.defect_occupation.reserve(times.size());
  trace.boundary_mass.reserve(times.size());

  const int center = spec.index_of(0);
  Eigen::VectorXd d_re(n), d_im(n), psi_re(n), psi_im(n);
  for (double t : times) {
    for (int i = 0; i < n; ++i) {
      const double cs = std::cos(lambda[i] * t);
      const double sn = std::sin(lambda[i] * t);
      // (cs - i sn) (c_re + i c_im)
      d_re[i] = cs * c_re[i] + sn * c_im[i];
      d_im[i] = cs * c_im[i] - sn * c_re[i];
    }
    psi_re = u * d_re;
    psi_im = u * d_im;

    double rho = 0.0, tau = 0.0, boundary = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = psi_re[i] * psi_re[i] + psi_im[i] * psi_im[i];
      if (i < center) rho += p;
      if (i > center) tau += p;
      if (i < 5 || i >= n - 5) boundary += p;
    }
    const double defect = psi_re[center] * psi_re[center] +
                          psi_im[center] * psi_im[center];
    if (boundary > 1e-6) {
      std::ostringstream msg;
      msg << "evolve: boundary mass " << boundary << " at t = " << t
          << " exceeds 1e-6, the lattice is too small for this horizon";
      throw std::runtime_error(msg.str());
    }
    trace.rho.push_back(rho);
    trace.tau.push_back(tau);
    trace.defect_occupation.push_back(defect);
    trace.boundary_mass.push_back(boundary);
  }

  result.final_state.resize(n);
  for (int i = 0; i < n; ++i) {
    result.final_state[i] = {psi_re[i], psi_im[i]};
  }
  return result;
}

PlateauEstimate plateau_value(const DynamicsTrace& trace) {
  PlateauEstimate est;
  est.converged = false;
  est.value = 0.0;
  est.tail_begin_time = 0.0;
  est.tail_samples = 0;

  const int n = static_cast<int>(trace.times.size());
  const int tail = std::max((n + 9) / 10, 4);
  if (tail > n) {
    est.note = "trace too short for a tail window";
    return est;
  }
  const int begin = n - tail;
  est.tail_begin_time = trace.times[begin];
  est.tail_samples = tail;

  double sum = 0.0, max_defect = 0.0, slope_sum = 0.0;
  for (int i = begin; i < n; ++i) {
    sum += trace.tau[i];
    max_defect = std::max(max_defect, trace.defect_occupation[i]);
    if (i > begin) {
      slope_sum += std::abs(trace.tau[i] - trace.tau[i - 1]) /
                   (trace.times[i] - trace.times[i - 1]);
    }
  }
  est.value = sum / tail;
  const double mean_slope = slope_sum / (tail - 1);

  if (max_defect >= 1e-4) {
    std::ostringstream msg;
    msg << "defect occupation " << max_defect << " has not decayed below 1e-4";
    est.note = msg.str();
    return est;
  }
  if (mean_slope >= 1e-5) {
    std::ostringstream msg;
    msg << "tau still drifts, mean |dtau/dt| = " << mean_slope;
    est.note = msg.str();
    return est;
  }
  est.converged = true;
  return est;
}

ExperimentGeometry default_geometry(double k0, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("default_geometry: sigma must be positive");
  }
  const double v = std::abs(2.0 * std::sin(k0));
  if (v < 0.1) {
    std::ostringstream msg;
    msg << "default_geometry: |v_g(k0)| = " << v
        << " < 0.1, the packet disperses before it scatters";
    throw std::invalid_argument(msg.str());
  }
  ExperimentGeometry g;
  g.mu = -std::max(5.0 * sigma, 50.0);
  g.t_max = 2.0 * std::abs(g.mu) / v;
  g.n_sites =
      2 * static_cast<int>(std::ceil(std::abs(g.mu) + 2.0 * g.t_max + 8.0 * sigma)) +
      1;
  return g;
}

}  // namespace qws
