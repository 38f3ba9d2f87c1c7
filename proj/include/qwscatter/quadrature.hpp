#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qws {

// Raised when the adaptive integrator cannot reach the requested tolerance
// within its subdivision budget.
class QuadratureError : public std::runtime_error {
public:
  explicit QuadratureError(const std::string& msg) : std::runtime_error(msg) {}
};

struct QuadratureResult {
  double value;
  double error_estimate;
  int evaluations;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b] to absolute tolerance abs_tol.
// Throws QuadratureError if the tolerance cannot be met.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-10,
                           int max_intervals = 2000);

// Same integrator, but the domain is pre-split at the given interior points
// (points outside (a, b) are ignored). Used to seed subdivision at a packet
// peak so a narrow Gaussian cannot slip between coarse panels.
QuadratureResult integrate_split(const std::function<double(double)>& f,
                                 double a, double b,
                                 const std::vector<double>& interior_points,
                                 double abs_tol = 1e-10,
                                 int max_intervals = 2000);

}  // namespace qws
