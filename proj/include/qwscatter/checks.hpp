#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qws {

struct CheckResult {
  std::string name;
  bool pass;
  double measured;      // the quantity compared against the threshold
  std::string detail;   // threshold and context, human-readable
};

struct CheckOptions {
  double quad_tol = 1e-10;
  // The dynamics and gamma-grid properties take minutes; tests that only
  // exercise the cheap algebraic properties switch them off.
  bool heavy = true;
};

// Runs every module invariant as a pass/fail property and returns one
// result per property.
std::vector<CheckResult> run_property_checks(const CheckOptions& options);

// Largest relative error of analytic df against the central difference of f
// over the given points (step h scaled to each |x|). Used by the derivative
// consistency properties and their tests.
double max_fd_relative_error(const std::function<double(double)>& f,
                             const std::function<double(double)>& df,
                             const std::vector<double>& points,
                             double h = 1e-5);

}  // namespace qws
