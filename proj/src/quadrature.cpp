#include "qwscatter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qws {

namespace {

// Gauss-Kronrod 7/15 nodes on [0, 1] (positive half; the rule is symmetric).
// Odd entries are the embedded 7-point Gauss nodes.
constexpr double k_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};

constexpr double k_weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};

constexpr double g_weights[4] = {0.129484966168870, 0.279705391489277,
                                 0.381830050505119, 0.417959183673469};

struct PanelResult {
  double value;
  double error;
};

// One 15-point Kronrod evaluation with the QUADPACK error estimate.
PanelResult kronrod_panel(const std::function<double(double)>& f, double a,
                          double b) {
  const double half = 0.5 * (b - a);
  const double center = 0.5 * (a + b);

  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * k_nodes[i]);
    fv[14 - i] = f(center + half * k_nodes[i]);
  }
  fv[7] = f(center);

  double resk = k_weights[7] * fv[7];
  double resg = g_weights[3] * fv[7];
  double resabs = k_weights[7] * std::abs(fv[7]);
  for (int i = 0; i < 7; ++i) {
    resk += k_weights[i] * (fv[i] + fv[14 - i]);
    resabs += k_weights[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) {
      resg += g_weights[i / 2] * (fv[i] + fv[14 - i]);
    }
  }

  const double mean = 0.5 * resk;
  double resasc = k_weights[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i) {
    resasc += k_weights[i] *
              (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  }

  double err = std::abs(resk - resg) * half;
  resabs *= half;
  resasc *= half;
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(err, 50.0 * eps * resabs);
  }
  return {resk * half, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, int max_intervals) {
  return integrate_split(f, a, b, {}, abs_tol, max_intervals);
}

QuadratureResult integrate_split(const std::function<double(double)>& f,
                                 double a, double b,
                                 const std::vector<double>& interior_points,
                                 double abs_tol, int max_intervals) {
  if (!(b > a)) {
    throw std::invalid_argument("integrate: empty interval, need b > a");
  }
  if (!(abs_tol > 0.0)) {
    throw std::invalid_argument("integrate: tolerance must be positive");
  }

  std::vector<double> cuts{a};
  for (double p : interior_points) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  struct Panel {
    double lo, hi, value, error;
  };
  std::vector<Panel> panels;
  int evals = 0;
  const auto push_panel = [&](double lo, double hi) {
    const PanelResult r = kronrod_panel(f, lo, hi);
    evals += 15;
    panels.push_back({lo, hi, r.value, r.error});
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    push_panel(cuts[i], cuts[i + 1]);
  }

  // Globally adaptive: always split the panel with the largest error, stop
  // when the summed estimate meets the tolerance. A panel whose midpoint is
  // no longer strictly interior has hit machine resolution and cannot be
  // improved.
  for (;;) {
    double total_err = 0.0;
    int worst = -1;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total_err += panels[i].error;
      const double mid = 0.5 * (panels[i].lo + panels[i].hi);
      const bool splittable = mid > panels[i].lo && mid < panels[i].hi;
      if (splittable && (worst < 0 || panels[i].error > panels[worst].error)) {
        worst = static_cast<int>(i);
      }
    }
    if (total_err <= abs_tol) break;
    if (worst < 0) {
      std::ostringstream msg;
      msg << "integrate: tolerance " << abs_tol
          << " is below the roundoff floor, remaining error estimate "
          << total_err;
      throw QuadratureError(msg.str());
    }
    if (static_cast<int>(panels.size()) >= max_intervals) {
      std::ostringstream msg;
      msg << "integrate: no convergence after " << panels.size()
          << " panels (error estimate " << total_err << ", requested "
          << abs_tol << "; worst panel [" << panels[worst].lo << ", "
          << panels[worst].hi << "] contributes " << panels[worst].error
          << ")";
      throw QuadratureError(msg.str());
    }
    const Panel split = panels[worst];
    const double mid = 0.5 * (split.lo + split.hi);
    panels.erase(panels.begin() + worst);
    push_panel(split.lo, mid);
    push_panel(mid, split.hi);
  }

  double total = 0.0;
  double total_err = 0.0;
  for (const Panel& p : panels) {
    total += p.value;
    total_err += p.error;
  }
  return {total, total_err, evals};
}

}  // namespace qws
