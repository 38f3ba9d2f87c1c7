#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qws {

// One CLI axis: the values to visit plus the "MIN:MAX:N" or "V" string they
// came from (echoed into output metadata).
struct ValueGrid {
  std::vector<double> values;
  std::string origin;
};

// Parses "V" (one value) or "MIN:MAX:N" (N-point inclusive linear grid).
ValueGrid parse_grid(const std::string& text);

struct RunConfig {
  std::string command;   // coeffs | dynamics | estimate | sweep | check
  std::string preset;    // fig1 | fig2-left | fig2-right | fig3 | fig4
  std::string out_path;
  ValueGrid delta;
  ValueGrid k0;
  ValueGrid sigma;
  // dynamics geometry overrides (otherwise default_geometry decides)
  std::optional<double> mu;
  std::optional<double> t_max;
  std::optional<int> n_sites;
  double quad_tol = 1e-10;
  int threads = 1;
};

// Fills the axes a named figure preset pins down; axes the user already set
// explicitly are kept. Throws std::invalid_argument for unknown presets.
void apply_preset(RunConfig& config, const std::string& preset);

// Reads a JSON config file with the same keys as the flags
// (command, preset, out, delta, k0, sigma, mu, t_max, n_sites, quad_tol,
// threads). Flags given on the command line override file values.
RunConfig load_config_file(const std::string& path);

int run_coeffs(const RunConfig& config);
int run_dynamics(const RunConfig& config);
int run_estimate(const RunConfig& config);
int run_sweep(const RunConfig& config);
int run_check(const RunConfig& config);

// Full argv entry point. Exit codes: 0 success, 1 usage or config error,
// 2 numerical failure (quadrature, evolution box too small), 3 check
// failure.
int cli_main(int argc, char** argv);

}  // namespace qws
