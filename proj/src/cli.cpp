#include "qwscatter/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "qwscatter/checks.hpp"
#include "qwscatter/dynamics.hpp"
#include "qwscatter/estimation.hpp"
#include "qwscatter/lattice.hpp"
#include "qwscatter/quadrature.hpp"
#include "qwscatter/scattering.hpp"
#include "qwscatter/version.hpp"
#include "qwscatter/wavepacket.hpp"

namespace qws {

namespace {

constexpr double k_pi = std::numbers::pi;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

std::string fmt_meta(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_int(long long x) { return std::to_string(x); }

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number '" + text + "'");
  }
  if (used != text.size()) {
    throw std::invalid_argument("cannot parse number '" + text + "'");
  }
  return v;
}

// Plain CSV with '#' metadata lines; all rows end in '\n' so repeated runs
// are byte-identical.
class CsvFile {
public:
  explicit CsvFile(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) {
      throw std::invalid_argument("cannot open output file '" + path + "'");
    }
  }
  void comment(const std::string& line) { out_ << "# " << line << "\n"; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
  }

private:
  std::ofstream out_;
};

void write_config_header(CsvFile& csv, const RunConfig& config) {
  csv.comment(std::string("qwscatter ") + k_version);
  csv.comment("command=" + config.command);
  if (!config.preset.empty()) csv.comment("preset=" + config.preset);
  csv.comment("delta=" + config.delta.origin);
  csv.comment("k0=" + config.k0.origin);
  csv.comment("sigma=" + config.sigma.origin);
  csv.comment("quad_tol=" + fmt_meta(config.quad_tol));
}

void run_indexed(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n < 2 * threads) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const int lo = static_cast<int>(static_cast<long long>(n) * t / threads);
      const int hi =
          static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ValueGrid grid_of(std::vector<double> values, std::string origin) {
  return {std::move(values), std::move(origin)};
}

ValueGrid linspace_grid(double lo, double hi, int count, std::string origin) {
  std::vector<double> v;
  v.reserve(count);
  for (int i = 0; i < count; ++i) {
    v.push_back(count == 1 ? lo : lo + i * (hi - lo) / (count - 1));
  }
  return {std::move(v), std::move(origin)};
}

// k grid covering (-pi, pi] with n points, endpoint included.
ValueGrid zone_grid(int n, std::string origin) {
  std::vector<double> v;
  v.reserve(n);
  for (int i = 1; i <= n; ++i) {
    v.push_back(-k_pi + 2.0 * k_pi * i / n);
  }
  return {std::move(v), std::move(origin)};
}

void fill_defaults(RunConfig& config) {
  if (config.command == "coeffs") {
    if (config.delta.values.empty()) config.delta = parse_grid("-4:4:81");
    if (config.k0.values.empty()) config.k0 = zone_grid(201, "(-pi,pi]:201");
    if (config.sigma.values.empty()) config.sigma = parse_grid("5");
  } else if (config.command == "dynamics") {
    if (config.delta.values.empty()) config.delta = parse_grid("1");
    if (config.k0.values.empty()) config.k0 = parse_grid("1.6");
    if (config.sigma.values.empty()) config.sigma = parse_grid("15");
  } else if (config.command == "estimate") {
    if (config.delta.values.empty()) config.delta = parse_grid("0:4:81");
    if (config.k0.values.empty()) {
      config.k0 = grid_of({0.5 * k_pi}, "pi/2");
    }
    if (config.sigma.values.empty()) config.sigma = parse_grid("5");
  } else if (config.command == "sweep") {
    if (config.delta.values.empty()) config.delta = parse_grid("0.25:4:16");
    if (config.k0.values.empty()) config.k0 = parse_grid("0.3:2.8:11");
    if (config.sigma.values.empty()) config.sigma = parse_grid("5");
  }
  if (config.command != "check" && config.out_path.empty()) {
    config.out_path = config.command + ".csv";
  }
}

std::string dynamics_out_path(const std::string& base, double k0, double sigma,
                              double delta, bool single) {
  if (single) return base;
  const std::filesystem::path p(base);
  char suffix[96];
  std::snprintf(suffix, sizeof(suffix), "-k0_%g-sigma_%g-delta_%g", k0, sigma,
                delta);
  std::filesystem::path out = p.parent_path();
  out /= p.stem().string() + suffix + p.extension().string();
  return out.string();
}

}  // namespace

ValueGrid parse_grid(const std::string& text) {
  if (text.empty()) {
    throw std::invalid_argument("empty grid specification");
  }
  ValueGrid grid;
  grid.origin = text;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) {
      throw std::invalid_argument("grid '" + text + "' must be MIN:MAX:N");
    }
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double n_raw = parse_number(parts[2]);
    const int n = static_cast<int>(n_raw);
    if (n < 1 || n != n_raw) {
      throw std::invalid_argument("grid '" + text +
                                  "' needs a positive integer count");
    }
    if (n == 1 && lo != hi) {
      throw std::invalid_argument("grid '" + text +
                                  "' has one point but MIN != MAX");
    }
    grid.values = linspace_grid(lo, hi, n, text).values;
    return grid;
  }
  if (text.find(',') != std::string::npos) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      grid.values.push_back(parse_number(item));
    }
    return grid;
  }
  grid.values.push_back(parse_number(text));
  return grid;
}

void apply_preset(RunConfig& config, const std::string& preset) {
  std::string command;
  ValueGrid delta, k0, sigma;
  if (preset == "fig1") {
    command = "coeffs";
    delta = parse_grid("-4:4:81");
    k0 = zone_grid(201, "(-pi,pi]:201");
  } else if (preset == "fig2-left") {
    command = "dynamics";
    delta = parse_grid("1");
    k0 = grid_of({1.6, 0.78, 0.44}, "1.6,0.78,0.44");
    sigma = parse_grid("15");
  } else if (preset == "fig2-right") {
    command = "dynamics";
    delta = grid_of({1.0, 2.0, 3.0}, "1,2,3");
    k0 = parse_grid("1.6");
    sigma = parse_grid("15");
  } else if (preset == "fig3") {
    command = "estimate";
    delta = parse_grid("-4:4:41");
    k0 = linspace_grid(0.3, k_pi - 0.3, 25, "0.3:pi-0.3:25");
    sigma = parse_grid("5");
  } else if (preset == "fig4") {
    command = "estimate";
    delta = parse_grid("0:4:81");
    k0 = grid_of({0.25 * k_pi, k_pi / 3.0, 0.5 * k_pi}, "pi/4,pi/3,pi/2");
    sigma = grid_of({5.0, 20.0}, "5,20");
  } else {
    throw std::invalid_argument(
        "unknown preset '" + preset +
        "' (expected fig1, fig2-left, fig2-right, fig3 or fig4)");
  }
  if (config.command.empty()) config.command = command;
  if (config.command != command) {
    throw std::invalid_argument("preset '" + preset + "' belongs to the '" +
                                command + "' command, not '" + config.command +
                                "'");
  }
  if (config.delta.values.empty()) config.delta = delta;
  if (config.k0.values.empty()) config.k0 = k0;
  if (config.sigma.values.empty()) config.sigma = sigma;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file '" + path + "': " + e.what());
  }
  RunConfig config;
  const auto grid_field = [&](const char* key, ValueGrid& slot) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    if (v.is_string()) {
      slot = parse_grid(v.get<std::string>());
    } else if (v.is_number()) {
      const double x = v.get<double>();
      slot = grid_of({x}, fmt_meta(x));
    } else if (v.is_array()) {
      std::vector<double> values;
      std::string origin;
      for (const auto& e : v) {
        values.push_back(e.get<double>());
        if (!origin.empty()) origin += ",";
        origin += fmt_meta(values.back());
      }
      slot = grid_of(std::move(values), std::move(origin));
    } else {
      throw std::invalid_argument(std::string("config key '") + key +
                                  "' must be a string, number or array");
    }
  };
  try {
    if (doc.contains("command")) config.command = doc.at("command").get<std::string>();
    if (doc.contains("preset")) config.preset = doc.at("preset").get<std::string>();
    if (doc.contains("out")) config.out_path = doc.at("out").get<std::string>();
    grid_field("delta", config.delta);
    grid_field("k0", config.k0);
    grid_field("sigma", config.sigma);
    if (doc.contains("mu")) config.mu = doc.at("mu").get<double>();
    if (doc.contains("t_max")) config.t_max = doc.at("t_max").get<double>();
    if (doc.contains("n_sites")) config.n_sites = doc.at("n_sites").get<int>();
    if (doc.contains("quad_tol")) config.quad_tol = doc.at("quad_tol").get<double>();
    if (doc.contains("threads")) config.threads = doc.at("threads").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file '" + path + "': " + e.what());
  }
  return config;
}

int run_coeffs(const RunConfig& config) {
  CsvFile csv(config.out_path);
  write_config_header(csv, config);
  csv.row({"delta", "k", "reflection", "transmission", "phase", "d_reflection",
           "d_transmission", "d_phase", "degenerate"});
  long long rows = 0;
  for (double delta : config.delta.values) {
    for (double k : config.k0.values) {
      const ScatterPoint p = scatter_point(delta, k);
      csv.row({fmt(delta), fmt(k), fmt(p.reflection), fmt(p.transmission),
               fmt(p.phase), fmt(p.d_reflection), fmt(p.d_transmission),
               fmt(p.d_phase), fmt_int(p.degenerate ? 1 : 0)});
      ++rows;
    }
  }
  std::cout << "wrote " << config.out_path << " (" << rows << " rows)\n";
  return 0;
}

int run_estimate(const RunConfig& config) {
  const auto& sigmas = config.sigma.values;
  const auto& k0s = config.k0.values;
  const auto& deltas = config.delta.values;
  const int n = static_cast<int>(sigmas.size() * k0s.size() * deltas.size());
  std::vector<EstimationReport> reports(n);
  run_indexed(n, config.threads, [&](int idx) {
    const int di = idx % static_cast<int>(deltas.size());
    const int ki = (idx / static_cast<int>(deltas.size())) %
                   static_cast<int>(k0s.size());
    const int si = idx / static_cast<int>(deltas.size() * k0s.size());
    reports[idx] =
        estimation_report(k0s[ki], sigmas[si], deltas[di], config.quad_tol);
  });

  CsvFile csv(config.out_path);
  write_config_header(csv, config);
  csv.row({"sigma", "k0", "delta", "qfi", "qfi_leading", "g_h", "g_f", "fi",
           "gamma", "qsnr", "valid"});
  for (const EstimationReport& r : reports) {
    csv.row({fmt(r.sigma), fmt(r.k0), fmt(r.delta), fmt(r.qfi),
             fmt(r.qfi_leading), fmt(r.g_h), fmt(r.g_f), fmt(r.fi),
             fmt(r.gamma), fmt(r.qsnr), fmt_int(r.valid ? 1 : 0)});
  }
  std::cout << "wrote " << config.out_path << " (" << n << " rows)\n";
  return 0;
}

int run_sweep(const RunConfig& config) {
  const auto& sigmas = config.sigma.values;
  const auto& k0s = config.k0.values;
  const auto& deltas = config.delta.values;
  const int n = static_cast<int>(sigmas.size() * k0s.size() * deltas.size());
  struct Row {
    double sigma, k0, delta, reflection, transmission, qfi, fi, gamma, qsnr;
    bool valid;
  };
  std::vector<Row> table(n);
  run_indexed(n, config.threads, [&](int idx) {
    const int di = idx % static_cast<int>(deltas.size());
    const int ki = (idx / static_cast<int>(deltas.size())) %
                   static_cast<int>(k0s.size());
    const int si = idx / static_cast<int>(deltas.size() * k0s.size());
    const EstimationReport r =
        estimation_report(k0s[ki], sigmas[si], deltas[di], config.quad_tol);
    const ScatterPoint p = scatter_point(deltas[di], k0s[ki]);
    table[idx] = {r.sigma,  r.k0, r.delta, p.reflection, p.transmission,
                  r.qfi,    r.fi, r.gamma, r.qsnr,       r.valid};
  });

  CsvFile csv(config.out_path);
  write_config_header(csv, config);
  csv.row({"sigma", "k0", "delta", "reflection", "transmission", "qfi", "fi",
           "gamma", "qsnr", "valid"});
  for (const Row& r : table) {
    csv.row({fmt(r.sigma), fmt(r.k0), fmt(r.delta), fmt(r.reflection),
             fmt(r.transmission), fmt(r.qfi), fmt(r.fi), fmt(r.gamma),
             fmt(r.qsnr), fmt_int(r.valid ? 1 : 0)});
  }
  std::cout << "wrote " << config.out_path << " (" << n << " rows)\n";
  return 0;
}

int run_dynamics(const RunConfig& config) {
  const int combos = static_cast<int>(
      config.sigma.values.size() * config.k0.values.size() *
      config.delta.values.size());
  const bool single = combos == 1;
  for (double sigma : config.sigma.values) {
    for (double k0 : config.k0.values) {
      ExperimentGeometry geom = default_geometry(k0, sigma);
      if (config.mu) geom.mu = *config.mu;
      if (config.t_max) geom.t_max = *config.t_max;
      if (config.n_sites) geom.n_sites = *config.n_sites;

      const GaussianPacket packet = make_gaussian_packet(geom.mu, sigma, k0);
      for (double delta : config.delta.values) {
        const LatticeSpec spec{geom.n_sites, delta};
        validate(spec);
        const auto psi0 =
            sample_position(packet, {spec.j_min(), spec.j_max()});
        std::vector<double> times;
        const int n_times = 201;
        times.reserve(n_times);
        for (int i = 0; i < n_times; ++i) {
          times.push_back(i * geom.t_max / (n_times - 1));
        }
        const EvolveResult run = evolve(spec, psi0, times);
        const PlateauEstimate plateau = plateau_value(run.trace);
        const GaussianProbs probs =
            gaussian_probs(k0, sigma, delta, config.quad_tol);

        const std::string path =
            dynamics_out_path(config.out_path, k0, sigma, delta, single);
        CsvFile csv(path);
        write_config_header(csv, config);
        csv.comment("run: k0=" + fmt_meta(k0) + " sigma=" + fmt_meta(sigma) +
                    " delta=" + fmt_meta(delta));
        csv.comment("geometry: mu=" + fmt_meta(geom.mu) +
                    " t_max=" + fmt_meta(geom.t_max) +
                    " n_sites=" + fmt_int(geom.n_sites) +
                    " n_times=" + fmt_int(n_times));
        csv.comment(
            "geometry rule: mu=-max(5 sigma, 50), t_max=2|mu|/v_g(k0), "
            "n_sites=2 ceil(|mu|+2 t_max+8 sigma)+1");
        csv.comment("plateau: value=" + fmt(plateau.value) +
                    " converged=" + fmt_int(plateau.converged ? 1 : 0) +
                    " tail_begin=" + fmt_meta(plateau.tail_begin_time) +
                    " tail_samples=" + fmt_int(plateau.tail_samples) +
                    (plateau.note.empty() ? "" : " note=" + plateau.note));
        csv.comment("tau_G reference: tau=" + fmt(probs.tau) +
                    " rho=" + fmt(probs.rho));
        csv.row({"t", "rho", "defect_occupation", "tau", "boundary_mass"});
        for (std::size_t i = 0; i < run.trace.times.size(); ++i) {
          csv.row({fmt(run.trace.times[i]), fmt(run.trace.rho[i]),
                   fmt(run.trace.defect_occupation[i]), fmt(run.trace.tau[i]),
                   fmt(run.trace.boundary_mass[i])});
        }
        std::cout << "wrote " << path << ": k0=" << k0 << " sigma=" << sigma
                  << " delta=" << delta << " plateau=" << plateau.value
                  << " tau_G=" << probs.tau
                  << (plateau.converged ? "" : " (not converged: " +
                                                   plateau.note + ")")
                  << "\n";
      }
    }
  }
  return 0;
}

int run_check(const RunConfig& config) {
  const std::vector<CheckResult> results =
      run_property_checks({config.quad_tol, true});
  std::ostringstream report;
  int failures = 0;
  for (const CheckResult& r : results) {
    if (!r.pass) ++failures;
    report << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
           << " (measured = " << fmt_meta(r.measured) << "; " << r.detail
           << ")\n";
  }
  report << (failures == 0 ? "all " : "") << results.size() - failures << "/"
         << results.size() << " checks passed\n";
  std::cout << report.str();
  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path, std::ios::binary);
    out << report.str();
  }
  return failures == 0 ? 0 : 3;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"1D quantum-walk scattering off a single-site defect: "
               "transmission coefficients, packet dynamics and Fisher "
               "information for estimating the defect height"};
  app.set_version_flag("--version", std::string("qwscatter ") + k_version);
  app.require_subcommand(1);

  struct Flags {
    std::string config, preset, out, delta, k0, sigma;
    double mu = 0.0, t_max = 0.0, quad_tol = 1e-10;
    int n_sites = 0, threads = 1;
  } f;

  const auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config,
                    "JSON config file (flags override it)");
    sub->add_option("--preset", f.preset,
                    "figure preset: fig1, fig2-left, fig2-right, fig3, fig4");
    sub->add_option("--out", f.out, "output path");
    sub->add_option("--delta", f.delta,
                    "defect height grid, V or MIN:MAX:N or A,B,C");
    sub->add_option("--k0", f.k0, "momentum grid, same syntax");
    sub->add_option("--sigma", f.sigma, "packet width grid, same syntax");
    sub->add_option("--mu", f.mu, "packet center override (dynamics)");
    sub->add_option("--t-max", f.t_max, "time horizon override (dynamics)");
    sub->add_option("--n-sites", f.n_sites,
                    "lattice size override (dynamics), odd");
    sub->add_option("--quad-tol", f.quad_tol,
                    "absolute quadrature tolerance");
    sub->add_option("--threads", f.threads, "worker threads for grids");
  };

  add_common(app.add_subcommand(
      "coeffs", "tabulate R, T, the phase and their delta-derivatives"));
  add_common(app.add_subcommand(
      "dynamics", "evolve a packet against the defect and find the plateau"));
  add_common(app.add_subcommand(
      "estimate", "tabulate Fisher information, QSNR and gamma"));
  add_common(app.add_subcommand(
      "sweep", "cartesian parameter sweep of coefficients and information"));
  add_common(app.add_subcommand("check", "run the full invariant suite"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    RunConfig config;
    if (sub->count("--config")) config = load_config_file(f.config);
    const std::string command = sub->get_name();
    if (!config.command.empty() && config.command != command) {
      throw std::invalid_argument("config file names command '" +
                                  config.command + "' but '" + command +
                                  "' was invoked");
    }
    config.command = command;
    if (sub->count("--preset")) config.preset = f.preset;
    if (sub->count("--out")) config.out_path = f.out;
    if (sub->count("--delta")) config.delta = parse_grid(f.delta);
    if (sub->count("--k0")) config.k0 = parse_grid(f.k0);
    if (sub->count("--sigma")) config.sigma = parse_grid(f.sigma);
    if (sub->count("--mu")) config.mu = f.mu;
    if (sub->count("--t-max")) config.t_max = f.t_max;
    if (sub->count("--n-sites")) config.n_sites = f.n_sites;
    if (sub->count("--quad-tol")) config.quad_tol = f.quad_tol;
    if (sub->count("--threads")) config.threads = f.threads;

    if (!config.preset.empty()) apply_preset(config, config.preset);
    fill_defaults(config);
    if (config.threads < 1) {
      throw std::invalid_argument("--threads must be at least 1");
    }
    if (!(config.quad_tol > 0.0)) {
      throw std::invalid_argument("--quad-tol must be positive");
    }

    if (command == "coeffs") return run_coeffs(config);
    if (command == "dynamics") return run_dynamics(config);
    if (command == "estimate") return run_estimate(config);
    if (command == "sweep") return run_sweep(config);
    return run_check(config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qws
