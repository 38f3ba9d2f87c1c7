#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwscatter/checks.hpp"
#include "qwscatter/cli.hpp"

using namespace qws;

namespace {

constexpr double pi = std::numbers::pi;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qwscatter");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("grid parsing") {
  const ValueGrid one = parse_grid("2.5");
  CHECK(one.values == std::vector<double>{2.5});
  CHECK(one.origin == "2.5");

  const ValueGrid lin = parse_grid("0:4:5");
  CHECK(lin.values == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});

  const ValueGrid list = parse_grid("1,2.5,-3");
  CHECK(list.values == std::vector<double>{1.0, 2.5, -3.0});

  const ValueGrid wide = parse_grid("-4:4:81");
  CHECK(wide.values.size() == 81);
  CHECK(wide.values.front() == -4.0);
  CHECK(wide.values.back() == 4.0);

  CHECK(parse_grid("5:5:1").values == std::vector<double>{5.0});

  CHECK_THROWS_AS(parse_grid(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("0:1:2.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("2:3:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid("1,,2"), std::invalid_argument);
}

TEST_CASE("figure presets") {
  RunConfig config;
  apply_preset(config, "fig4");
  CHECK(config.command == "estimate");
  CHECK(config.sigma.values == std::vector<double>{5.0, 20.0});
  CHECK(config.k0.values.size() == 3);
  CHECK(std::abs(config.k0.values[2] - 0.5 * pi) < 1e-15);
  CHECK(config.delta.values.size() == 81);
  CHECK(config.delta.values.back() == 4.0);

  // Axes the user pinned survive the preset.
  RunConfig partial;
  partial.sigma = parse_grid("7");
  apply_preset(partial, "fig4");
  CHECK(partial.sigma.values == std::vector<double>{7.0});

  RunConfig clash;
  clash.command = "coeffs";
  CHECK_THROWS_AS(apply_preset(clash, "fig4"), std::invalid_argument);
  RunConfig blank;
  CHECK_THROWS_AS(apply_preset(blank, "fig9"), std::invalid_argument);

  RunConfig left;
  apply_preset(left, "fig2-left");
  CHECK(left.command == "dynamics");
  CHECK(left.k0.values == std::vector<double>{1.6, 0.78, 0.44});
  CHECK(left.delta.values == std::vector<double>{1.0});
}

TEST_CASE("config files") {
  const std::string path = "/tmp/qws_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"command": "estimate", "delta": "0:2:3", "k0": 1.0,
               "sigma": [5.0, 20.0], "quad_tol": 1e-9, "threads": 2,
               "out": "x.csv"})";
  }
  const RunConfig config = load_config_file(path);
  CHECK(config.command == "estimate");
  CHECK(config.delta.values == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(config.k0.values == std::vector<double>{1.0});
  CHECK(config.sigma.values == std::vector<double>{5.0, 20.0});
  CHECK(config.quad_tol == 1e-9);
  CHECK(config.threads == 2);
  CHECK(config.out_path == "x.csv");

  CHECK_THROWS_AS(load_config_file("/tmp/qws_no_such_file.json"),
                  std::invalid_argument);
  const std::string broken = "/tmp/qws_test_broken.json";
  {
    std::ofstream out(broken);
    out << "{not json";
  }
  CHECK_THROWS_AS(load_config_file(broken), std::invalid_argument);
  std::remove(path.c_str());
  std::remove(broken.c_str());
}

TEST_CASE("coefficient table end to end") {
  const std::string path = "/tmp/qws_test_coeffs.csv";
  RunConfig config;
  config.command = "coeffs";
  config.out_path = path;
  config.delta = parse_grid("2");
  config.k0 = parse_grid("1.5707963267948966");
  config.sigma = parse_grid("5");
  CHECK(run_coeffs(config) == 0);

  const std::string body = slurp(path);
  CHECK(body.find("# qwscatter") != std::string::npos);
  CHECK(body.find("delta,k,reflection,transmission,phase") !=
        std::string::npos);
  // R = T = 1/2 at delta = 2, k = pi/2.
  CHECK(body.find("5.00000000000e-01,5.00000000000e-01") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("estimate tables are reproducible and thread-count independent") {
  RunConfig config;
  config.command = "estimate";
  config.delta = parse_grid("0:4:9");
  config.k0 = parse_grid("0.5,1.0,1.5");
  config.sigma = parse_grid("5");
  config.quad_tol = 1e-8;

  const std::string a = "/tmp/qws_test_est_a.csv";
  const std::string b = "/tmp/qws_test_est_b.csv";
  config.out_path = a;
  CHECK(run_estimate(config) == 0);
  config.out_path = b;
  CHECK(run_estimate(config) == 0);
  CHECK(slurp(a) == slurp(b));

  config.out_path = a;
  config.threads = 4;
  CHECK(run_estimate(config) == 0);
  CHECK(slurp(a) == slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("cheap invariant suite is green") {
  for (const CheckResult& r : run_property_checks({1e-10, false})) {
    INFO(r.name, ": measured = ", r.measured, " (", r.detail, ")");
    CHECK(r.pass);
  }
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}) == 1);
  CHECK(run_cli({"frobnicate"}) == 1);
  CHECK(run_cli({"coeffs", "--delta", "abc", "--out",
                 "/tmp/qws_test_exit.csv"}) == 1);
  CHECK(run_cli({"estimate", "--config", "/tmp/qws_no_such_file.json"}) == 1);
  CHECK(run_cli({"coeffs", "--quad-tol", "-1", "--out",
                 "/tmp/qws_test_exit.csv"}) == 1);
  CHECK(run_cli({"estimate", "--preset", "fig1"}) == 1);

  // An unreachable tolerance exhausts the interval budget: numerical failure.
  CHECK(run_cli({"estimate", "--delta", "1", "--k0", "1.0", "--sigma", "5",
                 "--quad-tol", "1e-30", "--out",
                 "/tmp/qws_test_exit.csv"}) == 2);

  CHECK(run_cli({"--version"}) == 0);
  CHECK(run_cli({"coeffs", "--delta", "2", "--k0", "1.0", "--out",
                 "/tmp/qws_test_exit.csv"}) == 0);
  std::remove("/tmp/qws_test_exit.csv");
}
