// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "lgc/harness.hpp"

using namespace lgc;
namespace fs = std::filesystem;

namespace {

ExperimentConfig config_of(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    FAIL("no column " << name);
    return 0;
  }
  double value(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  csv.header = split(line);
  while (std::getline(in, line)) csv.rows.push_back(split(line));
  return csv;
}

Csv run_to_csv(const std::string& text) {
  std::ostringstream console;
  const RunReport r = run_experiment(config_of(text), {}, console);
  REQUIRE_MESSAGE(r.exit_code == 0, r.message);
  return parse_csv(console.str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Poltyrev exponent written out piecewise.
double exponent_oracle(double mu) {
  if (mu <= 2.0) return 0.5 * (mu - 1.0 - std::log(mu));
  if (mu <= 4.0) return 0.5 * std::log(std::exp(1.0) * mu / 4.0);
  return mu / 8.0;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lgc_harness_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = config_of(
      "# comment\n"
      "command = flatness   # trailing\n"
      "\n"
      "lattice = Z8\n"
      "sigma = 0.5\n");
  REQUIRE(c.entries().size() == 3);
  CHECK(*c.find("lattice") == "Z8");
  CHECK(*c.find("sigma") == "0.5");

  auto code_of = [](const std::string& text) {
    try {
      config_of(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParse;  // sentinel: parsed fine
  };
  CHECK(code_of("command = flatness\nbogus = 1\n") == ErrorCode::kConfig);
  CHECK(code_of("command = flatness\nsigma = 1\nsigma = 2\n") ==
        ErrorCode::kConfig);
  CHECK(code_of("command = flatness\nsigma = -1\n") == ErrorCode::kConfig);
  CHECK(code_of("command = flatness\nsigma = abc\n") == ErrorCode::kConfig);
  CHECK(code_of("command = frobnicate\n") == ErrorCode::kConfig);
  CHECK(code_of("lattice = Z8\n") == ErrorCode::kConfig);
  CHECK(code_of("command = rate\nno equals sign\n") == ErrorCode::kConfig);
  CHECK(code_of("command = rate\ntrials = 1.5\n") == ErrorCode::kConfig);
  CHECK(code_of("command = rate\nsweep.alpha = 1, 2\n") == ErrorCode::kConfig);
  CHECK(code_of("command = rate\nsweep.snr = 1, 2\nsweep.sigma0 = 3\n") ==
        ErrorCode::kMultipleAxes);
  CHECK(code_of("command = rate\nsweep.snr = 1, x\n") == ErrorCode::kConfig);
}

TEST_CASE("load_config errors and base dir") {
  CHECK_THROWS_WITH_AS(load_config("/nonexistent/lgc.cfg"),
                       "config file not found", Error);
  const fs::path dir = scratch("base");
  {
    std::ofstream(dir / "z2.txt") << "2\n1 0\n0 1\n";
    std::ofstream(dir / "run.cfg")
        << "command = flatness\nlattice_file = z2.txt\nsigma = 1\n";
  }
  const ExperimentConfig c = load_config((dir / "run.cfg").string());
  std::ostringstream console;
  const RunReport r = run_experiment(c, {}, console);
  REQUIRE_MESSAGE(r.exit_code == 0, r.message);
  CHECK(parse_csv(console.str()).rows.size() == 1);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorCode::kConfig) == 2);
  CHECK(exit_code_for(ErrorCode::kIo) == 2);
  CHECK(exit_code_for(ErrorCode::kMultipleAxes) == 2);
  CHECK(exit_code_for(ErrorCode::kFlatnessTooLarge) == 3);
  CHECK(exit_code_for(ErrorCode::kMuBelowOne) == 3);
  CHECK(exit_code_for(ErrorCode::kNonpositiveSigma) == 3);

  std::ostringstream console;
  RunReport r = run_experiment(
      config_of("command = flatness\nlattice_file = /no/such/file\nsigma = 1\n"),
      {}, console);
  CHECK(r.exit_code == 2);
  CHECK(r.message == "config: lattice file not found");

  r = run_experiment(
      config_of("command = rate\nlattice = Z8\nsigma0 = 0.2\nsigma = 1\n"), {},
      console);
  CHECK(r.exit_code == 3);
  CHECK(r.message.rfind("numeric: ", 0) == 0);

  r = run_experiment(config_of("command = exponent\nmu = 0.5\n"), {}, console);
  CHECK(r.exit_code == 3);

  r = run_experiment(
      config_of("command = rate\nlattice = E8\nsnr = 10\nsigma = 1\n"), {},
      console);
  CHECK(r.exit_code == 2);

  r = run_experiment(
      config_of("command = flatness\nlattice = Q7\nsigma = 1\n"), {}, console);
  CHECK(r.exit_code == 2);

  // Axis that the command does not use.
  r = run_experiment(
      config_of("command = flatness\nlattice = Z2\nsweep.mu = 2, 3\n"), {},
      console);
  CHECK(r.exit_code == 2);

  // Fixed and swept at once.
  r = run_experiment(config_of("command = flatness\nlattice = Z2\nsigma = 1\n"
                               "sweep.sigma = 1, 2\n"),
                     {}, console);
  CHECK(r.exit_code == 2);
  CHECK(r.message.find('\n') == std::string::npos);
}

TEST_CASE("exponent sweep") {
  const Csv csv =
      run_to_csv("command = exponent\nsweep.mu = 1, 1.5, 2, 3, 4, 8\n");
  REQUIRE(csv.rows.size() == 6);
  CHECK(csv.header == std::vector<std::string>{"mu", "exponent", "n", "bound"});
  CHECK(csv.value(0, "exponent") == 0.0);
  const double mus[] = {1, 1.5, 2, 3, 4, 8};
  for (int i = 0; i < 6; ++i) {
    CHECK(csv.value(i, "mu") == mus[i]);
    CHECK(csv.value(i, "exponent") ==
          doctest::Approx(exponent_oracle(mus[i])).epsilon(1e-14));
  }

  const Csv at8 = run_to_csv("command = exponent\nn = 8\nmu = 1.5, 2, 3, 4, 8\n");
  REQUIRE(at8.rows.size() == 5);
  for (std::size_t i = 0; i < at8.rows.size(); ++i) {
    const double mu = at8.value(i, "mu");
    CHECK(at8.value(i, "bound") ==
          doctest::Approx(std::exp(-8.0 * exponent_oracle(mu))).epsilon(1e-13));
    if (i > 0) CHECK(at8.value(i, "bound") < at8.value(i - 1, "bound"));
  }
}

TEST_CASE("rate and flatness sweeps are monotone") {
  const Csv rate =
      run_to_csv("command = rate\nlattice = E8\nsweep.snr = 3, 5, 10, 20\n");
  CHECK(rate.header ==
        std::vector<std::string>{"lattice", "n", "sigma0", "sigma", "snr",
                                 "eps", "eps_prime", "eps_dprime", "capacity",
                                 "rate_lower"});
  REQUIRE(rate.rows.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(rate.value(i, "rate_lower") > rate.value(i - 1, "rate_lower"));
    CHECK(rate.value(i, "sigma") == 1.0);
  }
  CHECK(rate.value(2, "sigma0") == doctest::Approx(std::sqrt(10.0)));

  const Csv flat = run_to_csv(
      "command = flatness\nlattice = Z8\nsweep.sigma = 0.3, 0.5, 0.8, 1, 1.5\n");
  CHECK(flat.header ==
        std::vector<std::string>{"lattice", "n", "V", "sigma", "gsnr",
                                 "epsilon", "theta", "truncation_bound",
                                 "route"});
  REQUIRE(flat.rows.size() == 5);
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(flat.value(i, "epsilon") < flat.value(i - 1, "epsilon"));
  }
}

TEST_CASE("volume axis and design volume") {
  const Csv csv = run_to_csv(
      "command = flatness\nlattice = D4\nsigma = 1\nsweep.volume = 1, 10, 100\n");
  REQUIRE(csv.rows.size() == 3);
  CHECK(csv.value(0, "V") == doctest::Approx(1.0));
  CHECK(csv.value(2, "V") == doctest::Approx(100.0));
  CHECK(csv.value(2, "gsnr") ==
        doctest::Approx(std::pow(100.0, 0.5) / (2.0 * M_PI)));

  // Design volume (2 pi e st^2 (1 + eps''))^{n/2} for st^2 = 9 * 0.81 / 9.81.
  const Csv sim = run_to_csv(
      "command = simulate\nlattice = E8\nsigma0 = 3\nsigma = 0.9\n"
      "volume = design\neps_dprime = 0.1\ntrials = 2000\n");
  const double st2 = 9.0 * 0.81 / 9.81;
  CHECK(sim.value(0, "V") ==
        doctest::Approx(std::pow(2 * M_PI * std::exp(1.0) * st2 * 1.1, 4.0)));
  CHECK(sim.value(0, "mu") == doctest::Approx(1.1));
}

TEST_CASE("simulate outputs are reproducible across runs and threads") {
  const fs::path dir = scratch("repro");
  const std::string text =
      "command = simulate\nlattice = D4\nsigma0 = 2\nsigma = 0.5\n"
      "volume = design\ntrials = 40000\nseed = 9\narm = both\n";
  const ExperimentConfig c = config_of(text);
  std::ostringstream console;
  RunOverrides a;
  a.out = (dir / "a.csv").string();
  a.threads = 1;
  RunOverrides b = a;
  b.out = (dir / "b.csv").string();
  b.threads = 3;
  RunOverrides again = a;
  again.out = (dir / "c.csv").string();
  REQUIRE(run_experiment(c, a, console).exit_code == 0);
  REQUIRE(run_experiment(c, b, console).exit_code == 0);
  const RunReport r = run_experiment(c, again, console);
  REQUIRE(r.exit_code == 0);
  const std::string first = slurp(dir / "a.csv");
  CHECK(first == slurp(dir / "b.csv"));
  CHECK(first == slurp(dir / "c.csv"));

  const Csv csv = parse_csv(first);
  CHECK(csv.header ==
        std::vector<std::string>{"lattice", "label", "n", "sigma0", "sigma",
                                 "alpha", "sigma_tilde", "V", "mu", "trials",
                                 "errors", "p_hat", "ci_low", "ci_high",
                                 "seed"});
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.rows[0][1] == "scheme");
  CHECK(csv.rows[1][1] == "poltyrev");
  CHECK(csv.rows[1][3] == "inf");

  // Manifest echoes the config and the resolved run parameters.
  REQUIRE(r.outputs.size() == 2);
  const auto manifest = nlohmann::json::parse(slurp(r.outputs[1]));
  CHECK(manifest["version"] == "0.1.0");
  CHECK(manifest["config"]["sigma0"] == "2");
  CHECK(manifest["config"]["volume"] == "design");
  CHECK(manifest["resolved"]["seed"] == 9);
  CHECK(manifest["resolved"]["trials"] == 40000);
  CHECK(manifest["resolved"]["threads"] == 1);
  CHECK(manifest["rows"] == 2);
  CHECK(manifest["wall_time_seconds"].get<double>() >= 0.0);
}

TEST_CASE("overrides") {
  std::ostringstream console;
  RunOverrides o;
  o.trials = 500;
  o.seed = 77;
  const RunReport r = run_experiment(
      config_of("command = simulate\nlattice = Z2\nsigma0 = 2\nsigma = 0.3\n"
                "trials = 100000\nseed = 1\n"),
      o, console);
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(console.str());
  CHECK(csv.rows[0][csv.column("trials")] == "500");
  CHECK(csv.rows[0][csv.column("seed")] == "77");
}

TEST_CASE("json output, sample spec file and sweep data file") {
  const fs::path dir = scratch("json");
  std::ostringstream console;
  RunOverrides o;
  o.out = (dir / "flat.json").string();
  RunReport r = run_experiment(
      config_of("command = flatness\nlattice = A2\nsweep.sigma = 0.4, 0.6\n"),
      o, console);
  REQUIRE(r.exit_code == 0);
  const auto rows = nlohmann::json::parse(slurp(dir / "flat.json"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1]["sigma"] == 0.6);
  CHECK(fs::exists(dir / "flat.json.manifest.json"));
  const std::string dat = slurp(dir / "flat.json.dat");
  CHECK(dat.rfind("# lattice n V sigma", 0) == 0);

  o.out = (dir / "pts.csv").string();
  r = run_experiment(config_of("command = sample\nlattice = Z2\nsigma0 = 1.5\n"
                               "shift = 0.25, -0.5\ncount = 300\nseed = 4\n"),
                     o, console);
  REQUIRE_MESSAGE(r.exit_code == 0, r.message);
  const Csv pts = parse_csv(slurp(dir / "pts.csv"));
  CHECK(pts.header == std::vector<std::string>{"k0", "k1", "x0", "x1"});
  REQUIRE(pts.rows.size() == 300);
  for (const auto& row : pts.rows) {
    CHECK(std::stod(row[2]) == std::stod(row[0]) - 0.25);
    CHECK(std::stod(row[3]) == std::stod(row[1]) + 0.5);
  }
  const auto spec = nlohmann::json::parse(slurp(dir / "pts.csv.spec.json"));
  CHECK(spec["sigma0"] == 1.5);
  CHECK(spec["sampler"] == "table");

  r = run_experiment(config_of("command = sample\nlattice = Z2\nsigma0 = 1\n"
                               "shift = 0.25\n"),
                     o, console);
  CHECK(r.exit_code == 2);
}

TEST_CASE("ensemble command") {
  const Csv csv = run_to_csv(
      "command = ensemble\np = 3\nn = 4\nk = 2\ngsnr = 0.5\nsamples = 6\n"
      "seed = 5\n");
  CHECK(csv.header == std::vector<std::string>{"sample_index", "p", "n", "k",
                                               "a", "gsnr", "epsilon",
                                               "bound"});
  REQUIRE(csv.rows.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(csv.value(i, "gsnr") == doctest::Approx(0.5));
    if (i > 0) CHECK(csv.value(i, "epsilon") >= csv.value(i - 1, "epsilon"));
  }
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
}
