// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include "json.hpp"
#include "lgc/analytics.hpp"
#include "lgc/construction_a.hpp"
#include "lgc/sampler.hpp"
#include "lgc/scheme.hpp"
#include "lgc/version.hpp"

namespace lgc {

namespace {

using Json = nlohmann::ordered_json;

enum class Kind {
  kCommand,
  kText,
  kPath,
  kPositive,
  kNonNegative,
  kPosInt,
  kU64,
  kRealList,
  kPositiveList,
  kVolume,
  kArm,
};

const std::map<std::string, Kind>& schema() {
  static const std::map<std::string, Kind> keys = {
      {"command", Kind::kCommand},     {"lattice", Kind::kText},
      {"lattice_file", Kind::kPath},   {"code_file", Kind::kPath},
      {"scale", Kind::kPositive},      {"volume", Kind::kVolume},
      {"eps_dprime", Kind::kNonNegative},
      {"sigma0", Kind::kPositive},     {"sigma", Kind::kPositive},
      {"snr", Kind::kPositive},        {"shift", Kind::kRealList},
      {"trials", Kind::kPosInt},       {"seed", Kind::kU64},
      {"stream", Kind::kU64},          {"threads", Kind::kPosInt},
      {"out", Kind::kText},            {"count", Kind::kPosInt},
      {"mu", Kind::kPositiveList},     {"n", Kind::kPosInt},
      {"delta", Kind::kNonNegative},   {"p", Kind::kPosInt},
      {"k", Kind::kPosInt},            {"samples", Kind::kPosInt},
      {"gsnr", Kind::kPositive},       {"arm", Kind::kArm},
  };
  return keys;
}

const std::vector<std::string>& sweep_axes() {
  static const std::vector<std::string> axes = {"sigma0", "sigma", "snr", "mu",
                                                "volume"};
  return axes;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {
      "flatness", "sample", "simulate", "sandwich", "exponent", "rate",
      "ensemble"};
  return names;
}

[[noreturn]] void config_error(const std::string& what) {
  fail(ErrorCode::kConfig, what);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_double(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

template <class Int>
std::optional<Int> parse_int(const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::vector<double>> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = parse_double(item);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

bool valid_value(Kind kind, const std::string& value) {
  switch (kind) {
    case Kind::kCommand:
      return std::find(commands().begin(), commands().end(), value) !=
             commands().end();
    case Kind::kText:
    case Kind::kPath:
      return !value.empty();
    case Kind::kPositive: {
      const auto v = parse_double(value);
      return v && *v > 0.0;
    }
    case Kind::kNonNegative: {
      const auto v = parse_double(value);
      return v && *v >= 0.0;
    }
    case Kind::kPosInt: {
      const auto v = parse_int<std::int64_t>(value);
      return v && *v > 0;
    }
    case Kind::kU64:
      return parse_int<std::uint64_t>(value).has_value();
    case Kind::kRealList:
      return parse_list(value).has_value();
    case Kind::kPositiveList: {
      const auto v = parse_list(value);
      return v && std::all_of(v->begin(), v->end(),
                              [](double x) { return x > 0.0; });
    }
    case Kind::kVolume:
      return value == "design" || valid_value(Kind::kPositive, value);
    case Kind::kArm:
      return value == "scheme" || value == "poltyrev" || value == "both";
  }
  return false;
}

// ---------------------------------------------------------------------------
// Output tables.

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) {
        if (c == '"') q += '"';
        q += c;
      }
      return q + "\"";
    }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

Json json_cell(const Cell& cell) {
  struct Visitor {
    Json operator()(const std::string& s) const { return s; }
    Json operator()(double v) const {
      if (std::isfinite(v)) return v;
      return format_double(v);
    }
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(std::uint64_t v) const { return v; }
    Json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << csv_cell(row[i]);
    }
    out << '\n';
  }
}

// Whitespace-separated columns with a '#' header line, for gnuplot.
void write_dat(std::ostream& out, const Table& table) {
  out << '#';
  for (const auto& h : table.header) out << ' ' << h;
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string cell = csv_cell(row[i]);
      std::replace(cell.begin(), cell.end(), ' ', '_');
      out << (i ? " " : "") << cell;
    }
    out << '\n';
  }
}

Json table_json(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[table.header[i]] = json_cell(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write output '" + path + "'");
  out << content;
  if (!out) fail(ErrorCode::kIo, "cannot write output '" + path + "'");
}

// ---------------------------------------------------------------------------
// Resolved view of a config at one sweep point.

class View {
 public:
  View(const ExperimentConfig& config, const RunOverrides& overrides,
       std::optional<std::pair<std::string, double>> point)
      : config_(config), overrides_(overrides), point_(std::move(point)) {}

  bool has(const std::string& key) const {
    return (point_ && point_->first == key) || config_.has(key);
  }
  bool in_file(const std::string& key) const { return config_.has(key); }

  std::string text(const std::string& key) const {
    const std::string* v = config_.find(key);
    if (!v) config_error("missing key '" + key + "'");
    return *v;
  }

  double real(const std::string& key) const {
    if (point_ && point_->first == key) return point_->second;
    return *parse_double(text(key));
  }
  double real_or(const std::string& key, double fallback) const {
    return has(key) ? real(key) : fallback;
  }
  std::int64_t integer(const std::string& key) const {
    return *parse_int<std::int64_t>(text(key));
  }
  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  std::vector<double> list(const std::string& key) const {
    if (point_ && point_->first == key) return {point_->second};
    return *parse_list(text(key));
  }

  std::uint64_t seed() const {
    if (overrides_.seed) return *overrides_.seed;
    return has("seed") ? *parse_int<std::uint64_t>(text("seed")) : 0;
  }
  std::uint64_t stream() const {
    return has("stream") ? *parse_int<std::uint64_t>(text("stream")) : 0;
  }
  std::int64_t trials() const {
    if (overrides_.trials) return *overrides_.trials;
    return integer_or("trials", 100000);
  }
  int threads() const {
    if (overrides_.threads) return *overrides_.threads;
    return static_cast<int>(integer_or("threads", 1));
  }

  std::string path(const std::string& key) const {
    std::filesystem::path p(text(key));
    if (p.is_relative() && !config_.base_dir.empty()) {
      p = std::filesystem::path(config_.base_dir) / p;
    }
    return p.string();
  }

  GaussianParams params() const {
    if (has("snr")) {
      if (has("sigma0") || has("sigma")) {
        config_error("snr conflicts with sigma0/sigma");
      }
      return make_params(std::sqrt(real("snr")), 1.0);
    }
    if (!has("sigma0") || !has("sigma")) {
      config_error("sigma0 and sigma (or snr) are required");
    }
    return make_params(real("sigma0"), real("sigma"));
  }

  // Lattice from name, basis file or code file, before any volume setting.
  Lattice base_lattice() const {
    const int sources = has("lattice") + has("lattice_file") + has("code_file");
    if (sources != 1) {
      config_error("exactly one of lattice, lattice_file, code_file is required");
    }
    Lattice lattice = [&] {
      if (has("lattice")) {
        try {
          return standard_lattice(text("lattice"));
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kUnknownName) {
            config_error("unknown lattice '" + text("lattice") + "'");
          }
          throw;
        }
      }
      if (has("lattice_file")) return load_lattice(path("lattice_file"));
      std::ifstream probe(path("code_file"));
      if (!probe) config_error("code file not found");
      return lift(load_code(path("code_file")), 1.0);
    }();
    if (has("scale")) lattice = lattice.scaled(real("scale"));
    return lattice;
  }

  // Applies a numeric `volume`, or design_volume when volume = design.
  Lattice lattice(const GaussianParams* params) const {
    Lattice lattice = base_lattice();
    if (!has("volume")) return lattice;
    if (!(point_ && point_->first == "volume") && text("volume") == "design") {
      if (!params) config_error("volume = design needs sigma0 and sigma");
      return scale_to_volume(
          lattice, design_volume(params->sigma_tilde,
                                 real_or("eps_dprime", 0.05), lattice.dim()))
          .relabeled(lattice.label());
    }
    return scale_to_volume(lattice, real("volume")).relabeled(lattice.label());
  }

  Shift shift(int n) const {
    if (!has("shift")) return Shift::zero(n);
    const auto values = list("shift");
    if (static_cast<int>(values.size()) != n) {
      config_error("shift must have " + std::to_string(n) + " entries");
    }
    return Shift{Eigen::Map<const Vector>(values.data(), n)};
  }

 private:
  const ExperimentConfig& config_;
  const RunOverrides& overrides_;
  std::optional<std::pair<std::string, double>> point_;
};

// ---------------------------------------------------------------------------
// Commands. Each appends rows for one sweep point.

const std::vector<std::string> kSimHeader = {
    "lattice", "label", "n",      "sigma0", "sigma",  "alpha",
    "sigma_tilde", "V", "mu",     "trials", "errors", "p_hat",
    "ci_low", "ci_high", "seed"};

std::vector<Cell> sim_row(const SimResult& r) {
  return {r.lattice,          r.label,
          std::int64_t{r.n},  r.sigma0,
          r.sigma,            r.alpha,
          r.sigma_tilde,      r.volume,
          r.mu,               r.trials,
          r.errors,           r.p_hat,
          r.ci_low,           r.ci_high,
          r.seed.master_seed};
}

void run_flatness(const View& v, Table& t) {
  t.header = {"lattice", "n", "V", "sigma", "gsnr", "epsilon", "theta",
              "truncation_bound", "route"};
  if (!v.has("sigma")) config_error("flatness needs sigma");
  const Lattice lattice = v.lattice(nullptr);
  const FlatnessReport r = flatness(lattice, v.real("sigma"));
  t.rows.push_back({lattice.label(), std::int64_t{lattice.dim()},
                    lattice.volume(), r.sigma, r.gsnr, r.epsilon,
                    r.theta.value, r.theta.truncation_bound,
                    std::string(route_name(r.theta.route))});
}

Json spec_json(const DiscreteGaussianSpec& spec) {
  Json j = Json::object();
  j["lattice"] = spec.lattice().label();
  j["n"] = spec.lattice().dim();
  j["sigma0"] = spec.sigma0();
  j["shift"] = std::vector<double>(spec.shift().c.data(),
                                   spec.shift().c.data() + spec.shift().c.size());
  j["truncation_radius"] = spec.truncation_radius();
  j["deficit"] = spec.deficit();
  j["sampler"] = spec.kind() == SamplerKind::kTable ? "table" : "rejection";
  j["support_size"] = spec.support().size();
  return j;
}

void run_sample(const View& v, Table& t, Json& extra) {
  if (!v.has("sigma0")) config_error("sample needs sigma0");
  const Lattice lattice = v.lattice(nullptr);
  const int n = lattice.dim();
  const auto spec = build_spec(lattice, v.real("sigma0"), v.shift(n));
  const auto points =
      sample(spec, {v.seed(), v.stream()}, v.integer_or("count", 1000));
  t.header.clear();
  for (int i = 0; i < n; ++i) t.header.push_back("k" + std::to_string(i));
  for (int i = 0; i < n; ++i) t.header.push_back("x" + std::to_string(i));
  for (const auto& p : points) {
    std::vector<Cell> row;
    for (int i = 0; i < n; ++i) row.emplace_back(p.coeffs[i]);
    for (int i = 0; i < n; ++i) row.emplace_back(p.embedding[i]);
    t.rows.push_back(std::move(row));
  }
  extra = spec_json(spec);
}

void run_simulate(const View& v, Table& t) {
  t.header = kSimHeader;
  const GaussianParams params = v.params();
  const Lattice lattice = v.lattice(&params);
  SimOptions options;
  options.threads = v.threads();
  const RngSeed seed{v.seed(), v.stream()};
  const std::string arm = v.has("arm") ? v.text("arm") : "scheme";
  if (arm == "scheme" || arm == "both") {
    t.rows.push_back(sim_row(simulate_error(lattice, v.shift(lattice.dim()),
                                            params, v.trials(), seed, options)));
  }
  if (arm == "poltyrev" || arm == "both") {
    t.rows.push_back(sim_row(simulate_poltyrev(lattice, params.sigma_tilde,
                                               v.trials(), seed, options)));
  }
}

void run_sandwich(const View& v, Table& t) {
  t.header = {"lattice",     "n",          "sigma0",        "sigma",
              "alpha",       "sigma_tilde", "V",            "mu",
              "trials",      "errors_scheme", "errors_poltyrev", "p_scheme",
              "p_poltyrev",  "ratio",      "ratio_low",     "ratio_high",
              "bracket_low", "bracket_high", "eps1",        "eps2",
              "pass",        "seed"};
  const GaussianParams params = v.params();
  const Lattice lattice = v.lattice(&params);
  SimOptions options;
  options.threads = v.threads();
  const SandwichResult r =
      sandwich_check(lattice, v.shift(lattice.dim()), params, v.trials(),
                     {v.seed(), v.stream()}, options);
  t.rows.push_back({lattice.label(), std::int64_t{lattice.dim()},
                    params.sigma0, params.sigma, params.alpha,
                    params.sigma_tilde, lattice.volume(), r.scheme.mu,
                    r.scheme.trials, r.scheme.errors, r.poltyrev.errors,
                    r.scheme.p_hat, r.poltyrev.p_hat, r.ratio, r.ratio_low,
                    r.ratio_high, r.lo, r.hi, r.eps1, r.eps2, r.pass,
                    v.seed()});
}

void run_exponent(const View& v, Table& t) {
  t.header = {"mu", "exponent", "n", "bound"};
  if (!v.has("mu")) config_error("exponent needs mu");
  int n = 1;
  if (v.has("n")) {
    n = static_cast<int>(v.integer("n"));
  } else if (v.has("lattice") || v.has("lattice_file") || v.has("code_file")) {
    n = v.base_lattice().dim();
  }
  for (double mu : v.list("mu")) {
    const PoltyrevPoint p = poltyrev_exponent(mu, n);
    t.rows.push_back({p.mu, p.exponent, std::int64_t{p.n}, p.bound});
  }
}

void run_rate(const View& v, Table& t) {
  t.header = {"lattice",    "n",          "sigma0",     "sigma",
              "snr",        "eps",        "eps_prime",  "eps_dprime",
              "capacity",   "rate_lower"};
  const GaussianParams params = v.params();
  const Lattice lattice = v.lattice(&params);
  const RateBudget b =
      rate_budget(lattice, params, v.real_or("eps_dprime", 0.05));
  t.rows.push_back({lattice.label(), std::int64_t{b.n}, params.sigma0,
                    params.sigma, b.snr, b.eps, b.eps_prime, b.eps_dprime,
                    b.capacity, b.rate_lower});
}

void run_ensemble(const View& v, Table& t) {
  t.header = {"sample_index", "p", "n", "k", "a", "gsnr", "epsilon", "bound"};
  for (const char* key : {"p", "n", "k"}) {
    if (!v.has(key)) config_error(std::string("ensemble needs ") + key);
  }
  const std::int64_t p = v.integer("p");
  const int n = static_cast<int>(v.integer("n"));
  const int k = static_cast<int>(v.integer("k"));
  const double sigma = v.real_or("sigma", 1.0);
  double scale = 0.0;
  if (v.has("scale") == v.has("gsnr")) {
    config_error("ensemble needs exactly one of scale, gsnr");
  }
  scale = v.has("scale") ? v.real("scale")
                         : scale_for_gsnr(p, n, k, v.real("gsnr"), sigma);
  const auto ranked = ensemble_search(
      p, n, k, scale, sigma, static_cast<int>(v.integer_or("samples", 200)),
      {v.seed(), v.stream()}, v.real_or("delta", 1.0), v.threads());
  for (const auto& e : ranked) {
    t.rows.push_back({e.sample_index, e.code.p, std::int64_t{e.code.n},
                      std::int64_t{e.code.k}, e.scale, e.flatness.gsnr,
                      e.flatness.epsilon, e.bound});
  }
}

const std::map<std::string, std::vector<std::string>>& allowed_axes() {
  static const std::map<std::string, std::vector<std::string>> axes = {
      {"flatness", {"sigma", "volume"}},
      {"sample", {}},
      {"simulate", {"sigma0", "sigma", "snr", "volume"}},
      {"sandwich", {"sigma0", "sigma", "snr", "volume"}},
      {"exponent", {"mu"}},
      {"rate", {"sigma0", "sigma", "snr"}},
      {"ensemble", {}},
  };
  return axes;
}

std::string error_class(int exit_code) {
  switch (exit_code) {
    case 2: return "config";
    case 3: return "numeric";
    default: return "internal";
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key.rfind("sweep.", 0) == 0) {
    const std::string axis = key.substr(6);
    if (std::find(sweep_axes().begin(), sweep_axes().end(), axis) ==
        sweep_axes().end()) {
      config_error("unknown sweep axis '" + axis + "'");
    }
    if (!valid_value(Kind::kPositiveList, value)) {
      config_error("invalid value for '" + key + "'");
    }
    for (const auto& [k, v] : entries_) {
      if (k.rfind("sweep.", 0) == 0 && k != key) {
        fail(ErrorCode::kMultipleAxes, "only one sweep axis is allowed");
      }
    }
  } else {
    const auto it = schema().find(key);
    if (it == schema().end()) config_error("unknown key '" + key + "'");
    if (!valid_value(it->second, value)) {
      config_error("invalid value for '" + key + "'");
    }
  }
  for (auto& entry : entries_) {
    if (entry.first == key) {
      entry.second = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

const std::string* ExperimentConfig::find(const std::string& key) const {
  for (const auto& entry : entries_) {
    if (entry.first == key) return &entry.second;
  }
  return nullptr;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (config.has(key)) {
      config_error("line " + std::to_string(number) + ": duplicate key '" +
                   key + "'");
    }
    config.set(key, value);
  }
  if (!config.has("command")) config_error("missing key 'command'");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "config file not found");
  ExperimentConfig config = parse_config(in);
  config.base_dir = std::filesystem::path(path).parent_path().string();
  return config;
}

int exit_code_for(ErrorCode code) {
  if (is_numeric_error(code)) return 3;
  switch (code) {
    case ErrorCode::kNotSquare:
    case ErrorCode::kUnknownName:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kIo:
    case ErrorCode::kConfig:
    case ErrorCode::kMultipleAxes:
      return 2;
    default:
      return 1;
  }
}

RunReport run_experiment(const ExperimentConfig& config,
                         const RunOverrides& overrides, std::ostream& console) {
  RunReport report;
  const auto started = std::chrono::steady_clock::now();
  try {
    const std::string* command = config.find("command");
    if (!command) config_error("missing key 'command'");

    std::optional<std::pair<std::string, std::vector<double>>> sweep;
    for (const auto& [key, value] : config.entries()) {
      if (key.rfind("sweep.", 0) == 0) {
        sweep.emplace(key.substr(6), *parse_list(value));
      }
    }
    if (sweep) {
      const auto& ok = allowed_axes().at(*command);
      if (std::find(ok.begin(), ok.end(), sweep->first) == ok.end()) {
        config_error("sweep axis '" + sweep->first + "' does not apply to " +
                     *command);
      }
      if (config.has(sweep->first)) {
        config_error("'" + sweep->first + "' is both fixed and swept");
      }
    }

    Table table;
    Json extra;
    auto run_point = [&](const View& v) {
      if (*command == "flatness") run_flatness(v, table);
      else if (*command == "sample") run_sample(v, table, extra);
      else if (*command == "simulate") run_simulate(v, table);
      else if (*command == "sandwich") run_sandwich(v, table);
      else if (*command == "exponent") run_exponent(v, table);
      else if (*command == "rate") run_rate(v, table);
      else run_ensemble(v, table);
    };
    if (sweep) {
      for (double value : sweep->second) {
        run_point(View(config, overrides, std::make_pair(sweep->first, value)));
      }
    } else {
      run_point(View(config, overrides, std::nullopt));
    }
    report.rows = static_cast<std::int64_t>(table.rows.size());

    std::string out_path;
    if (overrides.out) {
      out_path = *overrides.out;
    } else if (const std::string* out = config.find("out")) {
      out_path = *out;
      if (std::filesystem::path(out_path).is_relative() &&
          !config.base_dir.empty()) {
        out_path = (std::filesystem::path(config.base_dir) / out_path).string();
      }
    }
    if (out_path.empty()) {
      write_csv(console, table);
      return report;
    }

    std::ostringstream body;
    if (ends_with(out_path, ".json")) {
      body << table_json(table).dump(2) << '\n';
    } else {
      write_csv(body, table);
    }
    write_file(out_path, body.str());
    report.outputs.push_back(out_path);
    if (sweep) {
      std::ostringstream dat;
      write_dat(dat, table);
      const std::string dat_path = out_path + ".dat";
      write_file(dat_path, dat.str());
      report.outputs.push_back(dat_path);
    }
    if (!extra.is_null()) {
      const std::string spec_path = out_path + ".spec.json";
      write_file(spec_path, extra.dump(2) + "\n");
      report.outputs.push_back(spec_path);
    }

    const View base(config, overrides, std::nullopt);
    Json manifest = Json::object();
    manifest["tool"] = "lgc";
    manifest["version"] = kVersion;
    manifest["command"] = *command;
    Json echo = Json::object();
    for (const auto& [key, value] : config.entries()) echo[key] = value;
    manifest["config"] = std::move(echo);
    Json resolved = Json::object();
    resolved["seed"] = base.seed();
    resolved["stream"] = base.stream();
    resolved["trials"] = base.trials();
    resolved["threads"] = base.threads();
    resolved["out"] = out_path;
    manifest["resolved"] = std::move(resolved);
    if (sweep) {
      manifest["sweep"] = {{"axis", sweep->first}, {"values", sweep->second}};
    }
    manifest["rows"] = report.rows;
    manifest["outputs"] = report.outputs;
    manifest["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    const std::string manifest_path = out_path + ".manifest.json";
    write_file(manifest_path, manifest.dump(2) + "\n");
    report.outputs.push_back(manifest_path);
  } catch (const Error& e) {
    report.exit_code = exit_code_for(e.code());
    report.message = error_class(report.exit_code) + ": " + e.what();
  } catch (const std::exception& e) {
    report.exit_code = 1;
    report.message = std::string("internal: ") + e.what();
  }
  return report;
}

}  // namespace lgc
