// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/lgc.h"

#include <cstdio>
#include <exception>
#include <memory>
#include <sstream>
#include <string>

#include "lgc/analytics.hpp"
#include "lgc/construction_a.hpp"
#include "lgc/harness.hpp"
#include "lgc/lattice.hpp"
#include "lgc/sampler.hpp"
#include "lgc/scheme.hpp"
#include "lgc/version.hpp"

struct lgc_lattice {
  lgc::Lattice value;
};

struct lgc_spec {
  lgc::DiscreteGaussianSpec value;
};

struct lgc_code {
  lgc::LinearCode value;
};

namespace {

thread_local std::string last_error;

lgc_status set_error(lgc_status status, const std::string& what) {
  last_error = what;
  return status;
}

// Runs body, translating exceptions to a status and the thread's message.
template <class F>
lgc_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return LGC_OK;
  } catch (const lgc::Error& e) {
    return set_error(static_cast<lgc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LGC_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(LGC_INTERNAL, e.what());
  } catch (...) {
    return set_error(LGC_INTERNAL, "unknown exception");
  }
}

#define LGC_REQUIRE(ptr)                                             \
  do {                                                               \
    if ((ptr) == nullptr) {                                          \
      return set_error(LGC_NULL_ARGUMENT, #ptr " must not be null"); \
    }                                                                \
  } while (0)

lgc::Shift to_shift(const double* shift, int n) {
  if (shift == nullptr) return lgc::Shift::zero(n);
  return lgc::Shift{Eigen::Map<const lgc::Vector>(shift, n)};
}

void fill(const lgc::SimResult& r, lgc_sim_result* out) {
  out->n = r.n;
  out->sigma0 = r.sigma0;
  out->sigma = r.sigma;
  out->alpha = r.alpha;
  out->sigma_tilde = r.sigma_tilde;
  out->volume = r.volume;
  out->mu = r.mu;
  out->trials = r.trials;
  out->errors = r.errors;
  out->p_hat = r.p_hat;
  out->ci_low = r.ci_low;
  out->ci_high = r.ci_high;
}

lgc::SimOptions sim_options(int threads) {
  lgc::SimOptions options;
  options.threads = threads < 1 ? 1 : threads;
  return options;
}

}  // namespace

extern "C" {

const char* lgc_version(void) { return lgc::kVersion; }

const char* lgc_last_error(void) { return last_error.c_str(); }

const char* lgc_status_name(lgc_status status) {
  switch (status) {
    case LGC_OK: return "Ok";
    case LGC_NULL_ARGUMENT: return "NullArgument";
    case LGC_INTERNAL: return "Internal";
    default:
      if (status >= LGC_NOT_SQUARE && status <= LGC_MULTIPLE_AXES) {
        return lgc::error_code_name(static_cast<lgc::ErrorCode>(status));
      }
      return "Unknown";
  }
}

lgc_status lgc_lattice_new(const double* basis, int n, lgc_lattice** out) {
  LGC_REQUIRE(basis);
  LGC_REQUIRE(out);
  if (n < 1) return set_error(LGC_INVALID_ARGUMENT, "n must be >= 1");
  return guarded([&] {
    *out = new lgc_lattice{
        lgc::make_lattice(Eigen::Map<const lgc::Matrix>(basis, n, n))};
  });
}

lgc_status lgc_lattice_standard(const char* name, lgc_lattice** out) {
  LGC_REQUIRE(name);
  LGC_REQUIRE(out);
  return guarded([&] { *out = new lgc_lattice{lgc::standard_lattice(name)}; });
}

lgc_status lgc_lattice_load(const char* path, lgc_lattice** out) {
  LGC_REQUIRE(path);
  LGC_REQUIRE(out);
  return guarded([&] { *out = new lgc_lattice{lgc::load_lattice(path)}; });
}

lgc_status lgc_lattice_scaled(const lgc_lattice* lattice, double factor,
                              lgc_lattice** out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  if (!(factor > 0.0)) {
    return set_error(LGC_INVALID_ARGUMENT, "factor must be positive");
  }
  return guarded(
      [&] { *out = new lgc_lattice{lattice->value.scaled(factor)}; });
}

lgc_status lgc_lattice_with_volume(const lgc_lattice* lattice, double volume,
                                   lgc_lattice** out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  return guarded([&] {
    *out = new lgc_lattice{lgc::scale_to_volume(lattice->value, volume)};
  });
}

void lgc_lattice_free(lgc_lattice* lattice) { delete lattice; }

int lgc_lattice_dim(const lgc_lattice* lattice) {
  return lattice ? lattice->value.dim() : 0;
}

double lgc_lattice_volume(const lgc_lattice* lattice) {
  return lattice ? lattice->value.volume() : 0.0;
}

lgc_status lgc_lattice_basis(const lgc_lattice* lattice, double* out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  const lgc::Matrix& b = lattice->value.basis();
  Eigen::Map<lgc::Matrix>(out, b.rows(), b.cols()) = b;
  return LGC_OK;
}

lgc_status lgc_lattice_decode(const lgc_lattice* lattice, const double* shift,
                              const double* y, int64_t* coeffs,
                              double* point) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(y);
  return guarded([&] {
    const int n = lattice->value.dim();
    const lgc::LatticePoint p =
        lgc::coset_decode(lattice->value, to_shift(shift, n),
                          Eigen::Map<const lgc::Vector>(y, n));
    for (int i = 0; i < n; ++i) {
      if (coeffs) coeffs[i] = p.coeffs[i];
      if (point) point[i] = p.embedding[i];
    }
  });
}

lgc_status lgc_theta(const lgc_lattice* lattice, double tau, double* value,
                     double* truncation_bound) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(value);
  return guarded([&] {
    const lgc::ThetaValue t = lgc::theta(lattice->value, tau);
    *value = t.value;
    if (truncation_bound) *truncation_bound = t.truncation_bound;
  });
}

lgc_status lgc_flatness(const lgc_lattice* lattice, double sigma,
                        lgc_flatness_result* out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  return guarded([&] {
    const lgc::FlatnessReport r = lgc::flatness(lattice->value, sigma);
    out->sigma = r.sigma;
    out->gsnr = r.gsnr;
    out->epsilon = r.epsilon;
    out->theta = r.theta.value;
    out->truncation_bound = r.theta.truncation_bound;
  });
}

lgc_status lgc_spec_new(const lgc_lattice* lattice, double sigma0,
                        const double* shift, lgc_spec** out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  return guarded([&] {
    *out = new lgc_spec{lgc::build_spec(
        lattice->value, sigma0, to_shift(shift, lattice->value.dim()))};
  });
}

void lgc_spec_free(lgc_spec* spec) { delete spec; }

double lgc_spec_truncation_radius(const lgc_spec* spec) {
  return spec ? spec->value.truncation_radius() : 0.0;
}

lgc_status lgc_sample(const lgc_spec* spec, uint64_t seed, uint64_t stream,
                      int64_t count, int64_t* coeffs, double* points) {
  LGC_REQUIRE(spec);
  if (count < 1) return set_error(LGC_INVALID_ARGUMENT, "count must be >= 1");
  return guarded([&] {
    const int n = spec->value.lattice().dim();
    lgc::SpecSampler sampler(spec->value, {seed, stream});
    lgc::Coeffs k;
    for (int64_t t = 0; t < count; ++t) {
      const lgc::Vector& x = sampler.draw(k);
      for (int i = 0; i < n; ++i) {
        if (coeffs) coeffs[t * n + i] = k[i];
        if (points) points[t * n + i] = x[i];
      }
    }
  });
}

lgc_status lgc_simulate_error(const lgc_lattice* lattice, const double* shift,
                              double sigma0, double sigma, int64_t trials,
                              uint64_t seed, int threads,
                              lgc_sim_result* out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  return guarded([&] {
    fill(lgc::simulate_error(lattice->value,
                             to_shift(shift, lattice->value.dim()),
                             lgc::make_params(sigma0, sigma), trials, {seed, 0},
                             sim_options(threads)),
         out);
  });
}

lgc_status lgc_simulate_poltyrev(const lgc_lattice* lattice,
                                 double noise_sigma, int64_t trials,
                                 uint64_t seed, int threads,
                                 lgc_sim_result* out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  return guarded([&] {
    fill(lgc::simulate_poltyrev(lattice->value, noise_sigma, trials, {seed, 0},
                                sim_options(threads)),
         out);
  });
}

lgc_status lgc_sandwich(const lgc_lattice* lattice, const double* shift,
                        double sigma0, double sigma, int64_t trials,
                        uint64_t seed, int threads, lgc_sandwich_result* out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  return guarded([&] {
    const lgc::SandwichResult r = lgc::sandwich_check(
        lattice->value, to_shift(shift, lattice->value.dim()),
        lgc::make_params(sigma0, sigma), trials, {seed, 0},
        sim_options(threads));
    out->ratio = r.ratio;
    out->ratio_low = r.ratio_low;
    out->ratio_high = r.ratio_high;
    out->lo = r.lo;
    out->hi = r.hi;
    out->eps1 = r.eps1;
    out->eps2 = r.eps2;
    out->pass = r.pass ? 1 : 0;
    fill(r.scheme, &out->scheme);
    fill(r.poltyrev, &out->poltyrev);
  });
}

lgc_status lgc_poltyrev_exponent(double mu, int n, double* exponent,
                                 double* bound) {
  LGC_REQUIRE(exponent);
  return guarded([&] {
    const lgc::PoltyrevPoint p = lgc::poltyrev_exponent(mu, n);
    *exponent = p.exponent;
    if (bound) *bound = p.bound;
  });
}

lgc_status lgc_rate(const lgc_lattice* lattice, double sigma0, double sigma,
                    double eps_dprime, lgc_rate_result* out) {
  LGC_REQUIRE(lattice);
  LGC_REQUIRE(out);
  return guarded([&] {
    const lgc::RateBudget b = lgc::rate_budget(
        lattice->value, lgc::make_params(sigma0, sigma), eps_dprime);
    out->snr = b.snr;
    out->eps = b.eps;
    out->eps_prime = b.eps_prime;
    out->eps_dprime = b.eps_dprime;
    out->capacity = b.capacity;
    out->rate_lower = b.rate_lower;
  });
}

lgc_status lgc_code_new(int64_t p, int n, int k, const int64_t* generator,
                        lgc_code** out) {
  LGC_REQUIRE(generator);
  LGC_REQUIRE(out);
  if (n < 1 || k < 1) {
    return set_error(LGC_INVALID_ARGUMENT, "n and k must be >= 1");
  }
  return guarded([&] {
    lgc::LinearCode code;
    code.p = p;
    code.n = n;
    code.k = k;
    for (int r = 0; r < k; ++r) {
      code.generator.emplace_back(generator + r * n, generator + (r + 1) * n);
    }
    lgc::validate_code(code);
    *out = new lgc_code{std::move(code)};
  });
}

lgc_status lgc_code_random(int64_t p, int n, int k, uint64_t seed,
                           lgc_code** out) {
  LGC_REQUIRE(out);
  return guarded(
      [&] { *out = new lgc_code{lgc::random_code(p, n, k, {seed, 0})}; });
}

lgc_status lgc_code_load(const char* path, lgc_code** out) {
  LGC_REQUIRE(path);
  LGC_REQUIRE(out);
  return guarded([&] { *out = new lgc_code{lgc::load_code(path)}; });
}

void lgc_code_free(lgc_code* code) { delete code; }

lgc_status lgc_code_lift(const lgc_code* code, double scale,
                         lgc_lattice** out) {
  LGC_REQUIRE(code);
  LGC_REQUIRE(out);
  return guarded(
      [&] { *out = new lgc_lattice{lgc::lift(code->value, scale)}; });
}

lgc_status lgc_run(const char* config_path, const lgc_run_options* options,
                   int* exit_code) {
  LGC_REQUIRE(config_path);
  LGC_REQUIRE(exit_code);
  return guarded([&] {
    lgc::RunOverrides overrides;
    if (options) {
      if (options->out_path) overrides.out = options->out_path;
      if (options->seed) overrides.seed = *options->seed;
      if (options->trials) overrides.trials = *options->trials;
      if (options->threads) overrides.threads = *options->threads;
    }
    lgc::RunReport report;
    try {
      const lgc::ExperimentConfig config = lgc::load_config(config_path);
      std::ostringstream console;
      report = lgc::run_experiment(config, overrides, console);
      if (report.exit_code == 0 && !overrides.out && !config.has("out")) {
        std::fputs(console.str().c_str(), stdout);
      }
    } catch (const lgc::Error& e) {
      report.exit_code = lgc::exit_code_for(e.code());
      report.message = std::string(report.exit_code == 3 ? "numeric: "
                                   : report.exit_code == 2 ? "config: "
                                                           : "internal: ") +
                       e.what();
    }
    *exit_code = report.exit_code;
    last_error = report.message;
  });
}

}  // extern "C"
