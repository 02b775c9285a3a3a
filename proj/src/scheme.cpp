// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/scheme.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "lgc/analytics.hpp"
#include "lgc/radial.hpp"

namespace lgc {

namespace {

void require_sigma(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail(ErrorCode::kNonpositiveSigma, std::string(what) + " must be positive");
  }
}

RngSeed shard_stream(RngSeed seed, std::int64_t block, int which) {
  return {seed.master_seed, (seed.stream_index << 32) +
                                2 * static_cast<std::uint64_t>(block) +
                                static_cast<std::uint64_t>(which)};
}

// Runs count_block(b, trials_in_block) over all shards and sums the results.
// Shard boundaries depend only on `trials` and options.block.
template <class CountBlock>
std::int64_t run_shards(std::int64_t trials, const SimOptions& options,
                        CountBlock&& count_block) {
  if (trials < 1) fail(ErrorCode::kInvalidArgument, "trials must be >= 1");
  const std::int64_t block = std::max<std::int64_t>(1, options.block);
  const std::int64_t blocks = (trials + block - 1) / block;
  std::vector<std::int64_t> errors(static_cast<std::size_t>(blocks), 0);
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::int64_t b; (b = next.fetch_add(1)) < blocks;) {
        const std::int64_t size = std::min(block, trials - b * block);
        errors[static_cast<std::size_t>(b)] = count_block(b, size);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(blocks);
    }
  };
  const int threads = static_cast<int>(
      std::clamp<std::int64_t>(options.threads, 1, blocks));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::int64_t total = 0;
  for (auto e : errors) total += e;
  return total;
}

void finish(SimResult& r) {
  r.p_hat = static_cast<double>(r.errors) / static_cast<double>(r.trials);
  const Interval ci = wilson_interval(r.errors, r.trials);
  r.ci_low = ci.lo;
  r.ci_high = ci.hi;
}

}  // namespace

GaussianParams make_params(double sigma0, double sigma) {
  require_sigma(sigma0, "sigma0");
  require_sigma(sigma, "sigma");
  GaussianParams p;
  p.sigma0 = sigma0;
  p.sigma = sigma;
  const double s0 = sigma0 * sigma0;
  const double s = sigma * sigma;
  p.alpha = s0 / (s0 + s);
  p.sigma_tilde = sigma0 * sigma / std::sqrt(s0 + s);
  p.snr = s0 / s;
  p.power = s0;
  return p;
}

Vector awgn(const Vector& x, double sigma, RngSeed seed) {
  if (sigma < 0.0) fail(ErrorCode::kNonpositiveSigma, "sigma must be >= 0");
  Rng rng(seed);
  Vector y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += sigma * rng.normal();
  return y;
}

LatticePoint mmse_decode(const Lattice& lattice, const Shift& shift,
                         const GaussianParams& params, const Vector& y,
                         const DecodeOptions& options) {
  return coset_decode(lattice, shift, params.alpha * y, options);
}

MapDecoder::MapDecoder(const DiscreteGaussianSpec& spec,
                       const GaussianParams& params)
    : spec_(spec), params_(params) {
  const Lattice& lattice = spec.lattice();
  const int n = lattice.dim();
  Matrix stacked(2 * n, n);
  stacked.topRows(n) = lattice.basis() / params.sigma;
  stacked.bottomRows(n) = lattice.basis() / params.sigma0;
  Eigen::HouseholderQR<Matrix> qr(stacked);
  q_ = qr.householderQ() * Matrix::Identity(2 * n, n);
  enumerator_ = SphereEnumerator(
      qr.matrixQR().topRows(n).triangularView<Eigen::Upper>());
}

MapResult MapDecoder::decode(const Vector& y, std::uint64_t node_cap) const {
  const Lattice& lattice = spec_.lattice();
  const int n = lattice.dim();
  if (y.size() != n) fail(ErrorCode::kDimensionMismatch, "y length mismatch");
  const Vector& c = spec_.shift().c;
  Vector target(2 * n);
  target.head(n) = (y + c) / params_.sigma;
  target.tail(n) = c / params_.sigma0;
  const Vector z = q_.transpose() * target;
  const double offset = target.squaredNorm() - z.squaredNorm();
  const double limit_sq =
      spec_.truncation_radius() * spec_.truncation_radius();

  auto in_support = [&](std::span<const double> k) {
    Vector x = -c;
    for (int j = 0; j < n; ++j) x += k[j] * lattice.basis().col(j);
    return x.squaredNorm() <= limit_sq;
  };
  auto stacked_dist = [&](const Coeffs& k) {
    Vector kv(n);
    for (int j = 0; j < n; ++j) kv[j] = static_cast<double>(k[j]);
    return (enumerator_.r() * kv - z).squaredNorm();
  };

  // Any feasible point bounds the search radius: the coset point nearest
  // the origin, and the one nearest y pulled inside the ball.
  double radius_sq = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& point) {
    const LatticePoint p = coset_decode(lattice, spec_.shift(), point);
    if (p.embedding.squaredNorm() <= limit_sq) {
      radius_sq = std::min(radius_sq, stacked_dist(p.coeffs));
    }
  };
  consider(Vector::Zero(n));
  const double y_norm = y.norm();
  const double inner = 0.5 * spec_.truncation_radius();
  consider(y_norm > inner ? Vector(y * (inner / y_norm)) : y);
  if (!std::isfinite(radius_sq)) {
    fail(ErrorCode::kInvalidArgument, "support ball holds no coset point");
  }
  radius_sq += 2.0 * tie_tolerance(radius_sq);

  const auto best = enumerator_.closest(
      z, radius_sq,
      [&](std::span<const double> k, double) { return in_support(k); },
      node_cap);
  MapResult out;
  out.point.coeffs.resize(n);
  for (int j = 0; j < n; ++j) {
    out.point.coeffs[j] = static_cast<std::int64_t>(best.coeffs[j]);
  }
  out.point.embedding = lattice.embed(out.point.coeffs) - c;
  out.metric = 0.5 * (best.dist_sq + offset);
  out.tie = best.tie;
  return out;
}

LatticePoint map_decode(const DiscreteGaussianSpec& spec,
                        const GaussianParams& params, const Vector& y) {
  return MapDecoder(spec, params).decode(y).point;
}

Interval wilson_interval(std::int64_t errors, std::int64_t trials, double z) {
  if (trials < 1 || errors < 0 || errors > trials) {
    fail(ErrorCode::kInvalidArgument, "invalid error count");
  }
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half =
      z / denom * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (errors == 0) ci.lo = 0.0;
  if (errors == trials) ci.hi = 1.0;
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

SimResult simulate_error(const DiscreteGaussianSpec& spec,
                         const GaussianParams& params, std::int64_t trials,
                         RngSeed seed, const SimOptions& options) {
  const Lattice& lattice = spec.lattice();
  const int n = lattice.dim();
  const Vector& c = spec.shift().c;
  const std::int64_t errors =
      run_shards(trials, options, [&](std::int64_t b, std::int64_t size) {
        SpecSampler codewords(spec, shard_stream(seed, b, 0));
        Rng noise(shard_stream(seed, b, 1));
        Coeffs k;
        Vector y(n);
        std::int64_t count = 0;
        for (std::int64_t t = 0; t < size; ++t) {
          const Vector& x = codewords.draw(k);
          for (int i = 0; i < n; ++i) y[i] = x[i] + params.sigma * noise.normal();
          const auto hat = lattice.enumerator().closest(
              lattice.to_triangular(params.alpha * y + c));
          for (int i = 0; i < n; ++i) {
            if (hat.coeffs[i] != static_cast<double>(k[i])) {
              ++count;
              break;
            }
          }
        }
        return count;
      });
  SimResult r;
  r.lattice = lattice.label();
  r.label = "scheme";
  r.n = n;
  r.sigma0 = params.sigma0;
  r.sigma = params.sigma;
  r.alpha = params.alpha;
  r.sigma_tilde = params.sigma_tilde;
  r.volume = lattice.volume();
  r.mu = vnr(lattice, params.sigma_tilde);
  r.trials = trials;
  r.errors = errors;
  r.seed = seed;
  finish(r);
  return r;
}

SimResult simulate_error(const Lattice& lattice, const Shift& shift,
                         const GaussianParams& params, std::int64_t trials,
                         RngSeed seed, const SimOptions& options) {
  return simulate_error(build_spec(lattice, params.sigma0, shift), params,
                        trials, seed, options);
}

SimResult simulate_poltyrev(const Lattice& lattice, double noise_sigma,
                            std::int64_t trials, RngSeed seed,
                            const SimOptions& options) {
  if (noise_sigma < 0.0 || !std::isfinite(noise_sigma)) {
    fail(ErrorCode::kNonpositiveSigma, "noise sigma must be >= 0");
  }
  const int n = lattice.dim();
  const std::int64_t errors =
      run_shards(trials, options, [&](std::int64_t b, std::int64_t size) {
        Rng noise(shard_stream(seed, b, 1));
        Vector y(n);
        std::int64_t count = 0;
        for (std::int64_t t = 0; t < size; ++t) {
          for (int i = 0; i < n; ++i) y[i] = noise_sigma * noise.normal();
          const auto hat =
              lattice.enumerator().closest(lattice.to_triangular(y));
          for (int i = 0; i < n; ++i) {
            if (hat.coeffs[i] != 0.0) {
              ++count;
              break;
            }
          }
        }
        return count;
      });
  SimResult r;
  r.lattice = lattice.label();
  r.label = "poltyrev";
  r.n = n;
  r.sigma0 = std::numeric_limits<double>::infinity();
  r.sigma = noise_sigma;
  r.alpha = 1.0;
  r.sigma_tilde = noise_sigma;
  r.volume = lattice.volume();
  r.mu = noise_sigma > 0.0 ? vnr(lattice, noise_sigma)
                           : std::numeric_limits<double>::infinity();
  r.trials = trials;
  r.errors = errors;
  r.seed = seed;
  finish(r);
  return r;
}

Interval sandwich_bracket(double eps1, double eps2) {
  return {(1.0 - eps1) / (1.0 + eps2), (1.0 + eps1) / (1.0 - eps2)};
}

SandwichResult sandwich_check(const Lattice& lattice, const Shift& shift,
                              const GaussianParams& params,
                              std::int64_t trials, RngSeed seed,
                              const SimOptions& options) {
  SandwichResult out;
  const double s0 = params.sigma0 * params.sigma0;
  const double s = params.sigma * params.sigma;
  out.eps1 = flatness(lattice, s0 / std::sqrt(s0 + s)).epsilon;
  out.eps2 = flatness(lattice, params.sigma0).epsilon;
  if (!(out.eps1 < 1.0) || !(out.eps2 < 1.0)) {
    fail(ErrorCode::kFlatnessTooLarge,
         "flatness factors " + std::to_string(out.eps1) + ", " +
             std::to_string(out.eps2) + " must be < 1");
  }
  const Interval bracket = sandwich_bracket(out.eps1, out.eps2);
  out.lo = bracket.lo;
  out.hi = bracket.hi;

  out.scheme = simulate_error(lattice, shift, params, trials, seed, options);
  out.poltyrev =
      simulate_poltyrev(lattice, params.sigma_tilde, trials, seed, options);
  if (out.scheme.errors < kMinSandwichErrors ||
      out.poltyrev.errors < kMinSandwichErrors) {
    fail(ErrorCode::kInsufficientErrors,
         "sandwich needs >= 50 errors per arm, got " +
             std::to_string(out.scheme.errors) + " and " +
             std::to_string(out.poltyrev.errors));
  }
  out.ratio = out.scheme.p_hat / out.poltyrev.p_hat;
  const Interval cs = wilson_interval(out.scheme.errors, trials, kZ975);
  const Interval cp = wilson_interval(out.poltyrev.errors, trials, kZ975);
  out.ratio_low = cs.lo / cp.hi;
  out.ratio_high = cs.hi / cp.lo;
  out.pass = out.ratio_low <= out.hi && out.ratio_high >= out.lo;
  return out;
}

PoltyrevPoint poltyrev_exponent(double mu, int n) {
  if (!(mu >= 1.0)) fail(ErrorCode::kMuBelowOne, "mu must be >= 1");
  PoltyrevPoint p;
  p.mu = mu;
  p.n = n;
  if (mu <= 2.0) {
    p.exponent = 0.5 * ((mu - 1.0) - std::log(mu));
  } else if (mu <= 4.0) {
    p.exponent = 0.5 * std::log(M_E * mu / 4.0);
  } else {
    p.exponent = mu / 8.0;
  }
  p.bound = std::exp(-n * p.exponent);
  return p;
}

double vnr(const Lattice& lattice, double sigma_tilde) {
  return gsnr(lattice, sigma_tilde) / M_E;
}

double design_volume(double sigma_tilde, double eps_dprime, int n) {
  require_sigma(sigma_tilde, "sigma_tilde");
  if (eps_dprime < 0.0) {
    fail(ErrorCode::kInvalidArgument, "eps_dprime must be >= 0");
  }
  return std::pow(2.0 * M_PI * M_E * sigma_tilde * sigma_tilde *
                      (1.0 + eps_dprime),
                  0.5 * n);
}

Lattice scale_to_volume(const Lattice& lattice, double volume) {
  if (!(volume > 0.0)) fail(ErrorCode::kInvalidArgument, "volume must be > 0");
  return lattice.scaled(
      std::pow(volume / lattice.volume(), 1.0 / lattice.dim()));
}

ConditionReport check_conditions(const Lattice& lattice,
                                 const GaussianParams& params) {
  ConditionReport r;
  const double mu = vnr(lattice, params.sigma_tilde);
  r.vnr_above_one = {mu > 1.0, mu - 1.0};
  const double s0 = params.sigma0 * params.sigma0;
  const double s = params.sigma * params.sigma;
  const double g = gsnr(lattice, s0 / std::sqrt(s0 + s));
  r.flat_at_signal = {g < 1.0, 1.0 - g};
  r.snr_above_e = {s0 > M_E * s, s0 / s - M_E};
  return r;
}

Interval compatible_volume_interval(const GaussianParams& params) {
  const double s0 = params.sigma0 * params.sigma0;
  const double s = params.sigma * params.sigma;
  return {2.0 * M_PI * M_E * params.sigma_tilde * params.sigma_tilde,
          2.0 * M_PI * s0 * s0 / (s0 + s)};
}

RateBudget rate_lower_bound(double snr, double eps, int n, double eps_dprime) {
  if (!(eps < 1.0)) fail(ErrorCode::kFlatnessTooLarge, "eps must be < 1");
  RateBudget b;
  b.n = n;
  b.snr = snr;
  b.eps = eps;
  b.eps_dprime = eps_dprime;
  b.eps_prime = entropy_slack(eps, n);
  b.capacity = 0.5 * std::log1p(snr);
  b.rate_lower = b.capacity - M_PI * eps / (n * (1.0 - eps)) -
                 0.5 * eps_dprime - b.eps_prime;
  return b;
}

RateBudget rate_budget(const Lattice& lattice, const GaussianParams& params,
                       double eps_dprime) {
  const double eps = flatness(lattice, 0.5 * params.sigma0).epsilon;
  if (!(eps < 1.0)) {
    fail(ErrorCode::kFlatnessTooLarge,
         "eps_L(sigma0/2) = " + std::to_string(eps) + " >= 1");
  }
  return rate_lower_bound(params.snr, eps, lattice.dim(), eps_dprime);
}

PowerStats power_stats(const DiscreteGaussianSpec& spec,
                       const GaussianParams& params) {
  const Lattice& lattice = spec.lattice();
  const int n = lattice.dim();
  const double s0 = spec.sigma0();
  PowerStats out;
  const GaussianSum sum = gaussian_lattice_sum(
      lattice, 1.0 / (2.0 * M_PI * s0 * s0), spec.shift().c);
  out.avg_power_per_dim = sum.mean_sq() / n;
  out.truncation_radius = spec.truncation_radius();
  out.sphere_radius = std::sqrt(2.0 * M_PI * n) * s0;
  out.peak_factor = out.sphere_radius * out.sphere_radius / (n * s0 * s0);
  if (spec.kind() == SamplerKind::kTable) {
    out.peak_norm_sq = spec.support().back().embedding.squaredNorm();
  } else {
    try {
      const BallProfile ball(lattice, spec.shift().c, out.truncation_radius);
      out.peak_norm_sq = ball.max_norm_sq(out.truncation_radius);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetExceeded) throw;
      out.peak_norm_sq = out.truncation_radius * out.truncation_radius;
      out.peak_exact = false;
    }
  }
  const double p = out.avg_power_per_dim;
  out.alpha_gap =
      std::abs(params.alpha - p / (p + params.sigma * params.sigma));
  return out;
}

double tune_slack_for_error_rate(const Lattice& lattice, double sigma_tilde,
                                 double rate_lo, double rate_hi,
                                 std::int64_t pilot_trials, RngSeed seed,
                                 const SimOptions& options) {
  const int n = lattice.dim();
  const double target = std::sqrt(rate_lo * rate_hi);
  auto rate_at = [&](double eps_dprime) {
    const Lattice scaled =
        scale_to_volume(lattice, design_volume(sigma_tilde, eps_dprime, n));
    return simulate_poltyrev(scaled, sigma_tilde, pilot_trials, seed, options)
        .p_hat;
  };
  // The error rate falls as the volume grows.
  double lo = 0.0;
  double hi = 1.0;
  while (rate_at(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) fail(ErrorCode::kInvalidArgument, "target rate unreachable");
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double rate = rate_at(mid);
    if (rate >= rate_lo && rate <= rate_hi && std::abs(std::log(rate / target)) < 0.05) {
      return mid;
    }
    if (rate > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lgc
