// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Lattice Gaussian coding over the AWGN channel.
//
// Codewords x are drawn from D_{L-c, sigma0}; the receiver sees y = x + w
// with w ~ N(0, sigma^2 I) and decodes x_hat = Q_{L-c}(alpha y) with
// alpha = sigma0^2 / (sigma0^2 + sigma^2). Its error rate is compared with
// plain lattice decoding at the effective noise level
// sigma_tilde = sigma0 sigma / sqrt(sigma0^2 + sigma^2).

#pragma once

#include <cstdint>
#include <string>

#include "lgc/lattice.hpp"
#include "lgc/rng.hpp"
#include "lgc/sampler.hpp"

namespace lgc {

struct GaussianParams {
  double sigma0 = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double sigma_tilde = 0.0;
  double snr = 0.0;
  double power = 0.0;  // sigma0^2, the asymptotic power per dimension
};

GaussianParams make_params(double sigma0, double sigma);

// x + sigma * N(0, I); sigma = 0 returns x.
Vector awgn(const Vector& x, double sigma, RngSeed seed);

// coset_decode(L, c, alpha y).
LatticePoint mmse_decode(const Lattice& lattice, const Shift& shift,
                         const GaussianParams& params, const Vector& y,
                         const DecodeOptions& options = {});

struct MapResult {
  LatticePoint point;
  // |y - x|^2 / (2 sigma^2) + |x|^2 / (2 sigma0^2) at the returned x.
  double metric = 0.0;
  // Another support point scored within the relative tie tolerance.
  bool tie = false;
};

// Maximum a posteriori decoding over the truncated support of a spec.
//
// The posterior metric is a least-squares problem in k,
//   |[B/sigma; B/sigma0] k - [(y + c)/sigma; c/sigma0]|^2,
// solved exactly by sphere enumeration on the QR factor of the stacked
// 2n x n matrix, with leaves restricted to |B k - c| <= truncation radius.
// It never forms alpha or scales y, so it serves as an independent check of
// mmse_decode.
class MapDecoder {
 public:
  MapDecoder(const DiscreteGaussianSpec& spec, const GaussianParams& params);
  MapResult decode(const Vector& y,
                   std::uint64_t node_cap = kDefaultNodeCap) const;

 private:
  const DiscreteGaussianSpec& spec_;
  GaussianParams params_;
  Matrix q_;  // 2n x n
  SphereEnumerator enumerator_;
};

LatticePoint map_decode(const DiscreteGaussianSpec& spec,
                        const GaussianParams& params, const Vector& y);

struct SimOptions {
  int threads = 1;
  // Trials per shard; shard b draws codewords from stream 2b and noise from
  // stream 2b + 1.
  std::int64_t block = std::int64_t{1} << 14;
};

struct SimResult {
  std::string lattice;
  std::string label;
  int n = 0;
  double sigma0 = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;
  double sigma_tilde = 0.0;
  double volume = 0.0;
  double mu = 0.0;
  std::int64_t trials = 0;
  std::int64_t errors = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  RngSeed seed;
};

inline constexpr double kZ95 = 1.959963984540054;
// Two-sided 97.5% quantile, used per arm so a ratio of two intervals keeps
// 95% joint coverage.
inline constexpr double kZ975 = 2.241402727604947;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

Interval wilson_interval(std::int64_t errors, std::int64_t trials,
                         double z = kZ95);

SimResult simulate_error(const DiscreteGaussianSpec& spec,
                         const GaussianParams& params, std::int64_t trials,
                         RngSeed seed, const SimOptions& options = {});
SimResult simulate_error(const Lattice& lattice, const Shift& shift,
                         const GaussianParams& params, std::int64_t trials,
                         RngSeed seed, const SimOptions& options = {});

// Sends the zero point of L through noise of deviation noise_sigma and
// counts Voronoi-cell escapes. Noise normals come from the same streams as
// simulate_error, so the two estimates are positively correlated.
SimResult simulate_poltyrev(const Lattice& lattice, double noise_sigma,
                            std::int64_t trials, RngSeed seed,
                            const SimOptions& options = {});

struct SandwichResult {
  double ratio = 0.0;
  double ratio_low = 0.0;
  double ratio_high = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double eps1 = 0.0;  // eps_L(sigma0^2 / sqrt(sigma0^2 + sigma^2))
  double eps2 = 0.0;  // eps_L(sigma0)
  bool pass = false;
  SimResult scheme;
  SimResult poltyrev;
};

inline constexpr std::int64_t kMinSandwichErrors = 50;

// [(1 - eps1)/(1 + eps2), (1 + eps1)/(1 - eps2)].
Interval sandwich_bracket(double eps1, double eps2);

SandwichResult sandwich_check(const Lattice& lattice, const Shift& shift,
                              const GaussianParams& params,
                              std::int64_t trials, RngSeed seed,
                              const SimOptions& options = {});

struct PoltyrevPoint {
  double mu = 0.0;
  double exponent = 0.0;
  int n = 1;
  double bound = 1.0;  // exp(-n exponent)
};

PoltyrevPoint poltyrev_exponent(double mu, int n = 1);

// gsnr(L, sigma_tilde) / e.
double vnr(const Lattice& lattice, double sigma_tilde);

// (2 pi e sigma_tilde^2 (1 + eps_dprime))^{n/2}.
double design_volume(double sigma_tilde, double eps_dprime, int n);

// The same lattice scaled to the given volume.
Lattice scale_to_volume(const Lattice& lattice, double volume);

struct Condition {
  bool holds = false;
  double margin = 0.0;
};

struct ConditionReport {
  Condition vnr_above_one;    // V^{2/n} > 2 pi e sigma_tilde^2
  Condition flat_at_signal;   // gsnr(L, sigma0^2/sqrt(sigma0^2+sigma^2)) < 1
  Condition snr_above_e;      // sigma0^2 > e sigma^2
};

ConditionReport check_conditions(const Lattice& lattice,
                                 const GaussianParams& params);

// The V^{2/n} values meeting both volume conditions:
// (2 pi e sigma_tilde^2, 2 pi sigma0^4 / (sigma0^2 + sigma^2)).
Interval compatible_volume_interval(const GaussianParams& params);

struct RateBudget {
  int n = 0;
  double snr = 0.0;
  double eps = 0.0;
  double eps_prime = 0.0;
  double eps_dprime = 0.0;
  double capacity = 0.0;  // 0.5 log(1 + snr), nats
  double rate_lower = 0.0;
};

// Closed form with eps' = entropy_slack(eps, n).
RateBudget rate_lower_bound(double snr, double eps, int n, double eps_dprime);

// eps = eps_L(sigma0 / 2); throws kFlatnessTooLarge if eps >= 1.
RateBudget rate_budget(const Lattice& lattice, const GaussianParams& params,
                       double eps_dprime);

struct PowerStats {
  double avg_power_per_dim = 0.0;
  double peak_norm_sq = 0.0;
  // False when the support was too large to scan; peak_norm_sq then holds
  // the truncation radius squared, an upper bound.
  bool peak_exact = true;
  double sphere_radius = 0.0;     // sqrt(2 pi n) sigma0
  double truncation_radius = 0.0;
  // sphere_radius^2 / (n sigma0^2), i.e. 2 pi: the peak power of the sphere
  // relative to the average power.
  double peak_factor = 0.0;
  // |alpha - P/(P + sigma^2)| with P the exact average power per dimension.
  double alpha_gap = 0.0;
};

PowerStats power_stats(const DiscreteGaussianSpec& spec,
                       const GaussianParams& params);

// Bisects eps_dprime so that the pilot Poltyrev error rate of L scaled to
// design_volume(sigma_tilde, eps_dprime, n) lands near the geometric mean
// of [rate_lo, rate_hi].
double tune_slack_for_error_rate(const Lattice& lattice, double sigma_tilde,
                                 double rate_lo, double rate_hi,
                                 std::int64_t pilot_trials, RngSeed seed,
                                 const SimOptions& options = {});

}  // namespace lgc
