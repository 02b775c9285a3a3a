// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Sampling from the discrete Gaussian D_{L-c, sigma0} restricted to a ball.
//
// Support points are x = B k - c with |x| <= truncation_radius and weights
// proportional to exp(-|x|^2 / (2 sigma0^2)). The mass outside the ball is
// certified below 1e-12.
//
// Two equivalent samplers produce this truncated law:
//   table:     the support is enumerated once and drawn by inverse CDF.
//   rejection: a Klein-style proposal over the triangular factor R, accepted
//              with probability prod Z_i(c_i) / prod Z_i(0), which makes the
//              output exactly D_{L-c}; draws outside the ball are redrawn.
// The table is used whenever the support is small enough to enumerate.

#pragma once

#include <cstdint>
#include <vector>

#include "lgc/analytics.hpp"
#include "lgc/lattice.hpp"
#include "lgc/rng.hpp"

namespace lgc {

struct SupportPoint {
  Coeffs coeffs;
  Vector embedding;  // B k - c
  double probability = 0.0;
};

struct SpecOptions {
  // Largest support enumerated into a table; larger supports use rejection.
  std::uint64_t max_table_points = std::uint64_t{1} << 20;
  double max_deficit = 1e-12;
  std::uint64_t node_cap = kDefaultNodeCap;
};

enum class SamplerKind { kTable, kRejection };

class DiscreteGaussianSpec {
 public:
  const Lattice& lattice() const { return lattice_; }
  double sigma0() const { return sigma0_; }
  const Shift& shift() const { return shift_; }
  double truncation_radius() const { return truncation_radius_; }
  // Certified upper bound on the ideal mass outside the truncation ball.
  double deficit() const { return deficit_; }
  SamplerKind kind() const { return kind_; }
  // Empty unless kind() == kTable. Ordered by norm, then coefficients.
  const std::vector<SupportPoint>& support() const { return support_; }

  // Unnormalized weight of a coset point at squared norm d.
  double weight(double norm_sq) const;

 private:
  friend DiscreteGaussianSpec build_spec(const Lattice&, double, const Shift&,
                                         const SpecOptions&);
  friend class SpecSampler;

  explicit DiscreteGaussianSpec(Lattice lattice)
      : lattice_(std::move(lattice)) {}

  Lattice lattice_;
  double sigma0_ = 1.0;
  Shift shift_;
  double truncation_radius_ = 0.0;
  double deficit_ = 0.0;
  SamplerKind kind_ = SamplerKind::kTable;
  std::vector<SupportPoint> support_;
  std::vector<double> cumulative_;
  // Rejection sampler data.
  Vector z_;            // Q^T c
  Vector level_sigma_;  // sigma0 / |r_ii|
  double log_z_max_ = 0.0;
};

// Truncation radius starts at sqrt(2 pi n) sigma0 and grows by 5% until the
// deficit bound drops below options.max_deficit.
DiscreteGaussianSpec build_spec(const Lattice& lattice, double sigma0,
                                const Shift& shift,
                                const SpecOptions& options = {});

// Per-stream sampler state; cheap to construct.
class SpecSampler {
 public:
  SpecSampler(const DiscreteGaussianSpec& spec, RngSeed seed);

  // Writes the coefficients of one draw and returns its embedding B k - c.
  const Vector& draw(Coeffs& coeffs);
  Rng& rng() { return rng_; }

 private:
  const Vector& draw_table(Coeffs& coeffs);
  const Vector& draw_rejection(Coeffs& coeffs);

  const DiscreteGaussianSpec& spec_;
  Rng rng_;
  Vector embedding_;
  std::vector<double> weights_;
};

// count i.i.d. draws; a pure function of (spec, seed).
std::vector<LatticePoint> sample(const DiscreteGaussianSpec& spec,
                                 RngSeed seed, std::int64_t count);

// (1 + eps) / (1 - eps) * 2^{-n}.
double sphere_tail_bound(int n, double eps);

struct TailEventRate {
  double analytic_bound = 0.0;
  double exact_mass = 0.0;
  double epsilon = 0.0;  // eps_L(sigma0)
  double sphere_radius = 0.0;
};

// Mass of D_{L-c, sigma0} outside radius sqrt(2 pi n) sigma0 against the
// analytic bound. Throws kFlatnessTooLarge if eps_L(sigma0) >= 1.
TailEventRate tail_event_rate(const DiscreteGaussianSpec& spec);

}  // namespace lgc
