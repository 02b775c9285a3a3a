// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "lgc/radial.hpp"

namespace lgc {

namespace {

// Half-width, in units of s, of the window used for 1-D draws. Mass beyond
// 12 s is below e^{-72} of the total, under double resolution.
constexpr double kWindow = 12.0;

// Fills `weights` with exp(-(k - c)^2 / (2 s^2)) for k = lo, lo+1, ... and
// returns lo. Uses the multiplicative recurrence between neighbours.
std::int64_t window_weights(double s, double c, std::vector<double>& weights) {
  const auto half = static_cast<std::int64_t>(std::ceil(kWindow * s)) + 1;
  const auto mid = static_cast<std::int64_t>(std::round(c));
  const std::int64_t lo = mid - half;
  const std::size_t size = static_cast<std::size_t>(2 * half + 1);
  weights.resize(size);
  const double inv = 1.0 / (2.0 * s * s);
  const double step = std::exp(-2.0 * inv);
  const double off = static_cast<double>(mid) - c;
  weights[half] = std::exp(-off * off * inv);
  // Upward: w(k+1)/w(k) = exp(-(2(k-c)+1) inv).
  double ratio = std::exp(-(2.0 * off + 1.0) * inv);
  for (std::size_t i = half + 1; i < size; ++i) {
    weights[i] = weights[i - 1] * ratio;
    ratio *= step;
  }
  ratio = std::exp((2.0 * off - 1.0) * inv);
  for (std::size_t i = half; i-- > 0;) {
    weights[i] = weights[i + 1] * ratio;
    ratio *= step;
  }
  return lo;
}

}  // namespace

double DiscreteGaussianSpec::weight(double norm_sq) const {
  return std::exp(-norm_sq / (2.0 * sigma0_ * sigma0_));
}

DiscreteGaussianSpec build_spec(const Lattice& lattice, double sigma0,
                                const Shift& shift,
                                const SpecOptions& options) {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    fail(ErrorCode::kNonpositiveSigma, "sigma0 must be positive and finite");
  }
  const int n = lattice.dim();
  if (shift.c.size() != n) {
    fail(ErrorCode::kDimensionMismatch, "shift length mismatch");
  }

  DiscreteGaussianSpec spec(lattice);
  spec.sigma0_ = sigma0;
  spec.shift_ = shift;

  const double a = 1.0 / (2.0 * sigma0 * sigma0);
  const double tau = a / M_PI;
  const double rho = lattice.packing_radius();
  const GaussianSum total = gaussian_lattice_sum(lattice, tau, shift.c);
  const double mass_low = total.mass - total.mass_bound;

  double radius = std::sqrt(2.0 * M_PI * n) * sigma0;
  double tail = gaussian_tail_bound(n, rho, radius, a, 0);
  for (int guard = 0; tail > options.max_deficit * mass_low; ++guard) {
    if (guard > 400) {
      fail(ErrorCode::kBudgetExceeded, "truncation radius does not converge");
    }
    radius *= 1.05;
    tail = gaussian_tail_bound(n, rho, radius, a, 0);
  }
  spec.truncation_radius_ = radius;
  spec.deficit_ = tail / mass_low;

  const double estimate = ball_volume(n, radius) / lattice.volume();
  if (estimate <= static_cast<double>(options.max_table_points)) {
    spec.kind_ = SamplerKind::kTable;
    std::vector<SupportPoint> points;
    lattice.enumerator().search(
        lattice.to_triangular(shift.c), radius * radius,
        [&](std::span<const double> k, double, double r) {
          SupportPoint p;
          p.coeffs.assign(k.begin(), k.end());
          points.push_back(std::move(p));
          return r;
        },
        options.node_cap);
    long double sum = 0.0L;
    for (auto& p : points) {
      p.embedding = lattice.embed(p.coeffs) - shift.c;
      p.probability = spec.weight(p.embedding.squaredNorm());
      sum += p.probability;
    }
    std::sort(points.begin(), points.end(),
              [](const SupportPoint& x, const SupportPoint& y) {
                const double dx = x.embedding.squaredNorm();
                const double dy = y.embedding.squaredNorm();
                if (dx != dy) return dx < dy;
                return x.coeffs < y.coeffs;
              });
    // Normalizing by sum + tail keeps the total in [1 - deficit, 1].
    const long double norm = sum + tail;
    spec.cumulative_.reserve(points.size());
    long double acc = 0.0L;
    for (auto& p : points) {
      acc += p.probability;
      p.probability = static_cast<double>(p.probability / norm);
      spec.cumulative_.push_back(static_cast<double>(acc));
    }
    spec.support_ = std::move(points);
    return spec;
  }

  spec.kind_ = SamplerKind::kRejection;
  spec.z_ = lattice.to_triangular(shift.c);
  const Matrix& r = lattice.enumerator().r();
  spec.level_sigma_.resize(n);
  std::vector<double> weights;
  spec.log_z_max_ = 0.0;
  for (int i = 0; i < n; ++i) {
    spec.level_sigma_[i] = sigma0 / std::abs(r(i, i));
    window_weights(spec.level_sigma_[i], 0.0, weights);
    long double z = 0.0L;
    for (double w : weights) z += w;
    spec.log_z_max_ += std::log(static_cast<double>(z));
  }
  return spec;
}

SpecSampler::SpecSampler(const DiscreteGaussianSpec& spec, RngSeed seed)
    : spec_(spec), rng_(seed), embedding_(spec.lattice().dim()) {}

const Vector& SpecSampler::draw(Coeffs& coeffs) {
  coeffs.resize(spec_.lattice().dim());
  return spec_.kind_ == SamplerKind::kTable ? draw_table(coeffs)
                                            : draw_rejection(coeffs);
}

const Vector& SpecSampler::draw_table(Coeffs& coeffs) {
  const auto& cum = spec_.cumulative_;
  const double u = rng_.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  const SupportPoint& p = spec_.support_[it - cum.begin()];
  coeffs = p.coeffs;
  embedding_ = p.embedding;
  return embedding_;
}

const Vector& SpecSampler::draw_rejection(Coeffs& coeffs) {
  const int n = spec_.lattice().dim();
  const Matrix& r = spec_.lattice().enumerator().r();
  const double limit_sq =
      spec_.truncation_radius_ * spec_.truncation_radius_;
  while (true) {
    double log_z = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      double s = spec_.z_[i];
      for (int j = i + 1; j < n; ++j) s -= r(i, j) * static_cast<double>(coeffs[j]);
      const double center = s / r(i, i);
      const std::int64_t lo =
          window_weights(spec_.level_sigma_[i], center, weights_);
      long double total = 0.0L;
      for (double w : weights_) total += w;
      log_z += std::log(static_cast<double>(total));
      const long double target = rng_.uniform() * total;
      long double acc = 0.0L;
      std::size_t pick = weights_.size() - 1;
      for (std::size_t t = 0; t < weights_.size(); ++t) {
        acc += weights_[t];
        if (acc > target) {
          pick = t;
          break;
        }
      }
      coeffs[i] = lo + static_cast<std::int64_t>(pick);
    }
    const double accept = std::exp(log_z - spec_.log_z_max_);
    if (accept < 1.0 && rng_.uniform() >= accept) continue;
    embedding_ = spec_.lattice().embed(coeffs) - spec_.shift_.c;
    if (embedding_.squaredNorm() <= limit_sq) return embedding_;
  }
}

std::vector<LatticePoint> sample(const DiscreteGaussianSpec& spec,
                                 RngSeed seed, std::int64_t count) {
  if (count < 1) fail(ErrorCode::kInvalidArgument, "count must be >= 1");
  SpecSampler sampler(spec, seed);
  std::vector<LatticePoint> out(static_cast<std::size_t>(count));
  for (auto& p : out) p.embedding = sampler.draw(p.coeffs);
  return out;
}

double sphere_tail_bound(int n, double eps) {
  return (1.0 + eps) / (1.0 - eps) * std::ldexp(1.0, -n);
}

TailEventRate tail_event_rate(const DiscreteGaussianSpec& spec) {
  const Lattice& lattice = spec.lattice();
  const int n = lattice.dim();
  TailEventRate out;
  out.epsilon = flatness(lattice, spec.sigma0()).epsilon;
  if (!(out.epsilon < 1.0)) {
    fail(ErrorCode::kFlatnessTooLarge,
         "eps_L(sigma0) = " + std::to_string(out.epsilon) + " >= 1");
  }
  out.analytic_bound = sphere_tail_bound(n, out.epsilon);
  out.sphere_radius = std::sqrt(2.0 * M_PI * n) * spec.sigma0();
  const double a = 1.0 / (2.0 * spec.sigma0() * spec.sigma0());
  const GaussianSum total =
      gaussian_lattice_sum(lattice, a / M_PI, spec.shift().c);
  const BallProfile ball(lattice, spec.shift().c, out.sphere_radius);
  const double inside = ball.gaussian_mass(a, out.sphere_radius);
  out.exact_mass = std::max(0.0, 1.0 - inside / total.mass);
  return out;
}

}  // namespace lgc
