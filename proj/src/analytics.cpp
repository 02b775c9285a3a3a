// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgc {

namespace {

void require_positive_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail(ErrorCode::kNonpositiveSigma, "sigma must be positive and finite");
  }
}

// Smallest radius >= r_min (to bisection accuracy) whose tail bound is below
// target.
double radius_for_tail(int n, double rho, double a, int moment, double target,
                       double r_min) {
  double hi = std::max(r_min, std::sqrt(n / (2.0 * a))) + rho;
  double lo = r_min;
  int guard = 0;
  while (gaussian_tail_bound(n, rho, hi, a, moment) > target) {
    lo = hi;
    hi *= 1.5;
    if (++guard > 200) {
      fail(ErrorCode::kBudgetExceeded, "no truncation radius meets tolerance");
    }
  }
  for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_tail_bound(n, rho, mid, a, moment) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double estimated_points(int n, double radius, double rho, double volume) {
  return ball_volume(n, radius + rho) / volume + 1.0;
}

struct Plan {
  SumRoute route;
  double radius;
  double estimate;
};

Plan plan_primal(const Lattice& lattice, double tau, const Vector& center,
                 double rel_tol) {
  const int n = lattice.dim();
  const double a = M_PI * tau;
  const double rho = lattice.packing_radius();
  const auto nearest =
      lattice.enumerator().closest(lattice.to_triangular(center));
  const double d0 = std::sqrt(std::max(0.0, nearest.dist_sq));
  const double lower = std::exp(-a * nearest.dist_sq);
  const double mass_r =
      radius_for_tail(n, rho, a, 0, 0.5 * rel_tol * lower, d0);
  const double moment_scale = std::max(nearest.dist_sq, 1.0 / (2.0 * a));
  const double moment_r = radius_for_tail(
      n, rho, a, 1, 0.5 * rel_tol * lower * moment_scale, d0);
  const double r = std::max(mass_r, moment_r);
  return {SumRoute::kPrimal, r,
          estimated_points(n, r, rho, lattice.volume())};
}

Plan plan_dual(const Lattice& dual, double tau, double rel_tol) {
  const int n = dual.dim();
  const double a = M_PI / tau;
  const double rho = dual.packing_radius();
  const double mass_r = radius_for_tail(n, rho, a, 0, 0.25 * rel_tol, 0.0);
  const double moment_r = radius_for_tail(
      n, rho, a, 1, 0.25 * rel_tol * std::max(1.0, 1.0 / (2.0 * a)), 0.0);
  const double r = std::max(mass_r, moment_r);
  return {SumRoute::kDual, r, estimated_points(n, r, rho, dual.volume())};
}

void check_budget(const Plan& plan, const SumOptions& options) {
  if (plan.estimate > static_cast<double>(options.node_cap)) {
    fail(ErrorCode::kBudgetExceeded,
         std::string(route_name(plan.route)) + " enumeration needs ~" +
             std::to_string(plan.estimate) + " points");
  }
}

GaussianSum sum_primal(const Lattice& lattice, double tau, const Vector& center,
                       double radius, const SumOptions& options) {
  const int n = lattice.dim();
  const double a = M_PI * tau;
  const double rho = lattice.packing_radius();
  const Vector z = lattice.to_triangular(center);
  for (int attempt = 0;; ++attempt) {
    long double mass = 0.0L;
    long double moment = 0.0L;
    std::uint64_t points = 0;
    lattice.enumerator().search(
        z, radius * radius,
        [&](std::span<const double>, double d, double r) {
          const long double w = std::exp(-static_cast<long double>(a) * d);
          mass += w;
          moment += w * d;
          ++points;
          return r;
        },
        options.node_cap);
    GaussianSum out;
    out.mass = static_cast<double>(mass);
    out.moment = static_cast<double>(moment);
    out.mass_bound = gaussian_tail_bound(n, rho, radius, a, 0);
    out.moment_bound = gaussian_tail_bound(n, rho, radius, a, 1);
    out.radius = radius;
    out.route = SumRoute::kPrimal;
    out.points = points;
    const bool mass_ok = out.mass_bound <= options.rel_tol * out.mass;
    const bool moment_ok =
        out.moment_bound <= options.rel_tol * std::max(out.moment, 1e-300);
    if ((mass_ok && moment_ok) || attempt >= 8) return out;
    radius *= 1.2;
    check_budget({SumRoute::kPrimal, radius,
                  estimated_points(n, radius, rho, lattice.volume())},
                 options);
  }
}

GaussianSum sum_dual(const Lattice& lattice, const Lattice& dual, double tau,
                     const Vector& center, double radius,
                     const SumOptions& options) {
  const int n = lattice.dim();
  const double a = M_PI / tau;
  const double rho = dual.packing_radius();
  const Vector phase = lattice.solve(center);
  const double scale =
      1.0 / (lattice.volume() * std::pow(tau, 0.5 * n));
  const Vector origin = Vector::Zero(n);
  for (int attempt = 0;; ++attempt) {
    long double excess = 0.0L;
    long double q_sum = 0.0L;
    std::uint64_t points = 0;
    dual.enumerator().search(
        origin, radius * radius,
        [&](std::span<const double> k, double q, double r) {
          ++points;
          bool zero = true;
          long double turns = 0.0L;
          for (int i = 0; i < n; ++i) {
            if (k[i] != 0.0) zero = false;
            turns += static_cast<long double>(k[i]) * phase[i];
          }
          if (zero) return r;
          turns -= std::floor(turns);
          const long double w = std::exp(-static_cast<long double>(a) * q) *
                                std::cos(2.0L * M_PI * turns);
          excess += w;
          q_sum += w * q;
          return r;
        },
        options.node_cap);
    const double tail0 = gaussian_tail_bound(n, rho, radius, a, 0);
    const double tail1 = gaussian_tail_bound(n, rho, radius, a, 1);
    GaussianSum out;
    out.route = SumRoute::kDual;
    out.radius = radius;
    out.points = points;
    out.dual_excess = static_cast<double>(excess);
    out.dual_q_sum = static_cast<double>(q_sum);
    const double d = 1.0 + out.dual_excess;
    const double mean_term = n / (2.0 * M_PI * tau);
    out.mass = scale * d;
    out.moment = scale * (mean_term * d - out.dual_q_sum / (tau * tau));
    out.mass_bound = scale * tail0;
    out.moment_bound = scale * (mean_term * tail0 + tail1 / (tau * tau));
    const bool mass_ok = out.mass_bound <= options.rel_tol * out.mass;
    const bool moment_ok =
        out.moment_bound <= options.rel_tol * std::abs(out.moment);
    if ((mass_ok && moment_ok) || attempt >= 8) return out;
    radius *= 1.2;
    check_budget({SumRoute::kDual, radius,
                  estimated_points(n, radius, rho, dual.volume())},
                 options);
  }
}

}  // namespace

const char* route_name(SumRoute route) {
  switch (route) {
    case SumRoute::kAuto: return "auto";
    case SumRoute::kPrimal: return "primal";
    case SumRoute::kDual: return "dual";
  }
  return "?";
}

double gaussian_tail_bound(int n, double packing_radius, double radius,
                           double a, int moment) {
  const double rho = packing_radius;
  const double h = rho;
  double total = 0.0;
  double previous = 0.0;
  for (int k = 0; k < 10'000'000; ++k) {
    const double r_in = radius + k * h;
    const double r_out = r_in + h;
    const double log_term = n * std::log((r_out + rho) / rho) +
                            2.0 * moment * std::log(r_out) - a * r_in * r_in;
    const double term = std::exp(log_term);
    total += term;
    if (k > 0 && previous > 0.0) {
      // Consecutive term ratios decrease in k, so once one drops below 1 the
      // rest is dominated by a geometric series.
      const double ratio = term / previous;
      if (ratio < 0.5) return total + term * ratio / (1.0 - ratio);
    }
    if (term == 0.0 && k > 0) return total;
    previous = term;
  }
  return std::numeric_limits<double>::infinity();
}

GaussianSum gaussian_lattice_sum(const Lattice& lattice, double tau,
                                 const Vector& center,
                                 const SumOptions& options) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    fail(ErrorCode::kInvalidArgument, "tau must be positive and finite");
  }
  if (center.size() != lattice.dim()) {
    fail(ErrorCode::kDimensionMismatch, "center length mismatch");
  }
  if (lattice.dim() > kMaxDimension) {
    fail(ErrorCode::kDimensionTooLarge, "lattice dimension too large");
  }

  switch (options.route) {
    case SumRoute::kPrimal: {
      if (tau < options.tau_floor) {
        fail(ErrorCode::kBudgetExceeded,
             "tau below primal enumeration floor");
      }
      const Plan plan = plan_primal(lattice, tau, center, options.rel_tol);
      check_budget(plan, options);
      return sum_primal(lattice, tau, center, plan.radius, options);
    }
    case SumRoute::kDual: {
      if (1.0 / tau < options.tau_floor) {
        fail(ErrorCode::kBudgetExceeded, "1/tau below dual enumeration floor");
      }
      const Lattice dual = lattice.dual();
      const Plan plan = plan_dual(dual, tau, options.rel_tol);
      check_budget(plan, options);
      return sum_dual(lattice, dual, tau, center, plan.radius, options);
    }
    case SumRoute::kAuto:
      break;
  }
  const Lattice dual = lattice.dual();
  const Plan primal = plan_primal(lattice, tau, center, options.rel_tol);
  const Plan dual_plan = plan_dual(dual, tau, options.rel_tol);
  if (primal.estimate <= dual_plan.estimate) {
    check_budget(primal, options);
    return sum_primal(lattice, tau, center, primal.radius, options);
  }
  check_budget(dual_plan, options);
  return sum_dual(lattice, dual, tau, center, dual_plan.radius, options);
}

double mean_sq_excess(const GaussianSum& sum, int n, double tau) {
  if (sum.route == SumRoute::kDual) {
    return -sum.dual_q_sum / (tau * tau * (1.0 + sum.dual_excess));
  }
  return sum.mean_sq() - n / (2.0 * M_PI * tau);
}

double log_mass_excess(const GaussianSum& sum, const Lattice& lattice,
                       double tau) {
  if (sum.route == SumRoute::kDual) return std::log1p(sum.dual_excess);
  return std::log(sum.mass) + std::log(lattice.volume()) +
         0.5 * lattice.dim() * std::log(tau);
}

ThetaValue theta(const Lattice& lattice, double tau,
                 const SumOptions& options) {
  const GaussianSum sum =
      gaussian_lattice_sum(lattice, tau, Vector::Zero(lattice.dim()), options);
  return {sum.mass, sum.mass_bound, sum.radius, sum.route};
}

double gaussian_density(double sigma, const Vector& c, const Vector& x) {
  require_positive_sigma(sigma);
  if (c.size() != x.size()) {
    fail(ErrorCode::kDimensionMismatch, "density arguments differ in length");
  }
  const double n = static_cast<double>(x.size());
  return std::exp(-0.5 * n * std::log(2.0 * M_PI * sigma * sigma) -
                  (x - c).squaredNorm() / (2.0 * sigma * sigma));
}

double gsnr(const Lattice& lattice, double sigma) {
  require_positive_sigma(sigma);
  return std::pow(lattice.volume(), 2.0 / lattice.dim()) /
         (2.0 * M_PI * sigma * sigma);
}

FlatnessReport flatness(const Lattice& lattice, double sigma,
                        const SumOptions& options) {
  require_positive_sigma(sigma);
  const int n = lattice.dim();
  const double tau = 1.0 / (2.0 * M_PI * sigma * sigma);
  FlatnessReport report;
  report.sigma = sigma;
  report.gsnr = gsnr(lattice, sigma);
  const GaussianSum sum =
      gaussian_lattice_sum(lattice, tau, Vector::Zero(n), options);
  report.theta = {sum.mass, sum.mass_bound, sum.radius, sum.route};
  if (sum.route == SumRoute::kDual) {
    report.epsilon = sum.dual_excess;
  } else {
    report.epsilon =
        std::exp(0.5 * n * std::log(report.gsnr) + std::log(sum.mass)) - 1.0;
  }
  return report;
}

double flatness_direct(const Lattice& lattice, double sigma,
                       int grid_points_per_dim) {
  require_positive_sigma(sigma);
  const int n = lattice.dim();
  if (n > 4) {
    fail(ErrorCode::kDimensionTooLarge, "flatness_direct supports n <= 4");
  }
  if (grid_points_per_dim < 1) {
    fail(ErrorCode::kInvalidArgument, "grid needs at least one point");
  }
  SumOptions options;
  options.route = SumRoute::kPrimal;
  options.tau_floor = 0.0;
  const double tau = 1.0 / (2.0 * M_PI * sigma * sigma);
  const double density_scale = std::pow(tau, 0.5 * n);
  const double volume = lattice.volume();

  std::vector<int> index(n, 0);
  double worst = 0.0;
  while (true) {
    Vector u(n);
    for (int i = 0; i < n; ++i) {
      u[i] = static_cast<double>(index[i]) / grid_points_per_dim;
    }
    const Vector x = lattice.basis() * u;
    const GaussianSum sum = gaussian_lattice_sum(lattice, tau, x, options);
    worst = std::max(worst, std::abs(volume * density_scale * sum.mass - 1.0));
    int i = 0;
    while (i < n && ++index[i] == grid_points_per_dim) index[i++] = 0;
    if (i == n) break;
  }
  return worst;
}

PartitionCheck partition_sandwich_check(const Lattice& lattice, double sigma,
                                        const Vector& c) {
  require_positive_sigma(sigma);
  const int n = lattice.dim();
  SumOptions options;
  options.route = SumRoute::kPrimal;
  options.tau_floor = 0.0;
  const double tau = 1.0 / (2.0 * M_PI * sigma * sigma);
  const GaussianSum sum = gaussian_lattice_sum(lattice, tau, c, options);
  PartitionCheck out;
  out.value = std::pow(tau, 0.5 * n) * sum.mass;
  out.epsilon = flatness(lattice, sigma).epsilon;
  const double volume = lattice.volume();
  out.lo = (1.0 - out.epsilon) / volume;
  out.hi = (1.0 + out.epsilon) / volume;
  constexpr double kTol = 1e-9;
  const double scaled = out.value * volume;
  out.pass = scaled >= 1.0 - out.epsilon - kTol &&
             scaled <= 1.0 + out.epsilon + kTol;
  return out;
}

namespace {

double half_sigma_flatness(const Lattice& lattice, double sigma0) {
  require_positive_sigma(sigma0);
  const double eps = flatness(lattice, 0.5 * sigma0).epsilon;
  if (!(eps < 1.0)) {
    fail(ErrorCode::kFlatnessTooLarge,
         "eps_L(sigma0/2) = " + std::to_string(eps) + " >= 1");
  }
  return eps;
}

}  // namespace

MomentCheck moment_check(const Lattice& lattice, double sigma0,
                         const Vector& c) {
  MomentCheck out;
  out.epsilon = half_sigma_flatness(lattice, sigma0);
  const int n = lattice.dim();
  const double tau = 1.0 / (2.0 * M_PI * sigma0 * sigma0);
  const GaussianSum sum = gaussian_lattice_sum(lattice, tau, c);
  out.second_moment = sum.mean_sq();
  out.deviation = std::abs(mean_sq_excess(sum, n, tau));
  out.bound =
      2.0 * M_PI * out.epsilon / (1.0 - out.epsilon) * sigma0 * sigma0;
  out.pass = out.deviation <= out.bound + 1e-9;
  return out;
}

double entropy_slack(double eps, int n) {
  return -std::log1p(-eps) / n + M_PI * eps / (n * (1.0 - eps));
}

EntropyReport entropy_check(const Lattice& lattice, double sigma0,
                            const Vector& c) {
  EntropyReport out;
  out.epsilon = half_sigma_flatness(lattice, sigma0);
  const int n = lattice.dim();
  const double tau = 1.0 / (2.0 * M_PI * sigma0 * sigma0);
  const GaussianSum sum = gaussian_lattice_sum(lattice, tau, c);
  // H = log Z + E|x-c|^2 / (2 sigma0^2); relative to n * reference this is
  // log D + (E|x-c|^2 - n sigma0^2) / (2 sigma0^2).
  const double gap = log_mass_excess(sum, lattice, tau) +
                     mean_sq_excess(sum, n, tau) / (2.0 * sigma0 * sigma0);
  out.reference = std::log(std::sqrt(2.0 * M_PI * M_E) * sigma0) -
                  std::log(lattice.volume()) / n;
  out.entropy_rate = out.reference + gap / n;
  out.deviation = std::abs(gap / n);
  out.epsilon_prime = entropy_slack(out.epsilon, n);
  out.pass = out.deviation <= out.epsilon_prime + 1e-12;
  return out;
}

}  // namespace lgc
