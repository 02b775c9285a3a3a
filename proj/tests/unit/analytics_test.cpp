// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "doctest.h"
#include "lgc/analytics.hpp"
#include "oracles.hpp"

using namespace lgc;

namespace {

SumOptions primal_only() {
  SumOptions o;
  o.route = SumRoute::kPrimal;
  return o;
}

SumOptions dual_only() {
  SumOptions o;
  o.route = SumRoute::kDual;
  return o;
}

}  // namespace

TEST_CASE("gaussian_density") {
  CHECK(gaussian_density(1.0, Vector::Zero(1), Vector::Zero(1)) ==
        doctest::Approx(0.3989423).epsilon(1e-7));
  Vector x(2);
  x << 1.0, 1.0;
  CHECK(gaussian_density(2.0, Vector::Zero(2), x) ==
        doctest::Approx(std::exp(-0.25) / (8.0 * M_PI)).epsilon(1e-12));
  CHECK(gaussian_density(2.0, Vector::Zero(2), x) ==
        doctest::Approx(0.0309875).epsilon(1e-6));
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 20; ++t) {
    Vector c(3), y(3);
    for (int i = 0; i < 3; ++i) {
      c[i] = nd(gen);
      y[i] = nd(gen);
    }
    CHECK(gaussian_density(0.7, c, y) ==
          doctest::Approx(gaussian_density(0.7, y, c)));
  }
  CHECK_THROWS_AS(gaussian_density(0.0, Vector::Zero(1), Vector::Zero(1)),
                  Error);
}

TEST_CASE("tail bound dominates the true tail") {
  // Z^2, a = 1, radius 3.
  double actual = 0.0;
  for (int i = -40; i <= 40; ++i) {
    for (int j = -40; j <= 40; ++j) {
      const double r2 = i * i + j * j;
      if (r2 > 9.0) actual += std::exp(-r2);
    }
  }
  const double bound = gaussian_tail_bound(2, 0.5, 3.0, 1.0, 0);
  CHECK(bound >= actual);
  CHECK(bound < 1e-2);
  CHECK(gaussian_tail_bound(2, 0.5, 3.0, 1.0, 1) >= 9.0 * actual);
}

TEST_CASE("theta of Z and Z^2") {
  const ThetaValue t1 = theta(standard_lattice("Z1"), 1.0, primal_only());
  CHECK(t1.value == doctest::Approx(testing::theta_z(1.0)).epsilon(1e-14));
  CHECK(t1.value == doctest::Approx(1.0864348).epsilon(1e-7));
  CHECK(t1.truncation_bound < 1e-12 * t1.value);

  const ThetaValue t2 = theta(standard_lattice("Z2"), 1.0);
  CHECK(t2.value == doctest::Approx(std::pow(testing::theta_z(1.0), 2))
                        .epsilon(1e-12));
  CHECK(t2.value == doctest::Approx(1.1803406).epsilon(1e-7));

  for (double tau : {50.0, 100.0}) {
    CHECK(std::abs(theta(standard_lattice("Z8"), tau).value - 1.0) < 1e-12);
  }
}

TEST_CASE("Poisson duality on Z with primal sums only") {
  const Lattice z1 = standard_lattice("Z1");
  for (double tau : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double lhs = theta(z1, tau, primal_only()).value;
    const double rhs = theta(z1, 1.0 / tau, primal_only()).value / std::sqrt(tau);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);
  }
}

TEST_CASE("theta product rule") {
  for (double tau : {0.5, 1.0, 2.0}) {
    const double base = theta(standard_lattice("Z1"), tau, primal_only()).value;
    for (int n : {2, 4, 8}) {
      const double got =
          theta(standard_lattice(StandardName::kZn, n), tau, primal_only()).value;
      CHECK(std::abs(got - std::pow(base, n)) <= 1e-10 * got);
    }
  }
}

TEST_CASE("primal and dual routes agree") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"E8", "D4", "A2"}) {
    const Lattice lattice = standard_lattice(name);
    for (double tau : {0.6, 1.0, 1.7}) {
      Vector c(lattice.dim());
      for (int i = 0; i < lattice.dim(); ++i) c[i] = u(gen);
      const GaussianSum p = gaussian_lattice_sum(lattice, tau, c, primal_only());
      const GaussianSum d = gaussian_lattice_sum(lattice, tau, c, dual_only());
      CHECK(p.route == SumRoute::kPrimal);
      CHECK(d.route == SumRoute::kDual);
      CHECK(std::abs(p.mass - d.mass) <= 1e-11 * p.mass);
      CHECK(std::abs(p.moment - d.moment) <= 1e-10 * p.moment);
      CHECK(p.mass_bound <= 1e-12 * p.mass);
      CHECK(d.mass_bound <= 1e-12 * d.mass);
    }
  }
}

TEST_CASE("primal route refuses tau below the floor") {
  try {
    theta(standard_lattice("Z8"), 1e-4, primal_only());
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
  // The automatic route takes the dual side instead.
  const ThetaValue t = theta(standard_lattice("Z8"), 1e-4);
  CHECK(t.route == SumRoute::kDual);
  CHECK(t.value == doctest::Approx(std::pow(1e-4, -4.0)).epsilon(1e-10));
}

TEST_CASE("gsnr") {
  CHECK(gsnr(standard_lattice("Z3"), 1.0) ==
        doctest::Approx(0.1591549).epsilon(1e-7));
  const Lattice e8 = standard_lattice("E8");
  CHECK(gsnr(e8.scaled(3.0), 3.0 * 0.7) == doctest::Approx(gsnr(e8, 0.7)));
  CHECK(gsnr(standard_lattice("D4"), 0.5) ==
        doctest::Approx(0.9003163).epsilon(1e-7));
  CHECK_THROWS_AS(gsnr(e8, -1.0), Error);
}

TEST_CASE("flatness of Z") {
  const Lattice z1 = standard_lattice("Z1");
  // Dual-side series 2 exp(-2 pi^2 sigma^2) + ...
  const double dual_series =
      2.0 * std::exp(-2.0 * M_PI * M_PI) + 2.0 * std::exp(-8.0 * M_PI * M_PI);
  const FlatnessReport r1 = flatness(z1, 1.0);
  CHECK(r1.epsilon == doctest::Approx(dual_series).epsilon(1e-10));
  CHECK(r1.epsilon == doctest::Approx(5.35e-9).epsilon(1e-3));
  const FlatnessReport r1p = flatness(z1, 1.0, primal_only());
  CHECK(std::abs(r1p.epsilon - dual_series) < 1e-14);

  // Direct evaluation with a 5-term theta.
  const double gamma = 1.0 / (2.0 * M_PI * 0.04);
  const double direct = std::sqrt(gamma) * testing::theta_z(1.0 / (2 * M_PI * 0.04), 5) - 1.0;
  const FlatnessReport r2 = flatness(z1, 0.2);
  CHECK(r2.epsilon == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r2.epsilon == doctest::Approx(0.99473).epsilon(1e-5));
  CHECK(r2.gsnr == doctest::Approx(gamma));

  double previous = std::numeric_limits<double>::infinity();
  for (double sigma : {0.3, 0.5, 0.8, 1.0, 1.5}) {
    const double eps = flatness(z1, sigma).epsilon;
    CHECK(eps < previous);
    CHECK(eps >= 0.0);
    previous = eps;
  }
  // Consistency with the theta value it reports.
  const FlatnessReport r3 = flatness(standard_lattice("E8"), 0.45);
  CHECK(r3.epsilon == doctest::Approx(std::pow(r3.gsnr, 4.0) * r3.theta.value - 1.0)
                          .epsilon(1e-9));
}

TEST_CASE("flatness decreases in sigma") {
  for (const char* name : {"Z8", "D4", "E8", "A2"}) {
    const Lattice lattice = standard_lattice(name);
    double previous = std::numeric_limits<double>::infinity();
    for (double sigma = 0.2; sigma <= 1.2; sigma += 0.1) {
      const double eps = flatness(lattice, sigma).epsilon;
      CHECK(eps < previous);
      previous = eps;
    }
  }
}

TEST_CASE("flatness_direct cross-validates flatness") {
  const Lattice z1 = standard_lattice("Z1");
  CHECK(std::abs(flatness_direct(z1, 0.5, 1001) - flatness(z1, 0.5).epsilon) <
        1e-6);
  const Lattice z2 = standard_lattice("Z2");
  CHECK(std::abs(flatness_direct(z2, 0.4, 201) - flatness(z2, 0.4).epsilon) <
        1e-5);
  CHECK(flatness_direct(z2, 6.0, 21) < 1e-12);
  CHECK_THROWS_AS(flatness_direct(standard_lattice("Z5"), 1.0, 3), Error);
}

TEST_CASE("partition function sandwich") {
  const Lattice z4 = standard_lattice("Z4");
  CHECK(partition_sandwich_check(z4, 1.0, Vector::Zero(4)).pass);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector c(4);
  for (int i = 0; i < 4; ++i) c[i] = u(gen);
  const PartitionCheck shifted = partition_sandwich_check(z4, 1.0, c);
  CHECK(shifted.pass);
  CHECK(shifted.lo <= shifted.value);
  CHECK(shifted.value <= shifted.hi);
  const PartitionCheck flat = partition_sandwich_check(z4, 4.0, c);
  CHECK(std::abs(flat.value * 1.0 - 1.0) < 1e-9);
}

TEST_CASE("moment_check") {
  // Z^8 factorizes: E|x|^2 = 8 E_1 with E_1 summed directly over Z.
  const double s2 = 9.0;
  const double z = testing::sum_over_integers(
      [&](double k) { return std::exp(-k * k / (2 * s2)); });
  const double m = testing::sum_over_integers(
      [&](double k) { return k * k * std::exp(-k * k / (2 * s2)); });
  const MomentCheck r = moment_check(standard_lattice("Z8"), 3.0, Vector::Zero(8));
  CHECK(r.second_moment == doctest::Approx(8.0 * m / z).epsilon(1e-12));
  CHECK(r.second_moment == doctest::Approx(72.0).epsilon(1e-9));
  CHECK(r.pass);

  const MomentCheck r1 =
      moment_check(standard_lattice("Z1"), 2.0, Vector::Constant(1, 0.5));
  const double z1 = testing::sum_over_integers(
      [](double k) { return std::exp(-(k - 0.5) * (k - 0.5) / 8.0); }, 0.5);
  const double m1 = testing::sum_over_integers(
      [](double k) { return (k - 0.5) * (k - 0.5) * std::exp(-(k - 0.5) * (k - 0.5) / 8.0); },
      0.5);
  CHECK(r1.second_moment == doctest::Approx(m1 / z1).epsilon(1e-12));
  CHECK(r1.deviation <= r1.bound + 1e-9);
  CHECK(r1.bound == doctest::Approx(2 * M_PI * r1.epsilon / (1 - r1.epsilon) * 4.0));
  CHECK(r1.pass);

  // Small sigma violates the flatness precondition.
  try {
    moment_check(standard_lattice("Z1"), 0.2, Vector::Zero(1));
    FAIL("expected FlatnessTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFlatnessTooLarge);
  }

  // Deviation shrinks as sigma grows.
  const double d_small = moment_check(standard_lattice("Z1"), 0.6, Vector::Zero(1)).deviation;
  const double d_large = moment_check(standard_lattice("Z1"), 1.2, Vector::Zero(1)).deviation;
  CHECK(d_large < d_small);
}

TEST_CASE("entropy_check") {
  const EntropyReport r = entropy_check(standard_lattice("Z1"), 2.0, Vector::Zero(1));
  const double z = testing::sum_over_integers(
      [](double k) { return std::exp(-k * k / 8.0); });
  const double h = testing::sum_over_integers([&](double k) {
    const double p = std::exp(-k * k / 8.0) / z;
    return p > 0.0 ? -p * std::log(p) : 0.0;
  });
  CHECK(r.entropy_rate == doctest::Approx(h).epsilon(1e-12));
  CHECK(r.entropy_rate == doctest::Approx(2.1121).epsilon(1e-4));
  CHECK(r.reference == doctest::Approx(std::log(std::sqrt(2 * M_PI * M_E) * 2.0)));
  CHECK(r.pass);

  const EntropyReport r4 = entropy_check(standard_lattice("Z4"), 2.0, Vector::Zero(4));
  CHECK(r4.entropy_rate == doctest::Approx(h).epsilon(1e-12));
  CHECK(r4.pass);

  const Lattice two_z = standard_lattice("Z1").scaled(2.0);
  const EntropyReport r2 = entropy_check(two_z, 2.0, Vector::Zero(1));
  CHECK(r.reference - r2.reference == doctest::Approx(std::log(2.0)));

  // Coarse sigma where the slack is visible.
  const EntropyReport coarse = entropy_check(standard_lattice("Z1"), 0.5, Vector::Zero(1));
  CHECK(coarse.epsilon > 0.01);
  CHECK(coarse.pass);
  CHECK(entropy_slack(0.5, 8) == doctest::Approx(-std::log(0.5) / 8 + M_PI * 0.5 / 4.0));
}
