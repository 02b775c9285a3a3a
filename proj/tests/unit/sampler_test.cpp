// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include <map>

#include "doctest.h"
#include "lgc/radial.hpp"
#include "lgc/sampler.hpp"
#include "oracles.hpp"
#include "stats.hpp"

using namespace lgc;

namespace {

SpecOptions rejection_only() {
  SpecOptions o;
  o.max_table_points = 0;
  return o;
}

// Weight of each integer norm |k|^2 for k in Z^n, by convolving the 1-D
// weights. Entry m is sum over |k|^2 = m of exp(-m / (2 s^2)).
std::vector<long double> zn_norm_weights(int n, double sigma0, int max_norm) {
  std::vector<long double> one(max_norm + 1, 0.0L);
  for (int k = 0; k * k <= max_norm; ++k) {
    one[k * k] += (k == 0 ? 1.0L : 2.0L) *
                  std::exp(-static_cast<long double>(k * k) / (2 * sigma0 * sigma0));
  }
  std::vector<long double> acc(max_norm + 1, 0.0L);
  acc[0] = 1.0L;
  for (int d = 0; d < n; ++d) {
    std::vector<long double> next(max_norm + 1, 0.0L);
    for (int a = 0; a <= max_norm; ++a) {
      if (acc[a] == 0.0L) continue;
      for (int b = 0; a + b <= max_norm; ++b) next[a + b] += acc[a] * one[b];
    }
    acc.swap(next);
  }
  return acc;
}

}  // namespace

TEST_CASE("build_spec on Z") {
  const Lattice z1 = standard_lattice("Z1");
  const auto spec = build_spec(z1, 1.0, Shift::zero(1));
  CHECK(spec.kind() == SamplerKind::kTable);
  const double z = testing::sum_over_integers(
      [](double k) { return std::exp(-k * k / 2.0); });
  const auto& support = spec.support();
  REQUIRE(!support.empty());
  CHECK(support[0].coeffs == Coeffs{0});
  CHECK(support[0].probability == doctest::Approx(1.0 / z).epsilon(1e-12));
  CHECK(support[0].probability == doctest::Approx(0.3989427).epsilon(1e-6));
  CHECK(spec.truncation_radius() >= std::sqrt(2 * M_PI));
  CHECK(spec.deficit() < 1e-12);

  long double sum = 0.0L;
  for (const auto& p : support) sum += p.probability;
  CHECK(static_cast<double>(sum) >= 1.0 - 1e-12);
  CHECK(static_cast<double>(sum) <= 1.0 + 1e-15);

  CHECK_THROWS_AS(build_spec(z1, 0.0, Shift::zero(1)), Error);
  CHECK_THROWS_AS(build_spec(z1, -1.0, Shift::zero(1)), Error);
}

TEST_CASE("support symmetry and the ratio law") {
  const auto spec = build_spec(standard_lattice("Z4"), 1.0, Shift::zero(4));
  std::map<Coeffs, double> prob;
  for (const auto& p : spec.support()) prob[p.coeffs] = p.probability;
  for (const auto& [k, pk] : prob) {
    Coeffs neg(k);
    for (auto& v : neg) v = -v;
    REQUIRE(prob.count(neg) == 1);
    CHECK(prob[neg] == pk);
  }

  const auto shifted =
      build_spec(standard_lattice("Z1"), 1.0, Shift{Vector::Constant(1, 0.5)});
  std::map<std::int64_t, double> p1;
  for (const auto& p : shifted.support()) p1[p.coeffs[0]] = p.probability;
  // Coset points -0.5 (k = 0) and 0.5 (k = 1).
  CHECK(p1.at(0) == doctest::Approx(p1.at(1)).epsilon(1e-15));

  const auto d4 = build_spec(standard_lattice("D4"), 0.7,
                             Shift{Vector::Constant(4, 0.3)});
  REQUIRE(d4.kind() == SamplerKind::kTable);
  const auto& s = d4.support();
  for (std::size_t i = 1; i < s.size(); i += 37) {
    const double expect =
        std::exp((s[0].embedding.squaredNorm() - s[i].embedding.squaredNorm()) /
                 (2 * 0.49));
    CHECK(s[i].probability / s[0].probability ==
          doctest::Approx(expect).epsilon(1e-10));
    CHECK(s[i].embedding.norm() <= d4.truncation_radius());
  }
}

TEST_CASE("table draws: frequency, goodness of fit, determinism") {
  const auto spec = build_spec(standard_lattice("Z1"), 1.0, Shift::zero(1));
  const std::int64_t draws = 100000;
  const auto points = sample(spec, {7, 0}, draws);
  std::map<std::int64_t, std::int64_t> counts;
  for (const auto& p : points) ++counts[p.coeffs[0]];
  CHECK(std::abs(counts[0] / static_cast<double>(draws) - 0.3989) < 0.005);

  std::vector<double> probs;
  std::vector<std::int64_t> observed;
  for (const auto& p : spec.support()) {
    probs.push_back(p.probability);
    observed.push_back(counts[p.coeffs[0]]);
  }
  CHECK(testing::chi_square_pvalue(probs, observed, draws) > 0.001);

  const auto again = sample(spec, {7, 0}, draws);
  bool same = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    same = same && points[i].coeffs == again[i].coeffs;
  }
  CHECK(same);
  const auto other = sample(spec, {7, 1}, 1000);
  int differ = 0;
  for (std::size_t i = 0; i < other.size(); ++i) {
    differ += other[i].coeffs != points[i].coeffs;
  }
  CHECK(differ > 100);
  CHECK_THROWS_AS(sample(spec, {7, 0}, 0), Error);
}

TEST_CASE("rejection sampler matches the exact table") {
  for (const char* name : {"Z1", "A2", "D4"}) {
    const Lattice lattice = standard_lattice(name);
    Vector c = Vector::Zero(lattice.dim());
    c[0] = 0.3;
    const auto table = build_spec(lattice, 0.8, Shift{c});
    const auto rej = build_spec(lattice, 0.8, Shift{c}, rejection_only());
    REQUIRE(table.kind() == SamplerKind::kTable);
    REQUIRE(rej.kind() == SamplerKind::kRejection);
    std::map<Coeffs, std::size_t> index;
    std::vector<double> probs;
    for (const auto& p : table.support()) {
      index[p.coeffs] = probs.size();
      probs.push_back(p.probability);
    }
    const std::int64_t draws = 100000;
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (const auto& p : sample(rej, {11, 3}, draws)) {
      auto it = index.find(p.coeffs);
      REQUIRE(it != index.end());
      ++counts[it->second];
    }
    CHECK(testing::chi_square_pvalue(probs, counts, draws) > 0.001);
  }
}

TEST_CASE("rejection sampler second moment on Z^8 and E8") {
  // Z^8 at sigma0 = 3: 10^6 draws against the exact mean and variance of
  // |x|^2, both from the 1-D factorization.
  const double s2 = 9.0;
  auto w = [&](double k) { return std::exp(-k * k / (2 * s2)); };
  const double z = testing::sum_over_integers(w);
  const double m2 = testing::sum_over_integers([&](double k) { return k * k * w(k); }) / z;
  const double m4 = testing::sum_over_integers([&](double k) { return k * k * k * k * w(k); }) / z;
  const double mean = 8 * m2;
  const double sd = std::sqrt(8 * (m4 - m2 * m2));

  const auto spec = build_spec(standard_lattice("Z8"), 3.0, Shift::zero(8));
  CHECK(spec.kind() == SamplerKind::kRejection);
  const std::int64_t draws = 1000000;
  SpecSampler sampler(spec, {5, 0});
  Coeffs k;
  double total = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) total += sampler.draw(k).squaredNorm();
  const double emp = total / draws;
  CHECK(std::abs(emp - mean) < 4 * sd / std::sqrt(static_cast<double>(draws)));
  // Moment bound 2 pi eps/(1 - eps) sigma0^2 around n sigma0^2, plus noise.
  const MomentCheck mc = moment_check(standard_lattice("Z8"), 3.0, Vector::Zero(8));
  CHECK(std::abs(emp - 72.0) <=
        mc.bound * 8 + 4 * sd / std::sqrt(static_cast<double>(draws)));

  const auto e8 = build_spec(standard_lattice("E8"), 3.0, Shift::zero(8));
  CHECK(e8.kind() == SamplerKind::kRejection);
  SpecSampler s8(e8, {5, 1});
  double t8 = 0.0;
  for (int i = 0; i < 200000; ++i) t8 += s8.draw(k).squaredNorm();
  // E8 is very flat at sigma0 = 3, so E|x|^2 = 8 sigma0^2 to ~1e-30; the
  // spread of |x|^2 is close to the continuous value sqrt(2 n) sigma0^2.
  CHECK(std::abs(t8 / 200000 - 72.0) < 4 * std::sqrt(16.0) * 9.0 / std::sqrt(200000.0));
}

TEST_CASE("sphere tail bound") {
  CHECK(sphere_tail_bound(8, 0.1) == doctest::Approx(0.0047743).epsilon(1e-5));
  CHECK(std::abs(sphere_tail_bound(8, 0.1) - 0.0047743) < 1e-7);
  CHECK(sphere_tail_bound(1, 0.0) == 0.5);
}

TEST_CASE("tail_event_rate on Z") {
  const auto spec = build_spec(standard_lattice("Z1"), 1.0, Shift::zero(1));
  const TailEventRate t = tail_event_rate(spec);
  const double z = testing::sum_over_integers(
      [](double k) { return std::exp(-k * k / 2.0); });
  const double outside = testing::sum_over_integers([](double k) {
    return std::abs(k) >= 3 ? std::exp(-k * k / 2.0) : 0.0;
  });
  CHECK(t.exact_mass == doctest::Approx(outside / z).epsilon(1e-10));
  CHECK(t.exact_mass == doctest::Approx(0.0091).epsilon(0.01));
  CHECK(t.analytic_bound == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(t.exact_mass < t.analytic_bound);
  CHECK(t.sphere_radius == doctest::Approx(std::sqrt(2 * M_PI)));
}

TEST_CASE("tail_event_rate on Z^8 against a norm convolution") {
  for (double sigma0 : {1.5, 2.0, 3.0}) {
    const auto spec = build_spec(standard_lattice("Z8"), sigma0, Shift::zero(8));
    const TailEventRate t = tail_event_rate(spec);
    const double r2 = 16 * M_PI * sigma0 * sigma0;
    const auto weights = zn_norm_weights(8, sigma0, static_cast<int>(r2 * 4));
    long double inside = 0.0L, all = 0.0L;
    for (std::size_t m = 0; m < weights.size(); ++m) {
      all += weights[m];
      if (static_cast<double>(m) <= r2) inside += weights[m];
    }
    const double expect = static_cast<double>(1.0L - inside / all);
    CHECK(t.exact_mass == doctest::Approx(expect).epsilon(1e-4));
    CHECK(t.exact_mass < t.analytic_bound);
    CHECK(t.exact_mass > 0.0);
  }
}

TEST_CASE("tail_event_rate needs a flat lattice") {
  const auto spec = build_spec(standard_lattice("Z2"), 0.2, Shift::zero(2));
  CHECK_THROWS_AS(tail_event_rate(spec), Error);
}

TEST_CASE("BallProfile splits orthogonal blocks") {
  const Lattice z4 = standard_lattice("Z4");
  const BallProfile split(z4, Vector::Zero(4), 3.0);
  CHECK(split.groups() == 2);
  CHECK(split.max_norm_sq(3.0) == doctest::Approx(9.0));
  CHECK(split.max_norm_sq(2.9) == doctest::Approx(8.0));
  // Count of Z^4 points with |k|^2 <= 9 at a = 0.
  int count = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) count += a * a + b * b + c * c + d * d <= 9;
  CHECK(split.gaussian_mass(0.0, 3.0) == doctest::Approx(count));
  const BallProfile whole(standard_lattice("D4"), Vector::Zero(4), 3.0);
  CHECK(whole.groups() == 1);
}
