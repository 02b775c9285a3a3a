// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lgc {

namespace {

// Connected components of the graph with an edge wherever two basis
// vectors are not orthogonal.
std::vector<std::vector<int>> orthogonal_blocks(const Matrix& gram) {
  const int n = static_cast<int>(gram.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double scale = std::sqrt(gram(i, i) * gram(j, j));
      if (std::abs(gram(i, j)) > 1e-12 * scale) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

// Squared norms of B_G k - P_G c for the sublattice spanned by `columns`.
std::vector<double> group_norms(const Lattice& lattice, const Vector& c,
                                const std::vector<int>& columns, double radius,
                                std::uint64_t max_points) {
  const int n = lattice.dim();
  const int m = static_cast<int>(columns.size());
  Matrix sub(n, m);
  for (int j = 0; j < m; ++j) sub.col(j) = lattice.basis().col(columns[j]);
  Eigen::HouseholderQR<Matrix> qr(sub);
  const Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const Vector z = (qr.householderQ().transpose() * c).head(m);
  const double sub_volume = std::abs(r.diagonal().prod());
  const double estimate = ball_volume(m, radius) / sub_volume;
  if (estimate > static_cast<double>(max_points)) {
    fail(ErrorCode::kBudgetExceeded,
         "ball holds ~" + std::to_string(estimate) + " points");
  }
  std::vector<double> norms;
  SphereEnumerator(r).search(
      z, radius * radius,
      [&](std::span<const double>, double d, double rr) {
        norms.push_back(d);
        if (norms.size() > 2 * max_points) {
          fail(ErrorCode::kBudgetExceeded, "ball point budget exceeded");
        }
        return rr;
      },
      kDefaultNodeCap * 10);
  std::sort(norms.begin(), norms.end());
  return norms;
}

}  // namespace

BallProfile::BallProfile(const Lattice& lattice, const Vector& c,
                         double radius, std::uint64_t max_points)
    : radius_(radius) {
  if (c.size() != lattice.dim()) {
    fail(ErrorCode::kDimensionMismatch, "center length mismatch");
  }
  const auto blocks = orthogonal_blocks(lattice.gram());
  if (blocks.size() == 1) {
    std::vector<int> all(lattice.dim());
    std::iota(all.begin(), all.end(), 0);
    first_ = group_norms(lattice, c, all, radius, max_points);
    second_ = {0.0};
    return;
  }
  // Greedy balance by dimension, largest blocks first.
  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return blocks[a].size() > blocks[b].size();
  });
  std::vector<int> g1, g2;
  for (auto b : order) {
    auto& target = g1.size() <= g2.size() ? g1 : g2;
    target.insert(target.end(), blocks[b].begin(), blocks[b].end());
  }
  std::sort(g1.begin(), g1.end());
  std::sort(g2.begin(), g2.end());
  split_ = true;
  first_ = group_norms(lattice, c, g1, radius, max_points);
  second_ = group_norms(lattice, c, g2, radius, max_points);
}

double BallProfile::gaussian_mass(double a, double r) const {
  const double r2 = r * r;
  std::vector<long double> prefix(second_.size() + 1, 0.0L);
  for (std::size_t i = 0; i < second_.size(); ++i) {
    prefix[i + 1] = prefix[i] + std::exp(-static_cast<long double>(a) * second_[i]);
  }
  long double total = 0.0L;
  // first_ ascending, so the admissible prefix of second_ only shrinks.
  std::size_t limit = second_.size();
  for (double d : first_) {
    if (d > r2) break;
    while (limit > 0 && second_[limit - 1] > r2 - d) --limit;
    total += std::exp(-static_cast<long double>(a) * d) * prefix[limit];
  }
  return static_cast<double>(total);
}

double BallProfile::max_norm_sq(double r) const {
  const double r2 = r * r;
  double best = -1.0;
  std::size_t limit = second_.size();
  for (double d : first_) {
    if (d > r2) break;
    while (limit > 0 && second_[limit - 1] > r2 - d) --limit;
    if (limit > 0) best = std::max(best, d + second_[limit - 1]);
  }
  return best;
}

}  // namespace lgc
