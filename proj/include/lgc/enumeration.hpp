// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Depth-first sphere enumeration with Schnorr-Euchner (zig-zag) ordering.
//
// Works on an upper-triangular factor R: enumerates integer vectors k with
// ||R k - z||^2 <= radius^2, visiting children of each level in order of
// nondecreasing distance from the projected center, so a level can be
// abandoned as soon as one child falls outside the radius.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "lgc/error.hpp"

namespace lgc {

inline constexpr std::uint64_t kDefaultNodeCap = 100'000'000;

// Relative distance difference under which two candidates count as tied.
inline constexpr double kTieRelTol = 1e-10;

inline double tie_tolerance(double dist_sq) {
  return kTieRelTol * dist_sq + 1e-14;
}

// Lexicographic order on integer coefficient vectors (first index most
// significant).
inline bool lex_less(std::span<const double> a, std::span<const double> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

class SphereEnumerator {
 public:
  SphereEnumerator() = default;
  explicit SphereEnumerator(Eigen::MatrixXd r_upper)
      : r_(std::move(r_upper)), diag_sq_(r_.rows()) {
    for (Eigen::Index i = 0; i < r_.rows(); ++i) {
      diag_sq_[i] = r_(i, i) * r_(i, i);
    }
  }

  int dim() const { return static_cast<int>(r_.rows()); }
  const Eigen::MatrixXd& r() const { return r_; }

  // Calls leaf(k, dist_sq, radius_sq) for every k in the ball; the callback
  // returns the (possibly shrunk) squared radius used for further pruning.
  // Returns the number of tree nodes visited.
  template <class Leaf>
  std::uint64_t search(const Eigen::VectorXd& z, double radius_sq, Leaf&& leaf,
                       std::uint64_t node_cap = kDefaultNodeCap) const;

  struct Closest {
    std::vector<double> coeffs;
    double dist_sq = std::numeric_limits<double>::infinity();
    bool found = false;
    bool tie = false;
    std::uint64_t nodes = 0;
  };

  // Minimizes ||R k - z||^2 over leaves accepted by `accept(k, dist_sq)`.
  // Ties (within tie_tolerance) go to the lexicographically smallest k.
  template <class Accept>
  Closest closest(const Eigen::VectorXd& z, double radius_sq, Accept&& accept,
                  std::uint64_t node_cap = kDefaultNodeCap) const;

  Closest closest(const Eigen::VectorXd& z,
                  std::uint64_t node_cap = kDefaultNodeCap) const {
    return closest(
        z, std::numeric_limits<double>::infinity(),
        [](std::span<const double>, double) { return true; }, node_cap);
  }

 private:
  Eigen::MatrixXd r_;
  Eigen::VectorXd diag_sq_;
};

template <class Leaf>
std::uint64_t SphereEnumerator::search(const Eigen::VectorXd& z,
                                       double radius_sq, Leaf&& leaf,
                                       std::uint64_t node_cap) const {
  const int n = dim();
  if (n == 0) return 0;
  std::vector<double> center(n), partial(n + 1, 0.0), k(n), dx(n), ddx(n);

  auto start_level = [&](int i) {
    double s = z[i];
    for (int j = i + 1; j < n; ++j) s -= r_(i, j) * k[j];
    center[i] = s / r_(i, i);
    k[i] = std::round(center[i]);
    dx[i] = ddx[i] = (center[i] >= k[i]) ? 1.0 : -1.0;
  };
  auto next_sibling = [&](int i) {
    k[i] += dx[i];
    ddx[i] = -ddx[i];
    dx[i] = ddx[i] - dx[i];
  };

  std::uint64_t nodes = 0;
  int i = n - 1;
  start_level(i);
  while (true) {
    const double diff = k[i] - center[i];
    const double d = partial[i + 1] + diag_sq_[i] * diff * diff;
    if (++nodes > node_cap) {
      fail(ErrorCode::kBudgetExceeded,
           "enumeration exceeded node cap of " + std::to_string(node_cap));
    }
    if (d <= radius_sq) {
      if (i == 0) {
        radius_sq = leaf(std::span<const double>(k), d, radius_sq);
        next_sibling(0);
      } else {
        partial[i] = d;
        --i;
        start_level(i);
      }
    } else {
      ++i;
      if (i == n) break;
      next_sibling(i);
    }
  }
  return nodes;
}

template <class Accept>
SphereEnumerator::Closest SphereEnumerator::closest(
    const Eigen::VectorXd& z, double radius_sq, Accept&& accept,
    std::uint64_t node_cap) const {
  Closest best;
  best.coeffs.assign(dim(), 0.0);
  auto leaf = [&](std::span<const double> k, double d, double r) {
    if (!accept(k, d)) return r;
    if (!best.found || d < best.dist_sq - tie_tolerance(best.dist_sq)) {
      best.coeffs.assign(k.begin(), k.end());
      best.dist_sq = d;
      best.found = true;
      best.tie = false;
    } else if (d <= best.dist_sq + tie_tolerance(best.dist_sq)) {
      best.tie = true;
      if (lex_less(k, best.coeffs)) {
        best.coeffs.assign(k.begin(), k.end());
        best.dist_sq = std::min(best.dist_sq, d);
      }
    }
    return std::min(r, best.dist_sq + 2.0 * tie_tolerance(best.dist_sq));
  };
  best.nodes = search(z, radius_sq, leaf, node_cap);
  return best;
}

}  // namespace lgc
