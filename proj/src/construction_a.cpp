// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/construction_a.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <utility>

namespace lgc {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  // Extended Euclid.
  std::int64_t t = 0, new_t = 1, r = p, new_r = mod(a, p);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return mod(t, p);
}

using Rows = std::vector<std::vector<std::int64_t>>;

// In-place reduced row echelon form mod p; returns pivot columns.
std::vector<int> rref(Rows& rows, std::int64_t p) {
  std::vector<int> pivots;
  const int m = static_cast<int>(rows.size());
  const int n = m == 0 ? 0 : static_cast<int>(rows[0].size());
  int r = 0;
  for (int col = 0; col < n && r < m; ++col) {
    int pivot = -1;
    for (int i = r; i < m; ++i) {
      if (mod(rows[i][col], p) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[r], rows[pivot]);
    const std::int64_t inv = inverse_mod(rows[r][col], p);
    for (auto& v : rows[r]) v = mod(v * inv, p);
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const std::int64_t f = mod(rows[i][col], p);
      if (f == 0) continue;
      for (int j = 0; j < n; ++j) rows[i][j] = mod(rows[i][j] - f * rows[r][j], p);
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

}  // namespace

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

int rank_mod_p(Rows rows, std::int64_t p) {
  return static_cast<int>(rref(rows, p).size());
}

void validate_code(const LinearCode& code) {
  if (!is_prime(code.p)) {
    fail(ErrorCode::kInvalidArgument, "p must be prime");
  }
  // Products of two residues must fit in 64 bits.
  if (code.p > (std::int64_t{1} << 31)) {
    fail(ErrorCode::kInvalidArgument, "p too large");
  }
  if (code.n < 1 || code.n > kMaxDimension || code.k < 1 || code.k > code.n) {
    fail(ErrorCode::kInvalidArgument, "code needs 1 <= k <= n <= 32");
  }
  if (static_cast<int>(code.generator.size()) != code.k) {
    fail(ErrorCode::kInvalidArgument, "generator must have k rows");
  }
  for (const auto& row : code.generator) {
    if (static_cast<int>(row.size()) != code.n) {
      fail(ErrorCode::kInvalidArgument, "generator rows must have length n");
    }
    for (auto v : row) {
      if (v < 0 || v >= code.p) {
        fail(ErrorCode::kInvalidArgument, "generator entries must be in [0, p)");
      }
    }
  }
  if (rank_mod_p(code.generator, code.p) != code.k) {
    fail(ErrorCode::kRankDeficientCode, "generator is rank deficient mod p");
  }
}

Lattice lift(const LinearCode& code, double scale) {
  validate_code(code);
  if (!(scale > 0.0)) fail(ErrorCode::kInvalidArgument, "scale must be > 0");
  Rows rows = code.generator;
  const std::vector<int> pivots = rref(rows, code.p);
  Matrix basis(code.n, code.n);
  int col = 0;
  for (const auto& row : rows) {
    for (int i = 0; i < code.n; ++i) basis(i, col) = static_cast<double>(row[i]);
    ++col;
  }
  for (int j = 0; j < code.n; ++j) {
    if (std::find(pivots.begin(), pivots.end(), j) != pivots.end()) continue;
    basis.col(col).setZero();
    basis(j, col) = static_cast<double>(code.p);
    ++col;
  }
  return Lattice::from_basis(scale * basis,
                             "modp(" + std::to_string(code.p) + "," +
                                 std::to_string(code.n) + "," +
                                 std::to_string(code.k) + ")");
}

bool in_code(const LinearCode& code, const std::vector<std::int64_t>& v) {
  Rows rows = code.generator;
  std::vector<std::int64_t> reduced(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) reduced[i] = mod(v[i], code.p);
  rows.push_back(reduced);
  return rank_mod_p(std::move(rows), code.p) == rank_mod_p(code.generator, code.p);
}

LinearCode random_code(std::int64_t p, int n, int k, RngSeed seed) {
  LinearCode code;
  code.p = p;
  code.n = n;
  code.k = k;
  if (!is_prime(p)) fail(ErrorCode::kInvalidArgument, "p must be prime");
  if (n < 1 || n > kMaxDimension || k < 1 || k > n) {
    fail(ErrorCode::kInvalidArgument, "code needs 1 <= k <= n <= 32");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    code.generator.assign(k, std::vector<std::int64_t>(n));
    for (auto& row : code.generator) {
      for (auto& v : row) v = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p)));
    }
    if (rank_mod_p(code.generator, p) == k) return code;
  }
  fail(ErrorCode::kRandomnessExhausted, "no full-rank generator in 1000 draws");
}

double ensemble_flatness_bound(const Lattice& lattice, double sigma, double delta) {
  if (delta < 0.0) fail(ErrorCode::kInvalidArgument, "delta must be >= 0");
  return (1.0 + delta) * std::pow(gsnr(lattice, sigma), 0.5 * lattice.dim());
}

double scale_for_gsnr(std::int64_t p, int n, int k, double gsnr_target,
                      double sigma) {
  if (!(gsnr_target > 0.0)) fail(ErrorCode::kInvalidArgument, "gsnr must be > 0");
  if (!(sigma > 0.0)) fail(ErrorCode::kNonpositiveSigma, "sigma must be > 0");
  return std::sqrt(gsnr_target * 2.0 * M_PI * sigma * sigma) /
         std::pow(static_cast<double>(p), static_cast<double>(n - k) / n);
}

std::vector<EnsembleEntry> ensemble_search(std::int64_t p, int n, int k,
                                           double scale, double sigma,
                                           int samples, RngSeed seed,
                                           double delta, int threads) {
  if (samples < 1) fail(ErrorCode::kInvalidArgument, "samples must be >= 1");
  std::vector<EnsembleEntry> out(static_cast<std::size_t>(samples));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (int i; (i = next.fetch_add(1)) < samples;) {
        EnsembleEntry& e = out[static_cast<std::size_t>(i)];
        e.sample_index = i;
        e.code = random_code(p, n, k,
                             {seed.master_seed, (seed.stream_index << 32) +
                                                    static_cast<std::uint64_t>(i)});
        e.scale = scale;
        const Lattice lattice = lift(e.code, scale);
        e.flatness = flatness(lattice, sigma);
        e.bound = ensemble_flatness_bound(lattice, sigma, delta);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(samples);
    }
  };
  const int workers = std::clamp(threads, 1, samples);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.flatness.epsilon < b.flatness.epsilon;
  });
  return out;
}

LinearCode read_code(std::istream& in) {
  LinearCode code;
  if (!(in >> code.p >> code.n >> code.k)) {
    fail(ErrorCode::kParse, "code header must be 'p n k'");
  }
  if (code.n < 1 || code.k < 1 || code.k > code.n || code.n > kMaxDimension) {
    fail(ErrorCode::kParse, "code header has invalid n or k");
  }
  code.generator.assign(code.k, std::vector<std::int64_t>(code.n));
  for (auto& row : code.generator) {
    for (auto& v : row) {
      if (!(in >> v)) fail(ErrorCode::kParse, "code body truncated");
    }
  }
  std::string extra;
  if (in >> extra) fail(ErrorCode::kParse, "trailing data after code");
  validate_code(code);
  return code;
}

LinearCode load_code(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "code file not found");
  return read_code(in);
}

void write_code(std::ostream& out, const LinearCode& code) {
  out << code.p << ' ' << code.n << ' ' << code.k << '\n';
  for (const auto& row : code.generator) {
    for (int j = 0; j < code.n; ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
}

}  // namespace lgc
