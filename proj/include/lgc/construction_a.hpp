// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Construction A: the lattice a * { v in Z^n : v mod p in C } for a linear
// code C over Z_p.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "lgc/analytics.hpp"
#include "lgc/lattice.hpp"
#include "lgc/rng.hpp"

namespace lgc {

struct LinearCode {
  std::int64_t p = 2;
  int n = 0;
  int k = 0;
  std::vector<std::vector<std::int64_t>> generator;  // k rows of length n
};

bool is_prime(std::int64_t p);

// Rank over Z_p.
int rank_mod_p(std::vector<std::vector<std::int64_t>> rows, std::int64_t p);

// Checks p prime, shape, entry range and full rank; kInvalidArgument or
// kRankDeficientCode otherwise.
void validate_code(const LinearCode& code);

// Basis: the k rows of the reduced echelon form of the generator, plus
// p e_j for each non-pivot column j, all scaled by a. Volume a^n p^{n-k}.
Lattice lift(const LinearCode& code, double scale);

// Whether v mod p lies in the code.
bool in_code(const LinearCode& code, const std::vector<std::int64_t>& v);

// Uniform k x n generator, redrawn until full rank (at most 1000 draws, then
// kRandomnessExhausted).
LinearCode random_code(std::int64_t p, int n, int k, RngSeed seed);

// (1 + delta) gsnr(L, sigma)^{n/2}: the flatness level some member of the
// random mod-p ensemble is guaranteed to reach.
double ensemble_flatness_bound(const Lattice& lattice, double sigma, double delta);

// Scale a giving the lift of any [n, k]_p code the requested gsnr at sigma.
double scale_for_gsnr(std::int64_t p, int n, int k, double gsnr_target,
                      double sigma);

struct EnsembleEntry {
  std::int64_t sample_index = 0;
  LinearCode code;
  double scale = 0.0;
  FlatnessReport flatness;
  double bound = 0.0;
};

// Draws `samples` random codes (sample i from stream i), lifts each with
// the given scale and ranks them by flatness at sigma, smallest first.
std::vector<EnsembleEntry> ensemble_search(std::int64_t p, int n, int k,
                                           double scale, double sigma,
                                           int samples, RngSeed seed,
                                           double delta = 1.0,
                                           int threads = 1);

// "p n k" on the first line, then k rows of n integers.
LinearCode read_code(std::istream& in);
LinearCode load_code(const std::string& path);
void write_code(std::ostream& out, const LinearCode& code);

}  // namespace lgc
