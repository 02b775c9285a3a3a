// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Gaussian sums over lattices: theta series, flatness factor, and the
// moment/entropy diagnostics of discrete Gaussians.
//
// All sums are truncated enumerations with a certified bound on the omitted
// tail. The bound uses a packing argument: balls of radius rho = lambda_1/2
// around points of any translate of L are disjoint, so at most
// ((r + rho)/rho)^n such points lie within radius r. Summing that count over
// shells of width rho beyond the truncation radius bounds the tail.
//
// A sum can be evaluated on the primal lattice or, through Poisson summation,
// on the dual lattice:
//   sum_{x in L} exp(-pi tau |x - c|^2)
//     = 1/(V tau^{n/2}) sum_{u in L*} exp(-pi |u|^2 / tau) cos(2 pi <u, c>).
// kAuto picks whichever side needs fewer points.

#pragma once

#include <cstdint>

#include "lgc/lattice.hpp"

namespace lgc {

enum class SumRoute { kAuto, kPrimal, kDual };

const char* route_name(SumRoute route);

struct SumOptions {
  SumRoute route = SumRoute::kAuto;
  // Tail bound target relative to the computed sum.
  double rel_tol = 1e-12;
  std::uint64_t node_cap = kDefaultNodeCap;
  // Primal enumeration is refused below this tau (dual: below this 1/tau).
  double tau_floor = 1e-3;
};

struct GaussianSum {
  // sum exp(-pi tau |x - c|^2) over x in L.
  double mass = 0.0;
  // sum |x - c|^2 exp(-pi tau |x - c|^2).
  double moment = 0.0;
  double mass_bound = 0.0;
  double moment_bound = 0.0;
  double radius = 0.0;
  SumRoute route = SumRoute::kPrimal;
  std::uint64_t points = 0;
  // Dual route only: the dual series D = 1 + dual_excess and
  // dual_q_sum = sum |u|^2 exp(-pi |u|^2/tau) cos(2 pi <u,c>).
  double dual_excess = 0.0;
  double dual_q_sum = 0.0;

  double mean_sq() const { return moment / mass; }
};

GaussianSum gaussian_lattice_sum(const Lattice& lattice, double tau,
                                 const Vector& center,
                                 const SumOptions& options = {});

// E|x - c|^2 - n/(2 pi tau) for x ~ D_{L,c}; exact to full relative
// precision on the dual route.
double mean_sq_excess(const GaussianSum& sum, int n, double tau);

// log(sum exp(-pi tau |x-c|^2)) - log(1/(V tau^{n/2})); i.e. log D.
double log_mass_excess(const GaussianSum& sum, const Lattice& lattice,
                       double tau);

// Upper bound on sum |p|^{2m} exp(-a |p|^2) over points p of any translate of
// a lattice with the given packing radius, restricted to |p| > radius.
double gaussian_tail_bound(int n, double packing_radius, double radius,
                           double a, int moment = 0);

struct ThetaValue {
  double value = 0.0;
  double truncation_bound = 0.0;
  double radius = 0.0;
  SumRoute route = SumRoute::kPrimal;
};

// Theta_L(tau) = sum exp(-pi tau |x|^2).
ThetaValue theta(const Lattice& lattice, double tau,
                 const SumOptions& options = {});

double gaussian_density(double sigma, const Vector& c, const Vector& x);

// V^{2/n} / (2 pi sigma^2).
double gsnr(const Lattice& lattice, double sigma);

struct FlatnessReport {
  double sigma = 0.0;
  double gsnr = 0.0;
  ThetaValue theta;
  double epsilon = 0.0;
};

// epsilon = gsnr^{n/2} Theta(1/(2 pi sigma^2)) - 1, not clamped.
FlatnessReport flatness(const Lattice& lattice, double sigma,
                        const SumOptions& options = {});

// Brute-force flatness: max |V f_{sigma,L}(x) - 1| over a regular grid of
// the basis parallelepiped. n <= 4.
double flatness_direct(const Lattice& lattice, double sigma,
                       int grid_points_per_dim);

struct PartitionCheck {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double epsilon = 0.0;
  bool pass = false;
};

// f_{sigma,c}(L) against [1 - eps, 1 + eps] / V.
PartitionCheck partition_sandwich_check(const Lattice& lattice, double sigma,
                                        const Vector& c);

struct MomentCheck {
  double second_moment = 0.0;  // E|x - c|^2
  double deviation = 0.0;      // |E|x - c|^2 - n sigma0^2|
  double bound = 0.0;          // 2 pi eps / (1 - eps) sigma0^2
  double epsilon = 0.0;        // eps_L(sigma0 / 2)
  bool pass = false;
};

MomentCheck moment_check(const Lattice& lattice, double sigma0,
                         const Vector& c);

struct EntropyReport {
  double entropy_rate = 0.0;   // nats per dimension
  double reference = 0.0;      // log(sqrt(2 pi e) sigma0) - log(V)/n
  double epsilon_prime = 0.0;
  double epsilon = 0.0;        // eps_L(sigma0 / 2)
  double deviation = 0.0;      // |entropy_rate - reference|
  bool pass = false;
};

EntropyReport entropy_check(const Lattice& lattice, double sigma0,
                            const Vector& c);

// -log(1 - eps)/n + pi eps / (n (1 - eps)).
double entropy_slack(double eps, int n);

}  // namespace lgc
