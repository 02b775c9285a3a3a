// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

// Lattice representation and exact nearest-point decoding.
//
// A lattice is generated by the COLUMNS of its basis matrix B:
//   L = { B k : k in Z^n }.
// Lattices are immutable values; copies share their cached factorizations.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "lgc/enumeration.hpp"

namespace lgc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Coeffs = std::vector<std::int64_t>;

inline constexpr int kMaxDimension = 32;

struct LatticePoint {
  Coeffs coeffs;
  Vector embedding;
};

// Codebook offset: the transmitted constellation is L - c.
struct Shift {
  Vector c;

  static Shift zero(int n) { return Shift{Vector::Zero(n)}; }
};

class Lattice {
 public:
  // Validates and caches gram, volume and a QR factorization of the basis.
  // Throws kNotSquare or kSingularBasis.
  static Lattice from_basis(const Matrix& basis, std::string label = "custom");

  int dim() const;
  const Matrix& basis() const;
  const Matrix& gram() const;
  double volume() const;
  const std::string& label() const;

  // B = Q R with R upper triangular.
  const Matrix& q_factor() const;
  const SphereEnumerator& enumerator() const;

  Vector embed(const Coeffs& coeffs) const;
  Vector embed(std::span<const double> coeffs) const;
  // Q^T y: coordinates of y in the triangular frame.
  Vector to_triangular(const Vector& y) const;
  // Real coordinates B^{-1} x.
  Vector solve(const Vector& x) const;

  Lattice scaled(double factor) const;
  // Lattice whose basis is B^{-T}.
  Lattice dual() const;
  Lattice relabeled(std::string label) const;

  // Length of a shortest nonzero vector; computed once and cached.
  double minimum_distance() const;
  double packing_radius() const { return 0.5 * minimum_distance(); }

 private:
  struct Data;
  explicit Lattice(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

struct Lattice::Data {
  Matrix basis;
  Matrix gram;
  double volume = 0.0;
  std::string label;
  Matrix q;
  SphereEnumerator enumerator;
  Eigen::PartialPivLU<Matrix> lu;
  mutable std::once_flag min_distance_once;
  mutable double min_distance = 0.0;
};

inline int Lattice::dim() const { return static_cast<int>(data_->basis.cols()); }
inline const Matrix& Lattice::basis() const { return data_->basis; }
inline const Matrix& Lattice::gram() const { return data_->gram; }
inline double Lattice::volume() const { return data_->volume; }
inline const std::string& Lattice::label() const { return data_->label; }
inline const Matrix& Lattice::q_factor() const { return data_->q; }
inline const SphereEnumerator& Lattice::enumerator() const {
  return data_->enumerator;
}
inline Vector Lattice::to_triangular(const Vector& y) const {
  return data_->q.transpose() * y;
}

Lattice make_lattice(const Matrix& basis);

enum class StandardName { kZn, kDn, kE8, kA2 };

// Zn: identity. Dn: checkerboard, columns 2e1 and e_{i+1} - e_i (volume 2).
// E8: Conway-Sloane generator (volume 1). A2: (1,0), (1/2, sqrt(3)/2).
Lattice standard_lattice(StandardName name, int n = 0);

// Parses "Z8", "Zn8", "D4", "E8", "A2" (case-insensitive); kUnknownName
// otherwise.
Lattice standard_lattice(const std::string& name);

struct DecodeOptions {
  std::uint64_t node_cap = kDefaultNodeCap;
};

// Nearest lattice point; ties go to the lexicographically smallest coeffs.
LatticePoint closest_point(const Lattice& lattice, const Vector& y,
                           const DecodeOptions& options = {});

// x - Q_L(x), a point of the Voronoi cell.
Vector mod_lattice(const Lattice& lattice, const Vector& x,
                   const DecodeOptions& options = {});

// Nearest point of the coset L - c. The returned embedding is B k - c.
LatticePoint coset_decode(const Lattice& lattice, const Shift& shift,
                          const Vector& y, const DecodeOptions& options = {});

// Plain-text basis format: "n" on the first line, then n rows of n numbers;
// row i holds the i-th coordinate of every basis vector.
Lattice read_lattice(std::istream& in);
Lattice load_lattice(const std::string& path);
void write_lattice(std::ostream& out, const Lattice& lattice);

// Volume of the n-ball of the given radius.
double ball_volume(int n, double radius);

}  // namespace lgc
