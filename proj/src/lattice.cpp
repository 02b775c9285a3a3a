// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#include "lgc/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

namespace lgc {

namespace {

void require_dim(const Lattice& lattice, const Vector& v, const char* what) {
  if (v.size() != lattice.dim()) {
    fail(ErrorCode::kDimensionMismatch,
         std::string(what) + " has length " + std::to_string(v.size()) +
             ", lattice dimension is " + std::to_string(lattice.dim()));
  }
}

void require_decodable(const Lattice& lattice) {
  if (lattice.dim() > kMaxDimension) {
    fail(ErrorCode::kDimensionTooLarge,
         "exact decoding supports n <= " + std::to_string(kMaxDimension));
  }
}

Coeffs to_coeffs(std::span<const double> k) {
  Coeffs out(k.size());
  std::transform(k.begin(), k.end(), out.begin(),
                 [](double v) { return static_cast<std::int64_t>(v); });
  return out;
}

}  // namespace

Lattice Lattice::from_basis(const Matrix& basis, std::string label) {
  if (basis.rows() != basis.cols()) {
    fail(ErrorCode::kNotSquare, "basis is " + std::to_string(basis.rows()) +
                                    "x" + std::to_string(basis.cols()));
  }
  if (basis.cols() == 0) fail(ErrorCode::kInvalidArgument, "empty basis");
  if (!basis.allFinite()) fail(ErrorCode::kInvalidArgument, "non-finite basis");

  auto data = std::make_shared<Data>();
  data->basis = basis;
  data->gram = basis.transpose() * basis;
  data->label = std::move(label);

  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  data->q = qr.householderQ();

  double column_norms = 1.0;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    column_norms *= basis.col(j).norm();
  }
  const double abs_det = std::abs(r.diagonal().prod());
  if (!(abs_det > 1e-12 * column_norms)) {
    fail(ErrorCode::kSingularBasis, "basis is rank deficient");
  }
  data->volume = abs_det;
  data->enumerator = SphereEnumerator(std::move(r));
  data->lu = Eigen::PartialPivLU<Matrix>(basis);
  return Lattice(std::move(data));
}

Vector Lattice::embed(const Coeffs& coeffs) const {
  Vector k(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    k[static_cast<Eigen::Index>(i)] = static_cast<double>(coeffs[i]);
  }
  return data_->basis * k;
}

Vector Lattice::embed(std::span<const double> coeffs) const {
  return data_->basis *
         Eigen::Map<const Vector>(coeffs.data(),
                                  static_cast<Eigen::Index>(coeffs.size()));
}

Vector Lattice::solve(const Vector& x) const { return data_->lu.solve(x); }

Lattice Lattice::scaled(double factor) const {
  if (!(factor > 0.0)) fail(ErrorCode::kInvalidArgument, "scale must be > 0");
  return from_basis(factor * data_->basis, data_->label);
}

Lattice Lattice::dual() const {
  Matrix dual_basis = data_->lu.inverse().transpose();
  return from_basis(dual_basis, data_->label + "*");
}

Lattice Lattice::relabeled(std::string label) const {
  auto data = std::make_shared<Data>();
  data->basis = data_->basis;
  data->gram = data_->gram;
  data->volume = data_->volume;
  data->label = std::move(label);
  data->q = data_->q;
  data->enumerator = data_->enumerator;
  data->lu = data_->lu;
  return Lattice(std::move(data));
}

double Lattice::minimum_distance() const {
  std::call_once(data_->min_distance_once, [this] {
    double radius_sq = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < data_->basis.cols(); ++j) {
      radius_sq = std::min(radius_sq, data_->basis.col(j).squaredNorm());
    }
    auto nonzero = [](std::span<const double> k, double) {
      return std::any_of(k.begin(), k.end(), [](double v) { return v != 0.0; });
    };
    auto best = data_->enumerator.closest(Vector::Zero(dim()),
                                          radius_sq * (1.0 + 1e-9), nonzero);
    data_->min_distance = std::sqrt(best.dist_sq);
  });
  return data_->min_distance;
}

Lattice make_lattice(const Matrix& basis) {
  return Lattice::from_basis(basis, "custom");
}

Lattice standard_lattice(StandardName name, int n) {
  switch (name) {
    case StandardName::kZn: {
      if (n < 1) fail(ErrorCode::kInvalidArgument, "Zn requires n >= 1");
      return Lattice::from_basis(Matrix::Identity(n, n),
                                 "Z" + std::to_string(n));
    }
    case StandardName::kDn: {
      if (n < 2) fail(ErrorCode::kInvalidArgument, "Dn requires n >= 2");
      Matrix b = Matrix::Zero(n, n);
      b(0, 0) = 2.0;
      for (int j = 1; j < n; ++j) {
        b(j - 1, j) = -1.0;
        b(j, j) = 1.0;
      }
      return Lattice::from_basis(b, "D" + std::to_string(n));
    }
    case StandardName::kE8: {
      // Rows of the Conway-Sloane generator, stored as columns.
      Matrix g = Matrix::Zero(8, 8);
      g(0, 0) = 2.0;
      for (int i = 1; i < 7; ++i) {
        g(i, i - 1) = -1.0;
        g(i, i) = 1.0;
      }
      g.row(7).setConstant(0.5);
      return Lattice::from_basis(g.transpose(), "E8");
    }
    case StandardName::kA2: {
      Matrix b(2, 2);
      b << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
      return Lattice::from_basis(b, "A2");
    }
  }
  fail(ErrorCode::kUnknownName, "unknown standard lattice");
}

Lattice standard_lattice(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "E8") return standard_lattice(StandardName::kE8);
  if (upper == "A2") return standard_lattice(StandardName::kA2);
  static const std::regex family(R"(^([ZD])N?\(?([0-9]+)\)?$)");
  std::smatch m;
  if (std::regex_match(upper, m, family)) {
    const int n = std::stoi(m[2].str());
    return standard_lattice(m[1] == "Z" ? StandardName::kZn : StandardName::kDn,
                            n);
  }
  fail(ErrorCode::kUnknownName, "unknown lattice name '" + name + "'");
}

LatticePoint closest_point(const Lattice& lattice, const Vector& y,
                           const DecodeOptions& options) {
  require_dim(lattice, y, "target");
  require_decodable(lattice);
  auto best = lattice.enumerator().closest(lattice.to_triangular(y),
                                           options.node_cap);
  LatticePoint point;
  point.coeffs = to_coeffs(best.coeffs);
  point.embedding = lattice.embed(std::span<const double>(best.coeffs));
  return point;
}

Vector mod_lattice(const Lattice& lattice, const Vector& x,
                   const DecodeOptions& options) {
  return x - closest_point(lattice, x, options).embedding;
}

LatticePoint coset_decode(const Lattice& lattice, const Shift& shift,
                          const Vector& y, const DecodeOptions& options) {
  require_dim(lattice, shift.c, "shift");
  require_dim(lattice, y, "target");
  LatticePoint point = closest_point(lattice, y + shift.c, options);
  point.embedding -= shift.c;
  return point;
}

Lattice read_lattice(std::istream& in) {
  long n = 0;
  if (!(in >> n) || n < 1 || n > 1024) {
    fail(ErrorCode::kParse, "lattice file: bad dimension line");
  }
  Matrix b(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      if (!(in >> b(i, j))) {
        fail(ErrorCode::kParse, "lattice file: expected " +
                                    std::to_string(n * n) + " entries");
      }
    }
  }
  std::string extra;
  if (in >> extra) fail(ErrorCode::kParse, "lattice file: trailing data");
  return make_lattice(b);
}

Lattice load_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "lattice file not found");
  return read_lattice(in);
}

void write_lattice(std::ostream& out, const Lattice& lattice) {
  const int n = lattice.dim();
  std::ostringstream buf;
  buf.precision(17);
  buf << n << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) buf << ' ';
      buf << lattice.basis()(i, j);
    }
    buf << '\n';
  }
  out << buf.str();
}

double ball_volume(int n, double radius) {
  return std::exp(0.5 * n * std::log(M_PI) - std::lgamma(0.5 * n + 1.0) +
                  n * std::log(radius));
}

}  // namespace lgc
