#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jbtriple/errors.hpp"
#include "jbtriple/space.hpp"

namespace jbt {

template <typename Real>
using MatrixXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using MatrixXr = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorXr = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Largest singular value; zero for empty matrices.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(m);
  return svd.singularValues()(0);
}

/// A point of a TripleSpace: one complex matrix per summand.
template <typename Real>
class Element {
 public:
  using RealScalar = Real;
  using Scalar = std::complex<Real>;
  using Matrix = MatrixXc<Real>;

  /// Symmetry residual allowed for sym/antisym blocks, relative to the block.
  static constexpr Real kSymmetryTolerance = Real(1e-12);

  /// The zero element.
  explicit Element(TripleSpace space) : space_(std::move(space)) {
    for (const auto& f : space_.factors()) blocks_.push_back(Matrix::Zero(f.rows, f.cols));
  }

  /// Validating constructor: shapes must match and sym/antisym blocks must
  /// already be (anti)symmetric.
  Element(TripleSpace space, std::vector<Matrix> blocks) : space_(std::move(space)), blocks_(std::move(blocks)) {
    check_shapes();
    for (int b = 0; b < num_blocks(); ++b) {
      const auto& f = space_.factor(b);
      if (f.kind == FactorKind::kRect) continue;
      const Matrix& x = blocks_[static_cast<std::size_t>(b)];
      const Real sign = f.kind == FactorKind::kSym ? Real(1) : Real(-1);
      const Real resid = (x - sign * x.transpose()).norm();
      if (resid > kSymmetryTolerance * std::max(x.norm(), std::numeric_limits<Real>::min())) {
        throw DomainError("block " + std::to_string(b) + " violates the " + f.describe() + " symmetry");
      }
    }
  }

  /// Shapes are checked; sym/antisym blocks are replaced by their
  /// (anti)symmetric part.
  static Element projected(TripleSpace space, std::vector<Matrix> blocks) {
    Element e(std::move(space), std::move(blocks), Raw{});
    e.check_shapes();
    e.enforce_symmetry();
    return e;
  }

  /// Convenience for single-factor spaces.
  static Element single(TripleSpace space, Matrix block) {
    std::vector<Matrix> v;
    v.push_back(std::move(block));
    return Element(std::move(space), std::move(v));
  }

  const TripleSpace& space() const { return space_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Matrix& block(int b) const { return blocks_.at(static_cast<std::size_t>(b)); }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  /// Operator norm: the largest singular value over all blocks.
  Real norm() const {
    Real n = 0;
    for (const auto& m : blocks_) n = std::max(n, spectral_norm(m));
    return n;
  }

  Real frobenius_norm() const {
    Real s = 0;
    for (const auto& m : blocks_) s += m.squaredNorm();
    return std::sqrt(s);
  }

  bool same_space(const Element& o) const { return space_ == o.space_; }

  Element& operator+=(const Element& o) {
    require_same(o);
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
    return *this;
  }
  Element& operator-=(const Element& o) {
    require_same(o);
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= o.blocks_[i];
    return *this;
  }
  Element& operator*=(Scalar s) {
    for (auto& m : blocks_) m *= s;
    return *this;
  }
  Element operator-() const {
    Element r(*this);
    r *= Scalar(-1);
    return r;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, Scalar s) { return a *= s; }
  friend Element operator*(Scalar s, Element a) { return a *= s; }
  friend Element operator*(Element a, Real s) { return a *= Scalar(s); }
  friend Element operator*(Real s, Element a) { return a *= Scalar(s); }

  void require_same(const Element& o) const {
    if (!(space_ == o.space_)) {
      throw DimensionError("elements of " + space_.describe() + " and " + o.space_.describe() + " do not mix");
    }
  }

 private:
  struct Raw {};
  Element(TripleSpace space, std::vector<Matrix> blocks, Raw) : space_(std::move(space)), blocks_(std::move(blocks)) {}

  void check_shapes() const {
    if (static_cast<int>(blocks_.size()) != space_.num_blocks()) {
      throw DimensionError("expected " + std::to_string(space_.num_blocks()) + " blocks, got " +
                           std::to_string(blocks_.size()));
    }
    for (int b = 0; b < space_.num_blocks(); ++b) {
      const auto& f = space_.factor(b);
      const auto& m = blocks_[static_cast<std::size_t>(b)];
      if (m.rows() != f.rows || m.cols() != f.cols) {
        throw DimensionError("block " + std::to_string(b) + " has shape " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected " + f.describe());
      }
    }
  }

  void enforce_symmetry() {
    for (int b = 0; b < num_blocks(); ++b) {
      const auto kind = space_.factor(b).kind;
      auto& m = blocks_[static_cast<std::size_t>(b)];
      if (kind == FactorKind::kSym) {
        Matrix s = (m + m.transpose()) * Real(0.5);
        m = std::move(s);
      } else if (kind == FactorKind::kAntisym) {
        Matrix s = (m - m.transpose()) * Real(0.5);
        m = std::move(s);
      }
    }
  }

  TripleSpace space_;
  std::vector<Matrix> blocks_;
};

// ---------------------------------------------------------------------------
// Coordinates.
//
// Every space carries a complex basis that is orthonormal for the Frobenius
// inner product Re/Im tr(x* y):
//   rect(m,n):   E_ij, column-major (i fastest);
//   sym(n):      E_jj and (E_ij + E_ji)/sqrt2 for i > j, column-major over the
//                lower triangle;
//   antisym(n):  (E_ij - E_ji)/sqrt2 for i > j, column-major over the strict
//                lower triangle.
// Blocks are concatenated in order. The real vectorization interleaves
// (Re c_k, Im c_k), so the real basis is b_0, i b_0, b_1, i b_1, ...
// ---------------------------------------------------------------------------

namespace detail {

template <typename Real>
void factor_coordinates(const Factor& f, const MatrixXc<Real>& x, std::complex<Real>* out) {
  const Real r2 = std::sqrt(Real(2));
  int k = 0;
  switch (f.kind) {
    case FactorKind::kRect:
      for (int j = 0; j < f.cols; ++j)
        for (int i = 0; i < f.rows; ++i) out[k++] = x(i, j);
      break;
    case FactorKind::kSym:
      for (int j = 0; j < f.rows; ++j)
        for (int i = j; i < f.rows; ++i) out[k++] = (i == j) ? x(i, i) : (x(i, j) + x(j, i)) / r2;
      break;
    case FactorKind::kAntisym:
      for (int j = 0; j < f.rows; ++j)
        for (int i = j + 1; i < f.rows; ++i) out[k++] = (x(i, j) - x(j, i)) / r2;
      break;
  }
}

template <typename Real>
MatrixXc<Real> factor_from_coordinates(const Factor& f, const std::complex<Real>* c) {
  const Real r2 = std::sqrt(Real(2));
  MatrixXc<Real> x = MatrixXc<Real>::Zero(f.rows, f.cols);
  int k = 0;
  switch (f.kind) {
    case FactorKind::kRect:
      for (int j = 0; j < f.cols; ++j)
        for (int i = 0; i < f.rows; ++i) x(i, j) = c[k++];
      break;
    case FactorKind::kSym:
      for (int j = 0; j < f.rows; ++j)
        for (int i = j; i < f.rows; ++i) {
          if (i == j) {
            x(i, i) = c[k++];
          } else {
            x(i, j) = c[k] / r2;
            x(j, i) = c[k] / r2;
            ++k;
          }
        }
      break;
    case FactorKind::kAntisym:
      for (int j = 0; j < f.rows; ++j)
        for (int i = j + 1; i < f.rows; ++i) {
          x(i, j) = c[k] / r2;
          x(j, i) = -c[k] / r2;
          ++k;
        }
      break;
  }
  return x;
}

}  // namespace detail

template <typename Real>
VectorXc<Real> coordinates(const Element<Real>& x) {
  VectorXc<Real> c(x.space().complex_dim());
  int offset = 0;
  for (int b = 0; b < x.num_blocks(); ++b) {
    const auto& f = x.space().factor(b);
    detail::factor_coordinates<Real>(f, x.block(b), c.data() + offset);
    offset += f.complex_dim();
  }
  return c;
}

template <typename Real>
Element<Real> from_coordinates(const TripleSpace& space, const VectorXc<Real>& c) {
  if (c.size() != space.complex_dim()) throw DimensionError("coordinate vector has the wrong length");
  std::vector<MatrixXc<Real>> blocks;
  int offset = 0;
  for (const auto& f : space.factors()) {
    blocks.push_back(detail::factor_from_coordinates<Real>(f, c.data() + offset));
    offset += f.complex_dim();
  }
  return Element<Real>::projected(space, std::move(blocks));
}

/// The orthonormal complex basis described above.
template <typename Real>
std::vector<Element<Real>> basis(const TripleSpace& space) {
  const int d = space.complex_dim();
  std::vector<Element<Real>> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    VectorXc<Real> c = VectorXc<Real>::Zero(d);
    c(k) = 1;
    out.push_back(from_coordinates<Real>(space, c));
  }
  return out;
}

template <typename Real>
VectorXr<Real> realify(const VectorXc<Real>& c) {
  VectorXr<Real> v(2 * c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    v(2 * k) = c(k).real();
    v(2 * k + 1) = c(k).imag();
  }
  return v;
}

template <typename Real>
VectorXc<Real> complexify(const VectorXr<Real>& v) {
  if (v.size() % 2 != 0) throw DimensionError("real vector must have even length");
  VectorXc<Real> c(v.size() / 2);
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = std::complex<Real>(v(2 * k), v(2 * k + 1));
  return c;
}

template <typename Real>
VectorXr<Real> vectorize(const Element<Real>& x) {
  return realify<Real>(coordinates(x));
}

template <typename Real>
Element<Real> devectorize(const TripleSpace& space, const VectorXr<Real>& v) {
  return from_coordinates<Real>(space, complexify<Real>(v));
}

using Elementd = Element<double>;

}  // namespace jbt
