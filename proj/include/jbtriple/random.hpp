#pragma once

#include "jbtriple/rng.hpp"
#include "jbtriple/triple.hpp"

namespace jbt {

template <typename Real = double>
MatrixXc<Real> random_gaussian(int rows, int cols, Rng& rng) {
  MatrixXc<Real> m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = std::complex<Real>(rng.complex_normal());
  return m;
}

/// Haar-distributed n x k isometry (k <= n): Q factor of a Gaussian with the
/// phases of diag(R) divided out.
template <typename Real = double>
MatrixXc<Real> random_isometry(int n, int k, Rng& rng) {
  if (k > n || k < 0) throw DimensionError("isometry needs 0 <= k <= n");
  if (k == 0) return MatrixXc<Real>(n, 0);
  const MatrixXc<Real> g = random_gaussian<Real>(n, k, rng);
  Eigen::HouseholderQR<MatrixXc<Real>> qr(g);
  MatrixXc<Real> q = qr.householderQ() * MatrixXc<Real>::Identity(n, k);
  const MatrixXc<Real>& r = qr.matrixQR();
  for (int j = 0; j < k; ++j) {
    const std::complex<Real> d = r(j, j);
    const Real a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

template <typename Real = double>
MatrixXc<Real> random_unitary(int n, Rng& rng) {
  return random_isometry<Real>(n, n, rng);
}

/// Independent complex Gaussian entries, symmetry-projected per block.
template <typename Real = double>
Element<Real> random_element(const TripleSpace& space, Rng& rng) {
  std::vector<MatrixXc<Real>> blocks;
  for (const auto& f : space.factors()) blocks.push_back(random_gaussian<Real>(f.rows, f.cols, rng));
  return Element<Real>::projected(space, std::move(blocks));
}

namespace detail {

/// Block of a rank-r tripotent in factor f. rect: V W*; sym: W W^T;
/// antisym: W J W^T with J the standard symplectic form (r even).
template <typename Real>
MatrixXc<Real> tripotent_block(const Factor& f, int r, Rng& rng) {
  switch (f.kind) {
    case FactorKind::kRect: {
      const MatrixXc<Real> v = random_isometry<Real>(f.rows, r, rng);
      const MatrixXc<Real> w = random_isometry<Real>(f.cols, r, rng);
      return v * w.adjoint();
    }
    case FactorKind::kSym: {
      const MatrixXc<Real> w = random_isometry<Real>(f.rows, r, rng);
      return w * w.transpose();
    }
    case FactorKind::kAntisym: {
      const MatrixXc<Real> w = random_isometry<Real>(f.rows, r, rng);
      MatrixXc<Real> j = MatrixXc<Real>::Zero(r, r);
      for (int k = 0; k + 1 < r; k += 2) {
        j(k, k + 1) = 1;
        j(k + 1, k) = -1;
      }
      return w * j * w.transpose();
    }
  }
  return {};
}

inline int max_rank(const Factor& f) {
  const int r = std::min(f.rows, f.cols);
  return f.kind == FactorKind::kAntisym ? r - r % 2 : r;
}

}  // namespace detail

/// Random tripotent; per block the rank is uniform over the admissible
/// values (even ranks for antisym).
template <typename Real = double>
Tripotent<Real> random_tripotent(const TripleSpace& space, Rng& rng) {
  std::vector<MatrixXc<Real>> blocks;
  for (const auto& f : space.factors()) {
    const int top = detail::max_rank(f);
    int r = rng.uniform_int(0, top);
    if (f.kind == FactorKind::kAntisym) r -= r % 2;
    blocks.push_back(detail::tripotent_block<Real>(f, r, rng));
  }
  return Tripotent<Real>::certify(Element<Real>::projected(space, std::move(blocks)));
}

/// Random complete tripotent of maximal rank in every block, i.e. an extreme
/// point of the closed unit ball.
template <typename Real = double>
Tripotent<Real> random_extreme_point(const TripleSpace& space, Rng& rng) {
  std::vector<MatrixXc<Real>> blocks;
  for (const auto& f : space.factors()) blocks.push_back(detail::tripotent_block<Real>(f, detail::max_rank(f), rng));
  return Tripotent<Real>::certify(Element<Real>::projected(space, std::move(blocks)));
}

/// A point of the closed unit ball: half the time an extreme point, otherwise
/// a Gaussian scaled to a uniform radius.
template <typename Real = double>
Element<Real> random_ball_point(const TripleSpace& space, Rng& rng) {
  if (rng.uniform() < 0.5) return random_extreme_point<Real>(space, rng).element();
  Element<Real> x = random_element<Real>(space, rng);
  const Real n = x.norm();
  if (n == 0) return x;
  return x * (static_cast<Real>(rng.uniform()) / n);
}

}  // namespace jbt
