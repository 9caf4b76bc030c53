#pragma once

#include <array>
#include <cstdio>
#include <optional>

#include "jbtriple/element.hpp"

namespace jbt {

/// Default tolerances. Algebraic identities are checked relative to the
/// size of the data, spectral statements absolutely.
struct Tolerances {
  double algebraic = 1e-10;
  double spectral = 1e-9;
};

/// {x,y,z} = (x y* z + z y* x) / 2, blockwise.
template <typename Real>
Element<Real> triple_product(const Element<Real>& x, const Element<Real>& y, const Element<Real>& z) {
  x.require_same(y);
  x.require_same(z);
  std::vector<MatrixXc<Real>> out;
  out.reserve(static_cast<std::size_t>(x.num_blocks()));
  for (int b = 0; b < x.num_blocks(); ++b) {
    const auto& X = x.block(b);
    const auto& Y = y.block(b);
    const auto& Z = z.block(b);
    MatrixXc<Real> ys = Y.adjoint();
    out.push_back(Real(0.5) * (X * (ys * Z) + Z * (ys * X)));
  }
  return Element<Real>::projected(x.space(), std::move(out));
}

/// Q(a,b)(x) = {a,x,b}; conjugate-linear in x.
template <typename Real>
Element<Real> q_operator(const Element<Real>& a, const Element<Real>& b, const Element<Real>& x) {
  return triple_product(a, x, b);
}

/// Matrix of the real-linear map `f` in the real coordinates of `space`
/// (see element.hpp). `f` must be complex-linear.
template <typename Real, typename Map>
MatrixXr<Real> real_matrix_of_linear_map(const TripleSpace& space, Map&& f) {
  const int d = space.complex_dim();
  MatrixXr<Real> m(2 * d, 2 * d);
  const auto bs = basis<Real>(space);
  for (int k = 0; k < d; ++k) {
    const VectorXc<Real> col = coordinates(f(bs[static_cast<std::size_t>(k)]));
    const std::complex<Real> i(0, 1);
    m.col(2 * k) = realify<Real>(col);
    m.col(2 * k + 1) = realify<Real>(VectorXc<Real>(col * i));
  }
  return m;
}

/// L(a,b)(x) = {a,b,x} as a real matrix on vectorize()d coordinates.
template <typename Real>
MatrixXr<Real> l_operator(const Element<Real>& a, const Element<Real>& b) {
  a.require_same(b);
  return real_matrix_of_linear_map<Real>(a.space(), [&](const Element<Real>& x) { return triple_product(a, b, x); });
}

/// A certified tripotent {e,e,e} = e together with its blockwise initial
/// (e*e) and final (ee*) projections.
template <typename Real>
class Tripotent {
 public:
  using Matrix = MatrixXc<Real>;

  /// Throws DomainError unless ||{e,e,e} - e|| <= tol * max(1, ||e||) and the
  /// projections are idempotent and self-adjoint to the same tolerance.
  static Tripotent certify(Element<Real> e, Real tol = Real(1e-10)) {
    const Real resid = (triple_product(e, e, e) - e).norm();
    if (resid > tol * std::max(Real(1), e.norm())) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e", static_cast<double>(resid));
      throw DomainError(std::string("not a tripotent: ||{e,e,e}-e|| = ") + buf);
    }
    Tripotent t(std::move(e));
    for (int b = 0; b < t.e_.num_blocks(); ++b) {
      for (const Matrix* p : {&t.initial_[static_cast<std::size_t>(b)], &t.final_[static_cast<std::size_t>(b)]}) {
        const Real idem = spectral_norm(Matrix((*p) * (*p) - *p));
        const Real herm = spectral_norm(Matrix(*p - p->adjoint()));
        if (idem > tol || herm > tol) throw DomainError("tripotent projections are not orthogonal projections");
      }
    }
    return t;
  }

  static Tripotent zero(const TripleSpace& space) { return Tripotent(Element<Real>(space)); }

  const Element<Real>& element() const { return e_; }
  const TripleSpace& space() const { return e_.space(); }
  const Matrix& initial_projection(int b) const { return initial_.at(static_cast<std::size_t>(b)); }
  const Matrix& final_projection(int b) const { return final_.at(static_cast<std::size_t>(b)); }

  /// Rank summed over blocks (trace of the initial projections).
  int rank() const {
    Real r = 0;
    for (const auto& p : initial_) r += p.trace().real();
    return static_cast<int>(std::lround(static_cast<double>(r)));
  }

 private:
  explicit Tripotent(Element<Real> e) : e_(std::move(e)) {
    for (int b = 0; b < e_.num_blocks(); ++b) {
      const Matrix& x = e_.block(b);
      initial_.push_back(x.adjoint() * x);
      final_.push_back(x * x.adjoint());
    }
  }

  Element<Real> e_;
  std::vector<Matrix> initial_;
  std::vector<Matrix> final_;
};

/// Peirce projection P_i(e)(x) for i in {0,1,2}, via the closed forms
/// P2 = pf x pi, P1 = pf x (1-pi) + (1-pf) x pi, P0 = (1-pf) x (1-pi).
template <typename Real>
Element<Real> peirce_projection(const Tripotent<Real>& e, int i, const Element<Real>& x) {
  if (i < 0 || i > 2) throw DomainError("Peirce index must be 0, 1 or 2");
  e.element().require_same(x);
  std::vector<MatrixXc<Real>> out;
  for (int b = 0; b < x.num_blocks(); ++b) {
    const auto& X = x.block(b);
    const auto& pi = e.initial_projection(b);
    const auto& pf = e.final_projection(b);
    MatrixXc<Real> fx = pf * X;
    MatrixXc<Real> fxi = fx * pi;
    switch (i) {
      case 2:
        out.push_back(fxi);
        break;
      case 1:
        out.push_back(fx - fxi + (X - fx) * pi);
        break;
      default:
        out.push_back(X - fx - (X - fx) * pi);
        break;
    }
  }
  return Element<Real>::projected(x.space(), std::move(out));
}

/// All three Peirce components at once, indexed by i.
template <typename Real>
std::array<Element<Real>, 3> peirce_decomposition(const Tripotent<Real>& e, const Element<Real>& x) {
  return {peirce_projection(e, 0, x), peirce_projection(e, 1, x), peirce_projection(e, 2, x)};
}

/// Peirce projections assembled from L(e,e) alone:
/// P2 = L(2L - I), P1 = 4L(I - L), P0 = (I - L)(I - 2L).
template <typename Real>
MatrixXr<Real> peirce_operator_from_l(const Tripotent<Real>& e, int i) {
  if (i < 0 || i > 2) throw DomainError("Peirce index must be 0, 1 or 2");
  const MatrixXr<Real> l = l_operator(e.element(), e.element());
  const MatrixXr<Real> id = MatrixXr<Real>::Identity(l.rows(), l.cols());
  switch (i) {
    case 2:
      return l * (Real(2) * l - id);
    case 1:
      return Real(4) * l * (id - l);
    default:
      return (id - l) * (id - Real(2) * l);
  }
}

/// e <= u. Both characterizations are evaluated: {e,u,e} = e, and u - e is a
/// tripotent orthogonal to e. They must agree.
template <typename Real>
bool tripotent_leq(const Tripotent<Real>& e, const Tripotent<Real>& u, Real tol = Real(1e-9)) {
  const auto& ee = e.element();
  const auto& uu = u.element();
  ee.require_same(uu);
  const Real r1 = (triple_product(ee, uu, ee) - ee).norm();
  const Element<Real> d = uu - ee;
  const Real tri = (triple_product(d, d, d) - d).norm() / std::max(Real(1), d.norm());
  const Real orth = triple_product(ee, ee, d).norm();
  const Real r2 = std::max(tri, orth);
  const bool a = r1 <= tol;
  const bool b = r2 <= tol;
  if (a != b && std::abs(r1 - r2) > tol) {
    throw InternalConsistencyError("tripotent order: {e,u,e}=e residual " + std::to_string(static_cast<double>(r1)) +
                                   " disagrees with orthogonal-difference residual " +
                                   std::to_string(static_cast<double>(r2)));
  }
  return a;
}

/// e ⊥ v, checked as {e,e,v} = 0 and cross-checked as {v,v,e} = 0.
template <typename Real>
bool is_orthogonal(const Tripotent<Real>& e, const Tripotent<Real>& v, Real tol = Real(1e-9)) {
  const auto& ee = e.element();
  const auto& vv = v.element();
  ee.require_same(vv);
  const Real r1 = triple_product(ee, ee, vv).norm();
  const Real r2 = triple_product(vv, vv, ee).norm();
  const bool a = r1 <= tol * vv.norm();
  const bool b = r2 <= tol * ee.norm();
  if (a != b && std::abs(r1 - r2) > tol * std::max(Real(1), std::max(ee.norm(), vv.norm()))) {
    throw InternalConsistencyError("orthogonality: {e,e,v} and {v,v,e} disagree");
  }
  return a && b;
}

/// The unital JB*-algebra structure on the Peirce-2 space of a tripotent:
/// a o b = {a,e,b}, a^{*e} = {e,a,e}, unit e.
template <typename Real>
class JordanStructure {
 public:
  explicit JordanStructure(Tripotent<Real> e) : e_(std::move(e)) {}

  const Element<Real>& unit() const { return e_.element(); }
  const Tripotent<Real>& tripotent() const { return e_; }

  Element<Real> product(const Element<Real>& a, const Element<Real>& b) const {
    return triple_product(a, e_.element(), b);
  }
  Element<Real> involution(const Element<Real>& a) const {
    return triple_product(e_.element(), a, e_.element());
  }
  /// Projects onto E_2(e).
  Element<Real> project(const Element<Real>& x) const { return peirce_projection(e_, 2, x); }

  /// {a,b,c} rebuilt from the Jordan data:
  /// (a o b*) o c + (c o b*) o a - (a o c) o b*.
  Element<Real> triple_from_jordan(const Element<Real>& a, const Element<Real>& b, const Element<Real>& c) const {
    const Element<Real> bs = involution(b);
    return product(product(a, bs), c) + product(product(c, bs), a) - product(product(a, c), bs);
  }

 private:
  Tripotent<Real> e_;
};

template <typename Real>
JordanStructure<Real> jordan_structure(const Tripotent<Real>& e) {
  return JordanStructure<Real>(e);
}

using Tripotentd = Tripotent<double>;

}  // namespace jbt
