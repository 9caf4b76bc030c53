#pragma once

#include <functional>
#include <memory>

#include "jbtriple/random.hpp"
#include "jbtriple/triple.hpp"

namespace jbt {

/// Relative SVD rank threshold shared by supports and polar parts.
inline constexpr double kRankThreshold = 1e-12;

/// Polar part sum_{sigma >= thr} u v* of a block plus its singular values.
template <typename Real>
struct PolarPart {
  MatrixXc<Real> partial_isometry;
  VectorXr<Real> singular_values;
};

template <typename Real>
PolarPart<Real> polar_part(const MatrixXc<Real>& m, Real threshold) {
  PolarPart<Real> out;
  out.partial_isometry = MatrixXc<Real>::Zero(m.rows(), m.cols());
  if (m.size() == 0) {
    out.singular_values.resize(0);
    return out;
  }
  Eigen::JacobiSVD<MatrixXc<Real>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  for (Eigen::Index k = 0; k < out.singular_values.size(); ++k) {
    if (out.singular_values(k) >= threshold && out.singular_values(k) > 0) {
      out.partial_isometry += svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
    }
  }
  return out;
}

/// A normal functional phi(x) = sum_b tr(F_b* X_b). The support tripotent
/// and trace norm are computed at construction.
template <typename Real>
class NormalFunctional {
 public:
  explicit NormalFunctional(Element<Real> rep) : rep_(Element<Real>::projected(rep.space(), rep.blocks())) {
    Real smax = 0;
    std::vector<Eigen::JacobiSVD<MatrixXc<Real>>> svds;
    for (const auto& b : rep_.blocks()) smax = std::max(smax, spectral_norm(b));
    const Real thr = Real(kRankThreshold) * smax;
    std::vector<MatrixXc<Real>> support;
    for (const auto& b : rep_.blocks()) {
      auto pp = polar_part<Real>(b, thr);
      for (Eigen::Index k = 0; k < pp.singular_values.size(); ++k) {
        const Real s = pp.singular_values(k);
        norm_ += s;
        if (smax > 0 && s >= thr / 10 && s <= thr * 10) ill_conditioned_ = true;
      }
      support.push_back(std::move(pp.partial_isometry));
    }
    support_ = std::make_shared<Tripotent<Real>>(
        Tripotent<Real>::certify(Element<Real>::projected(rep_.space(), std::move(support)),
                                 ill_conditioned_ ? Real(1e-6) : Real(1e-9)));
  }

  explicit NormalFunctional(const TripleSpace& space) : NormalFunctional(Element<Real>(space)) {}

  /// phi with phi(b_k) = f(b_k) on the coordinate basis; f must be linear.
  static NormalFunctional from_linear_map(const TripleSpace& space,
                                          const std::function<std::complex<Real>(const Element<Real>&)>& f) {
    const auto bs = basis<Real>(space);
    VectorXc<Real> c(space.complex_dim());
    for (std::size_t k = 0; k < bs.size(); ++k) c(static_cast<Eigen::Index>(k)) = std::conj(f(bs[k]));
    return NormalFunctional(from_coordinates<Real>(space, c));
  }

  std::complex<Real> operator()(const Element<Real>& x) const {
    rep_.require_same(x);
    std::complex<Real> s = 0;
    for (int b = 0; b < x.num_blocks(); ++b) s += (rep_.block(b).adjoint() * x.block(b)).trace();
    return s;
  }

  const TripleSpace& space() const { return rep_.space(); }
  const Element<Real>& rep() const { return rep_; }
  /// Trace norm, summed over blocks.
  Real norm() const { return norm_; }
  bool is_zero() const { return norm_ == 0; }
  bool ill_conditioned() const { return ill_conditioned_; }

  /// s(phi); throws UndefinedSupportError for phi = 0.
  const Tripotent<Real>& support_tripotent() const {
    if (is_zero()) throw UndefinedSupportError("the zero functional has no support tripotent");
    return *support_;
  }
  /// s(phi) as an element; zero for phi = 0.
  const Element<Real>& support() const { return support_->element(); }
  const Tripotent<Real>& support_or_zero() const { return *support_; }

  friend NormalFunctional operator+(const NormalFunctional& a, const NormalFunctional& b) {
    return NormalFunctional(a.rep_ + b.rep_);
  }
  friend NormalFunctional operator*(Real s, const NormalFunctional& a) { return NormalFunctional(a.rep_ * s); }

 private:
  Element<Real> rep_;
  Real norm_ = 0;
  bool ill_conditioned_ = false;
  std::shared_ptr<const Tripotent<Real>> support_;
};

/// phi{x, y, s(phi)}: linear in x, conjugate-linear in y.
template <typename Real>
std::complex<Real> sesquilinear_form(const NormalFunctional<Real>& phi, const Element<Real>& x, const Element<Real>& y) {
  return phi(triple_product(x, y, phi.support()));
}

/// phi{x,x,u} for an arbitrary tripotent u (equals ||x||_phi^2 when u >= s(phi)).
template <typename Real>
std::complex<Real> seminorm_squared_at(const NormalFunctional<Real>& phi, const Element<Real>& x,
                                       const Element<Real>& u) {
  return phi(triple_product(x, x, u));
}

template <typename Real>
struct SeminormValue {
  Real squared = 0;
  Real imag_residual = 0;
  bool flagged = false;  // imaginary part above 1e-9
};

/// ||x||_phi^2 with its diagnostics. Throws PositivityViolation when the
/// real part is below -1e-9 max(1, ||phi|| ||x||^2).
template <typename Real>
SeminormValue<Real> seminorm_squared(const NormalFunctional<Real>& phi, const Element<Real>& x) {
  const std::complex<Real> v = sesquilinear_form(phi, x, x);
  const Real scale = std::max(Real(1), phi.norm() * x.norm() * x.norm());
  if (v.real() < Real(-1e-9) * scale) {
    throw PositivityViolation("phi{x,x,s(phi)} = " + std::to_string(static_cast<double>(v.real())));
  }
  SeminormValue<Real> out;
  out.squared = std::max(Real(0), v.real());
  out.imag_residual = std::abs(v.imag());
  out.flagged = out.imag_residual > Real(1e-9) * scale;
  return out;
}

template <typename Real>
Real seminorm(const NormalFunctional<Real>& phi, const Element<Real>& x) {
  return std::sqrt(seminorm_squared(phi, x).squared);
}

/// The pair (phi1, phi2) and its Euclidean seminorm.
template <typename Real>
struct SeminormPair {
  NormalFunctional<Real> phi1;
  NormalFunctional<Real> phi2;

  SeminormPair(NormalFunctional<Real> a, NormalFunctional<Real> b) : phi1(std::move(a)), phi2(std::move(b)) {
    if (!(phi1.space() == phi2.space())) throw DimensionError("pair functionals live on different spaces");
  }
  const TripleSpace& space() const { return phi1.space(); }
  Real total_norm() const { return phi1.norm() + phi2.norm(); }
};

template <typename Real>
Real seminorm_pair(const SeminormPair<Real>& pair, const Element<Real>& x) {
  return std::sqrt(seminorm_squared(pair.phi1, x).squared + seminorm_squared(pair.phi2, x).squared);
}

/// H with H(l,k) = phi{b_k, b_l, s(phi)}, so that c* H c = ||x||_phi^2 for
/// x = sum c_k b_k. Hermitian positive semidefinite.
template <typename Real>
MatrixXc<Real> gram(const NormalFunctional<Real>& phi) {
  const auto bs = basis<Real>(phi.space());
  const int d = static_cast<int>(bs.size());
  MatrixXc<Real> h(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) h(l, k) = sesquilinear_form(phi, bs[static_cast<std::size_t>(k)], bs[static_cast<std::size_t>(l)]);
  return Real(0.5) * (h + h.adjoint());
}

template <typename Real>
MatrixXc<Real> gram(const SeminormPair<Real>& pair) {
  return gram(pair.phi1) + gram(pair.phi2);
}

/// Smallest eigenvalue of a Hermitian matrix.
template <typename Real>
Real min_eigenvalue(const MatrixXc<Real>& h) {
  if (h.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<MatrixXc<Real>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// |‖x_n‖_{phi_n} - ‖x‖_phi| along a sequence.
template <typename Real>
std::vector<Real> seminorm_continuity_probe(const NormalFunctional<Real>& phi, const Element<Real>& x,
                                            const std::vector<NormalFunctional<Real>>& phi_seq,
                                            const std::vector<Element<Real>>& x_seq) {
  if (phi_seq.size() != x_seq.size()) throw DimensionError("sequences differ in length");
  const Real limit = seminorm(phi, x);
  std::vector<Real> out;
  out.reserve(phi_seq.size());
  for (std::size_t n = 0; n < phi_seq.size(); ++n) out.push_back(std::abs(seminorm(phi_seq[n], x_seq[n]) - limit));
  return out;
}

/// (phi + 2^-n Delta, x + 2^-n delta) for n = 0..len-1 with Gaussian
/// directions Delta, delta drawn once.
template <typename Real>
std::pair<std::vector<NormalFunctional<Real>>, std::vector<Element<Real>>> halving_sequence(
    const NormalFunctional<Real>& phi, const Element<Real>& x, int len, Rng& rng) {
  const Element<Real> dphi = random_element<Real>(phi.space(), rng);
  const Element<Real> dx = random_element<Real>(x.space(), rng);
  std::vector<NormalFunctional<Real>> ps;
  std::vector<Element<Real>> xs;
  Real h = 1;
  for (int n = 0; n < len; ++n) {
    ps.emplace_back(phi.rep() + dphi * h);
    xs.push_back(x + dx * h);
    h /= 2;
  }
  return {std::move(ps), std::move(xs)};
}

using NormalFunctionald = NormalFunctional<double>;
using SeminormPaird = SeminormPair<double>;

}  // namespace jbt
