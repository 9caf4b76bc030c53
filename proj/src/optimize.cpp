#include "jbtriple/optimize.hpp"

namespace jbt {

namespace {

Eigen::MatrixXcd block_lmo(const Factor& f, const Eigen::MatrixXcd& g) {
  if (f.kind == FactorKind::kRect) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int k = std::min(f.rows, f.cols);
    return svd.matrixU().leftCols(k) * svd.matrixV().leftCols(k).adjoint();
  }
  const double smax = spectral_norm(g);
  if (smax == 0) {
    if (f.kind == FactorKind::kSym) return Eigen::MatrixXcd::Identity(f.rows, f.cols);
    return Eigen::MatrixXcd::Zero(f.rows, f.cols);
  }
  return polar_part<double>(g, kRankThreshold * smax).partial_isometry;
}

}  // namespace

Elementd ball_lmo(const Elementd& g) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (int b = 0; b < g.num_blocks(); ++b) blocks.push_back(block_lmo(g.space().factor(b), g.block(b)));
  return Elementd::projected(g.space(), std::move(blocks));
}

double quadratic_value(const Eigen::MatrixXcd& a, const Elementd& x) {
  const Eigen::VectorXcd c = coordinates(x);
  return c.dot(a * c).real();
}

BallMaxResult maximize_quadratic(const TripleSpace& space, const Eigen::MatrixXcd& a, const Elementd& warm,
                                 const BallMaxOptions& options) {
  if (options.multistarts < 1) throw ConfigError("multistarts must be positive");
  if (a.rows() != space.complex_dim() || a.cols() != space.complex_dim()) {
    throw DimensionError("quadratic form does not match the space");
  }
  Rng base(options.seed);
  BallMaxResult best{Elementd(space), -1, false, 0, 0};
  for (int s = 0; s < options.multistarts; ++s) {
    Rng rng = base.fork(static_cast<std::uint64_t>(s));
    Elementd x = s == 0 ? ball_lmo(warm) : random_extreme_point<double>(space, rng).element();
    Eigen::VectorXcd c = coordinates(x);
    double f = c.dot(a * c).real();
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      const Eigen::VectorXcd grad = 2.0 * (a * c);
      const Elementd y = ball_lmo(from_coordinates<double>(space, grad));
      const Eigen::VectorXcd cy = coordinates(y);
      const double fy = cy.dot(a * cy).real();
      if (fy - f < options.tolerance * std::max(1.0, std::abs(f))) {
        if (fy > f) {
          x = y;
          c = cy;
          f = fy;
        }
        converged = true;
        break;
      }
      x = y;
      c = cy;
      f = fy;
    }
    if (f > best.value) {
      best.maximizer = x;
      best.value = f;
      best.converged = converged;
      best.iterations = it;
      best.best_start = s;
    }
  }
  best.value = std::sqrt(std::max(0.0, best.value));
  return best;
}

BallMaxResult ball_max(const SeminormPaird& pair, const BallMaxOptions& options) {
  if (pair.total_norm() == 0) throw DomainError("ball_max needs a nonzero pair");
  return maximize_quadratic(pair.space(), gram(pair), pair.phi1.rep() + pair.phi2.rep(), options);
}

namespace {

Elementd clip_to_ball(const Elementd& x) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& m : x.blocks()) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = svd.singularValues().cwiseMin(1.0);
    blocks.push_back(svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint());
  }
  return Elementd::projected(x.space(), std::move(blocks));
}

}  // namespace

double quadratic_oracle(const TripleSpace& space, const Eigen::MatrixXcd& a, const OracleOptions& options) {
  if (space.real_dim() > 18) {
    throw DomainError("oracle refuses " + space.describe() + ": real dimension " + std::to_string(space.real_dim()) +
                      " exceeds 18");
  }
  Rng rng(options.seed);
  constexpr int kKeep = 4;
  std::vector<std::pair<double, Elementd>> top;
  for (int s = 0; s < options.samples; ++s) {
    Elementd x = random_extreme_point<double>(space, rng).element();
    const double f = quadratic_value(a, x);
    if (static_cast<int>(top.size()) < kKeep || f > top.back().first) {
      top.emplace_back(f, std::move(x));
      std::stable_sort(top.begin(), top.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
      if (static_cast<int>(top.size()) > kKeep) top.pop_back();
    }
  }
  double best = top.empty() ? 0 : top.front().first;
  const int per = options.polish_iterations / kKeep;
  for (auto& [f, x] : top) {
    double step = 0.1;
    int fails = 0;
    for (int it = 0; it < per && step > 1e-9; ++it) {
      Elementd y = clip_to_ball(x + random_element<double>(space, rng) * step);
      const double fy = quadratic_value(a, y);
      if (fy > f) {
        f = fy;
        x = std::move(y);
        fails = 0;
      } else if (++fails >= 30) {
        step *= 0.5;
        fails = 0;
      }
    }
    best = std::max(best, f);
  }
  return std::max(0.0, best);
}

double ball_max_oracle(const SeminormPaird& pair, const OracleOptions& options) {
  if (pair.total_norm() == 0) throw DomainError("oracle needs a nonzero pair");
  return std::sqrt(quadratic_oracle(pair.space(), gram(pair), options));
}

QuotientMap quotient_map(const SeminormPaird& pair) {
  if (pair.total_norm() == 0) throw DomainError("quotient_map needs a nonzero pair");
  QuotientMap q;
  q.gram = gram(pair);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q.gram);
  const Eigen::VectorXd& lam = es.eigenvalues();
  q.min_eigenvalue = lam(0);
  if (q.min_eigenvalue < -1e-9) {
    throw PositivityViolation("pair Gram matrix has eigenvalue " + std::to_string(q.min_eigenvalue));
  }
  const double thr = kRankThreshold * std::max(lam(lam.size() - 1), 0.0);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = lam.size() - 1; k >= 0; --k)
    if (lam(k) > thr) keep.push_back(k);
  q.rank = static_cast<int>(keep.size());
  q.map.resize(q.rank, lam.size());
  for (int r = 0; r < q.rank; ++r) {
    const Eigen::Index k = keep[static_cast<std::size_t>(r)];
    q.map.row(r) = std::sqrt(lam(k)) * es.eigenvectors().col(k).adjoint();
  }
  return q;
}

HilbertOperator::HilbertOperator(std::vector<NormalFunctionald> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DimensionError("a Hilbert operator needs at least one row");
  for (const auto& r : rows_)
    if (!(r.space() == rows_.front().space())) throw DimensionError("rows live on different spaces");
  const auto bs = basis<double>(space());
  c_.resize(dim(), static_cast<Eigen::Index>(bs.size()));
  for (int i = 0; i < dim(); ++i)
    for (std::size_t k = 0; k < bs.size(); ++k) c_(i, static_cast<Eigen::Index>(k)) = rows_[static_cast<std::size_t>(i)](bs[k]);
  a_ = c_.adjoint() * c_;
}

Eigen::VectorXcd HilbertOperator::operator()(const Elementd& x) const {
  Eigen::VectorXcd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = rows_[static_cast<std::size_t>(i)](x);
  return v;
}

NormAttainment operator_norm_attain(const HilbertOperator& t, const BallMaxOptions& options) {
  Elementd warm(t.space());
  for (const auto& r : t.rows()) warm += r.rep();
  const auto res = maximize_quadratic(t.space(), t.gram(), warm, options);
  if (res.value == 0) throw DomainError("T = 0");
  NormAttainment out{res.maximizer, res.value, false, false, res.converged};

  std::vector<Eigen::MatrixXcd> blocks;
  bool snappable = true;
  for (const auto& m : res.maximizer.blocks()) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      const double s = svd.singularValues()(k);
      if (std::abs(s - 1.0) <= 1e-6) {
        e += svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
      } else if (s > 1e-6) {
        snappable = false;
      }
    }
    blocks.push_back(std::move(e));
  }
  if (!snappable) return out;
  try {
    const auto e = Tripotentd::certify(Elementd::projected(t.space(), std::move(blocks)), 1e-9);
    const double v = t(e.element()).norm();
    if (std::abs(v - res.value) > 1e-6 * std::max(1.0, res.value)) return out;
    out.e = e.element();
    out.norm = std::max(v, res.value);
    out.snapped = true;
    out.complete = true;
    for (int b = 0; b < e.space().num_blocks(); ++b) {
      const auto& f = e.space().factor(b);
      const int r = e.initial_projection(b).trace().real() > 0 ? static_cast<int>(std::lround(e.initial_projection(b).trace().real())) : 0;
      if (r != f.rows && r != f.cols) out.complete = false;
    }
  } catch (const DomainError&) {
  }
  return out;
}

WorstRatio generalized_worst_ratio(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  WorstRatio out;
  const Eigen::Index d = a.rows();
  out.argmax = Eigen::VectorXcd::Zero(d);
  if (d == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(b);
  const Eigen::VectorXd& lam = eb.eigenvalues();
  const double lmax = std::max(lam(d - 1), 0.0);
  const double anorm = spectral_norm(a);
  if (anorm == 0) return out;
  const double thr = 1e-10 * lmax;
  std::vector<Eigen::Index> range;
  std::vector<Eigen::Index> null;
  for (Eigen::Index k = 0; k < d; ++k) (lmax > 0 && lam(k) > thr ? range : null).push_back(k);
  if (!null.empty()) {
    Eigen::MatrixXcd n(d, static_cast<Eigen::Index>(null.size()));
    for (std::size_t j = 0; j < null.size(); ++j) n.col(static_cast<Eigen::Index>(j)) = eb.eigenvectors().col(null[j]);
    const Eigen::MatrixXcd an = n.adjoint() * a * n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(0.5 * (an + an.adjoint()));
    const Eigen::Index last = ea.eigenvalues().size() - 1;
    if (ea.eigenvalues()(last) > 1e-10 * anorm) {
      out.infinite = true;
      out.ratio = std::numeric_limits<double>::infinity();
      out.argmax = n * ea.eigenvectors().col(last);
      return out;
    }
  }
  Eigen::MatrixXcd w(d, static_cast<Eigen::Index>(range.size()));
  for (std::size_t j = 0; j < range.size(); ++j) {
    const Eigen::Index k = range[j];
    w.col(static_cast<Eigen::Index>(j)) = eb.eigenvectors().col(k) / std::sqrt(lam(k));
  }
  const Eigen::MatrixXcd m = w.adjoint() * a * w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(0.5 * (m + m.adjoint()));
  const Eigen::Index last = em.eigenvalues().size() - 1;
  out.ratio = std::sqrt(std::max(0.0, em.eigenvalues()(last)));
  out.argmax = w * em.eigenvectors().col(last);
  return out;
}

BilinearForm::BilinearForm(TripleSpace left, TripleSpace right, Eigen::MatrixXcd c)
    : left_(std::move(left)), right_(std::move(right)), c_(std::move(c)) {
  if (c_.rows() != left_.complex_dim() || c_.cols() != right_.complex_dim()) {
    throw DimensionError("bilinear coefficient matrix does not match the spaces");
  }
}

std::complex<double> BilinearForm::operator()(const Elementd& x, const Elementd& y) const {
  if (!(x.space() == left_) || !(y.space() == right_)) throw DimensionError("arguments of V in the wrong spaces");
  return coordinates(x).transpose() * c_ * coordinates(y);
}

BilinearNorm bilinear_norm(const BilinearForm& v, const BallMaxOptions& options) {
  const auto& c = v.coefficients();
  Rng base(options.seed);
  BilinearNorm best{-1, Elementd(v.left()), Elementd(v.right())};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (int s = 0; s < options.multistarts; ++s) {
    Rng rng = base.fork(static_cast<std::uint64_t>(s));
    Elementd y = s == 0 ? ball_lmo(from_coordinates<double>(v.right(), svd.matrixV().col(0)))
                        : random_extreme_point<double>(v.right(), rng).element();
    Elementd x(v.left());
    double val = -1;
    for (int it = 0; it < options.max_iterations; ++it) {
      const Eigen::VectorXcd wx = c * coordinates(y);
      x = ball_lmo(from_coordinates<double>(v.left(), Eigen::VectorXcd(wx.conjugate())));
      const Eigen::VectorXcd wy = c.transpose() * coordinates(x);
      const Elementd ny = ball_lmo(from_coordinates<double>(v.right(), Eigen::VectorXcd(wy.conjugate())));
      const double nv = std::abs(v(x, ny));
      y = ny;
      if (nv - val < options.tolerance * std::max(1.0, nv)) {
        val = std::max(val, nv);
        break;
      }
      val = nv;
    }
    if (val > best.norm) {
      best.norm = val;
      best.x = x;
      best.y = y;
    }
  }
  return best;
}

namespace {

struct Whitening {
  Eigen::MatrixXcd w;     // columns span range(Q), scaled so w* Q w = I
  Eigen::MatrixXcd null;  // orthonormal basis of ker(Q)
};

Whitening whiten(const Eigen::MatrixXcd& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q);
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Eigen::Index d = lam.size();
  const double lmax = d ? std::max(lam(d - 1), 0.0) : 0.0;
  std::vector<Eigen::Index> r;
  std::vector<Eigen::Index> n;
  for (Eigen::Index k = 0; k < d; ++k) (lmax > 0 && lam(k) > 1e-10 * lmax ? r : n).push_back(k);
  Whitening out{Eigen::MatrixXcd(d, static_cast<Eigen::Index>(r.size())),
                Eigen::MatrixXcd(d, static_cast<Eigen::Index>(n.size()))};
  for (std::size_t j = 0; j < r.size(); ++j)
    out.w.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(r[j]) / std::sqrt(lam(r[j]));
  for (std::size_t j = 0; j < n.size(); ++j) out.null.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(n[j]);
  return out;
}

}  // namespace

PairWorstRatio bilinear_worst_ratio(const BilinearForm& v, const NormalFunctionald& phi, const NormalFunctionald& psi) {
  if (!(phi.space() == v.left()) || !(psi.space() == v.right())) throw DimensionError("witnesses on the wrong spaces");
  const auto& c = v.coefficients();
  PairWorstRatio out;
  out.x = Eigen::VectorXcd::Zero(c.rows());
  out.y = Eigen::VectorXcd::Zero(c.cols());
  const double cn = spectral_norm(c);
  if (cn == 0) return out;
  const Whitening l = whiten(gram(phi));
  const Whitening r = whiten(gram(psi));
  if (l.null.cols() > 0) {
    const Eigen::MatrixXcd m = l.null.transpose() * c;
    if (spectral_norm(m) > 1e-10 * cn) {
      out.infinite = true;
      out.ratio = std::numeric_limits<double>::infinity();
      Eigen::JacobiSVD<Eigen::MatrixXcd> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      out.x = l.null * s.matrixU().col(0).conjugate();
      out.y = s.matrixV().col(0);
      return out;
    }
  }
  if (r.null.cols() > 0) {
    const Eigen::MatrixXcd m = c * r.null;
    if (spectral_norm(m) > 1e-10 * cn) {
      out.infinite = true;
      out.ratio = std::numeric_limits<double>::infinity();
      Eigen::JacobiSVD<Eigen::MatrixXcd> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      out.x = s.matrixU().col(0).conjugate();
      out.y = r.null * s.matrixV().col(0);
      return out;
    }
  }
  const Eigen::MatrixXcd m = l.w.transpose() * c * r.w;
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXcd> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.ratio = s.singularValues()(0);
  out.x = l.w * s.matrixU().col(0).conjugate();
  out.y = r.w * s.matrixV().col(0);
  return out;
}

}  // namespace jbt
