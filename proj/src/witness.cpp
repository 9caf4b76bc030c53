#include <limits>

#include "jbtriple/optimize.hpp"

namespace jbt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDenominatorFloor = 1e-14;

Elementd unit_element(const TripleSpace& space) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& f : space.factors()) blocks.push_back(Eigen::MatrixXcd::Identity(f.rows, f.cols));
  return Elementd(space, std::move(blocks));
}

NormalFunctionald normalized(const Elementd& rep) {
  NormalFunctionald f(rep);
  if (f.is_zero()) return f;
  return NormalFunctionald(rep * (1.0 / f.norm()));
}

/// U S^k V* per block.
Elementd sharpen(const Elementd& r, int k) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& m : r.blocks()) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = svd.singularValues().array().pow(k);
    blocks.push_back(svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint());
  }
  return Elementd::projected(r.space(), std::move(blocks));
}

double exact_ratio(const HilbertOperator& t, double tn, const NormalFunctionald& psi, WorstRatio* detail = nullptr) {
  WorstRatio w = generalized_worst_ratio(t.gram(), gram(psi));
  const double r = w.infinite ? kInf : w.ratio / tn;
  if (detail) *detail = std::move(w);
  return r;
}

double one_ratio(const HilbertOperator& t, double tn, const NormalFunctionald& psi, const Elementd& x) {
  const double num = t(x).norm();
  const double den = seminorm(psi, x);
  if (den <= kDenominatorFloor * std::max(1.0, x.norm())) return num <= 1e-9 * std::max(1.0, x.norm()) ? 0.0 : kInf;
  return num / (tn * den);
}

double sampled_ratio(const HilbertOperator& t, double tn, const NormalFunctionald& psi, int samples, Rng& rng,
                     const Elementd* adversarial) {
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const Elementd x = random_ball_point<double>(t.space(), rng);
    worst = std::max(worst, one_ratio(t, tn, psi, x));
  }
  if (adversarial) worst = std::max(worst, one_ratio(t, tn, psi, *adversarial));
  return worst;
}

/// Functionals with support below p form a face on which ||x||_psi^2 is
/// affine, so the Gram of a mixture is the mixture of Grams.
struct Face {
  const HilbertOperator* t;
  double tn;
  Tripotentd p;
  std::vector<NormalFunctionald> cands;
  std::vector<Eigen::MatrixXcd> grams;

  void add(const NormalFunctionald& c) {
    if (c.is_zero()) return;
    if (!tripotent_leq(c.support_or_zero(), p)) return;
    cands.push_back(c);
    grams.push_back(gram(c));
  }

  Eigen::MatrixXcd mix(const Eigen::VectorXd& w) const {
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(grams.front().rows(), grams.front().cols());
    for (Eigen::Index j = 0; j < w.size(); ++j)
      if (w(j) != 0) q += w(j) * grams[static_cast<std::size_t>(j)];
    return q;
  }

  double ratio(const Eigen::VectorXd& w, WorstRatio* detail = nullptr) const {
    WorstRatio r = generalized_worst_ratio(t->gram(), mix(w));
    const double v = r.infinite ? kInf : r.ratio / tn;
    if (detail) *detail = std::move(r);
    return v;
  }

  NormalFunctionald functional(const Eigen::VectorXd& w) const {
    Elementd rep(p.space());
    for (Eigen::Index j = 0; j < w.size(); ++j)
      if (w(j) != 0) rep += cands[static_cast<std::size_t>(j)].rep() * w(j);
    return NormalFunctionald(rep);
  }
};

/// Frank-Wolfe on the simplex of candidate weights, adding P2(p){x,x,p}
/// (and a sharpened copy) at each worst direction x.
Eigen::VectorXd refine(Face& face, int rounds, double target) {
  const std::size_t n0 = face.cands.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n0));
  double best = kInf;
  for (std::size_t j = 0; j < n0; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n0));
    e(static_cast<Eigen::Index>(j)) = 1;
    const double r = face.ratio(e);
    if (r < best) {
      best = r;
      w = e;
    }
  }
  const TripleSpace& space = face.p.space();
  for (int round = 0; round < rounds && best > target; ++round) {
    WorstRatio detail;
    face.ratio(w, &detail);
    const Elementd x = from_coordinates<double>(space, detail.argmax);
    const Elementd r = peirce_projection(face.p, 2, triple_product(x, x, face.p.element()));
    for (int k : {1, 8}) {
      const auto c = normalized(sharpen(r, k));
      const std::size_t before = face.cands.size();
      face.add(c);
      if (face.cands.size() > before) {
        w.conservativeResize(w.size() + 1);
        w(w.size() - 1) = 0;
      }
    }
    const Eigen::VectorXcd& v = detail.argmax;
    Eigen::Index j = 0;
    double score = -1;
    for (std::size_t c = 0; c < face.grams.size(); ++c) {
      const double s = v.dot(face.grams[c] * v).real();
      if (s > score) {
        score = s;
        j = static_cast<Eigen::Index>(c);
      }
    }
    auto along = [&](double g) {
      Eigen::VectorXd m = (1 - g) * w;
      m(j) += g;
      return m;
    };
    double lo = 0, hi = 1;
    const double phi = 0.5 * (std::sqrt(5.0) - 1);
    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    double fa = face.ratio(along(a)), fb = face.ratio(along(b));
    for (int it = 0; it < 30; ++it) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - phi * (hi - lo);
        fa = face.ratio(along(a));
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + phi * (hi - lo);
        fb = face.ratio(along(b));
      }
    }
    const double g = fa <= fb ? a : b;
    const double fg = std::min(fa, fb);
    const double f1 = face.ratio(along(1.0));
    const double chosen = f1 < fg ? 1.0 : g;
    const double fc = std::min(f1, fg);
    if (!(fc < best * (1 - 1e-12))) break;
    w = along(chosen);
    best = fc;
  }
  return w;
}

}  // namespace

LittleGiResult little_gi_witness(const HilbertOperator& t, double K, const LittleGiOptions& options) {
  const TripleSpace& space = t.space();
  const NormAttainment na = operator_norm_attain(t, options.ball);
  const double tn = na.norm;
  const double bound = K * (1 + 1e-6);

  Elementd rep(space);
  for (const auto& row : t.rows()) rep += row.rep() * row(na.e);
  const NormalFunctionald ansatz = normalized(rep * (1.0 / (tn * tn)));

  LittleGiResult out{ansatz, false, kInf, kInf, kInf, false, kInf, "ansatz", tn};
  out.ansatz_ratio = exact_ratio(t, tn, ansatz);

  Elementd pe = space.is_unital() ? unit_element(space) : ball_lmo(ansatz.rep());
  Tripotentd p = Tripotentd::certify(pe, 1e-9);
  if (!tripotent_leq(ansatz.support_or_zero(), p)) p = ansatz.support_tripotent();

  Face face{&t, tn, p, {}, {}};
  face.add(peirce2_pushforward(ansatz, p));
  std::vector<NormalFunctionald> admissible;
  for (const auto& row : t.rows()) {
    if (row.is_zero() || peirce2_membership_residual(row, p) > 1e-9) continue;
    admissible.push_back(row);
    face.add(normalized(peirce2_pushforward(row, p).rep()));
  }
  if (!admissible.empty()) face.add(combined_witness(admissible, p));
  face.add(normalized(p.element()));

  const std::size_t initial = face.cands.size();
  const Eigen::VectorXd w = refine(face, options.refinement_rounds, K);
  const NormalFunctionald constructive = face.functional(w);
  const double constructive_ratio = exact_ratio(t, tn, constructive);

  const bool use_ansatz =
      !options.constructive_only && (out.ansatz_ratio <= bound || out.ansatz_ratio <= constructive_ratio);
  out.psi = use_ansatz ? ansatz : constructive;
  out.path = use_ansatz ? "ansatz" : (face.cands.size() > initial ? "refined" : "constructive");
  out.constructive_ratio = constructive_ratio;

  WorstRatio detail;
  out.worst_ratio = exact_ratio(t, tn, out.psi, &detail);
  const Elementd adversarial = from_coordinates<double>(space, detail.argmax);
  Rng rng(options.seed);
  out.sampled_ratio = sampled_ratio(t, tn, out.psi, options.samples, rng, &adversarial);
  out.certified = out.worst_ratio <= bound && out.sampled_ratio <= bound;

  if (out.ansatz_ratio <= bound) {
    WorstRatio ad;
    exact_ratio(t, tn, ansatz, &ad);
    const Elementd xa = from_coordinates<double>(space, ad.argmax);
    Rng arng(Rng::splitmix64(options.seed));
    out.ansatz_certified = sampled_ratio(t, tn, ansatz, options.samples, arng, &xa) <= bound;
  }
  return out;
}

BigGiResult big_gi_witness(const BilinearForm& v, double G, const LittleGiOptions& options) {
  const auto& c = v.coefficients();
  const BilinearNorm vn = bilinear_norm(v, options.ball);
  if (vn.norm <= 0) throw DomainError("V = 0");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  std::vector<NormalFunctionald> trows, srows;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < kRankThreshold * s(0)) break;
    const double r = std::sqrt(s(i));
    const Eigen::VectorXcd tu = (r * svd.matrixU().col(i)).conjugate();
    const Eigen::VectorXcd sw = r * svd.matrixV().col(i);
    trows.emplace_back(from_coordinates<double>(v.left(), tu));
    srows.emplace_back(from_coordinates<double>(v.right(), sw));
  }
  const double k_little = std::sqrt(G / (2 * (1 + 2 * std::sqrt(3.0))));
  LittleGiOptions lo = options;
  lo.seed = Rng::splitmix64(options.seed ^ 1);
  const auto lt = little_gi_witness(HilbertOperator(trows), k_little, lo);
  lo.seed = Rng::splitmix64(options.seed ^ 2);
  const auto ls = little_gi_witness(HilbertOperator(srows), k_little, lo);

  BigGiResult out{lt.psi, ls.psi, false, G <= kBigGiThreshold, kInf, kInf, vn.norm};
  const PairWorstRatio exact = bilinear_worst_ratio(v, out.phi, out.psi);
  out.worst_ratio = exact.infinite ? kInf : exact.ratio / vn.norm;

  auto pair_ratio = [&](const Elementd& x, const Elementd& y) {
    const double num = std::abs(v(x, y));
    const double dx = seminorm(out.phi, x);
    const double dy = seminorm(out.psi, y);
    if (dx <= kDenominatorFloor || dy <= kDenominatorFloor) return num <= 1e-9 ? 0.0 : kInf;
    return num / (vn.norm * dx * dy);
  };
  Rng rng(options.seed);
  double worst = pair_ratio(from_coordinates<double>(v.left(), exact.x), from_coordinates<double>(v.right(), exact.y));
  for (int k = 0; k < options.samples; ++k) {
    const Elementd x = random_ball_point<double>(v.left(), rng);
    const Elementd y = random_ball_point<double>(v.right(), rng);
    worst = std::max(worst, pair_ratio(x, y));
  }
  out.sampled_ratio = worst;
  const double bound = G * (1 + 1e-6);
  out.certified = out.worst_ratio <= bound && out.sampled_ratio <= bound;
  return out;
}

namespace {

HilbertOperator operator_from_coefficients(const TripleSpace& space, const Eigen::MatrixXcd& c) {
  std::vector<NormalFunctionald> rows;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    rows.emplace_back(from_coordinates<double>(space, Eigen::VectorXcd(c.row(i).adjoint())));
  }
  return HilbertOperator(std::move(rows));
}

Elementd perturb(const Elementd& rep, double step, Rng& rng) {
  return rep + random_element<double>(rep.space(), rng) * step;
}

double search_little(const ConstantInstance& inst) {
  const HilbertOperator t = operator_from_coefficients(inst.space, inst.operator_);
  Rng rng(inst.seed);
  LittleGiOptions o;
  o.samples = 0;
  o.seed = rng.next();
  o.ball.seed = rng.next();
  const auto start = little_gi_witness(t, 1.0, o);
  const double tn = start.t_norm;
  NormalFunctionald psi = start.psi;
  double r = start.worst_ratio;
  double step = 0.3;
  int fails = 0;
  for (int it = 0; it < inst.iterations; ++it) {
    const NormalFunctionald cand = normalized(perturb(psi.rep(), step, rng));
    if (cand.is_zero()) continue;
    const double rc = exact_ratio(t, tn, cand);
    if (rc < r) {
      r = rc;
      psi = cand;
      fails = 0;
      step = std::min(1.0, step * 1.2);
    } else if (++fails >= 20) {
      step *= 0.5;
      fails = 0;
    }
  }
  return r;
}

double search_big(const ConstantInstance& inst) {
  const BilinearForm v(inst.space, inst.right, inst.operator_);
  Rng rng(inst.seed);
  LittleGiOptions o;
  o.samples = 0;
  o.seed = rng.next();
  o.ball.seed = rng.next();
  const auto start = big_gi_witness(v, kBigGiThreshold, o);
  const double vn = start.v_norm;
  NormalFunctionald phi = start.phi;
  NormalFunctionald psi = start.psi;
  auto ratio = [&](const NormalFunctionald& a, const NormalFunctionald& b) {
    const auto w = bilinear_worst_ratio(v, a, b);
    return w.infinite ? kInf : w.ratio / vn;
  };
  double r = ratio(phi, psi);
  double step = 0.3;
  int fails = 0;
  for (int it = 0; it < inst.iterations; ++it) {
    const bool left = (it % 2) == 0;
    const NormalFunctionald cand = normalized(perturb(left ? phi.rep() : psi.rep(), step, rng));
    if (cand.is_zero()) continue;
    const double rc = left ? ratio(cand, psi) : ratio(phi, cand);
    if (rc < r) {
      r = rc;
      (left ? phi : psi) = cand;
      fails = 0;
      step = std::min(1.0, step * 1.2);
    } else if (++fails >= 20) {
      step *= 0.5;
      fails = 0;
    }
  }
  return r;
}

}  // namespace

double replay_instance(const ConstantInstance& instance) {
  return instance.mode == GiMode::kLittle ? search_little(instance) : search_big(instance);
}

ConstantEstimate constant_estimate(GiMode mode, const std::vector<TripleSpace>& spaces, int budget,
                                   std::uint64_t seed) {
  if (spaces.empty()) throw ConfigError("constant_estimate needs at least one space");
  if (budget < 1) throw ConfigError("budget must be positive");
  Rng base(seed);
  ConstantEstimate out;
  for (const auto& space : spaces) {
    const int d = space.complex_dim();
    const int count = mode == GiMode::kLittle ? 3 : 2;
    for (int k = 0; k < count; ++k) {
      ConstantInstance inst;
      inst.mode = mode;
      inst.space = space;
      inst.right = space;
      inst.seed = base.next();
      Rng gen(Rng::splitmix64(inst.seed));
      if (mode == GiMode::kLittle) {
        if (k == 0) {
          inst.operator_ = Eigen::MatrixXcd::Identity(d, d);
        } else {
          const int rows = gen.uniform_int(1, std::min(4, d));
          inst.operator_ = random_gaussian<double>(rows, d, gen);
        }
      } else {
        inst.operator_ = random_gaussian<double>(d, d, gen);
      }
      out.instances.push_back(std::move(inst));
    }
  }
  const int per = std::max(1, budget / static_cast<int>(out.instances.size()));
  for (auto& inst : out.instances) {
    inst.iterations = per;
    inst.bound = replay_instance(inst);
    out.lower_bound = std::max(out.lower_bound, inst.bound);
  }
  return out;
}

}  // namespace jbt
