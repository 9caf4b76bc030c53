#include "jbtriple/constructions.hpp"

#include "jbtriple/optimize.hpp"

namespace jbt {

namespace {

void require_leq(const NormalFunctionald& phi, const Tripotentd& p, const char* name) {
  if (!tripotent_leq(phi.support_or_zero(), p)) {
    throw DomainError(std::string("s(") + name + ") <= p fails");
  }
}

void require_projection(const Eigen::MatrixXcd& p, const char* name) {
  if (p.rows() != p.cols()) throw DimensionError(std::string(name) + " must be square");
  const double idem = spectral_norm(Eigen::MatrixXcd(p * p - p));
  const double herm = spectral_norm(Eigen::MatrixXcd(p - p.adjoint()));
  if (idem > 1e-10 || herm > 1e-10) throw DomainError(std::string(name) + " is not an orthogonal projection");
}

void require_unitary(const Eigen::MatrixXcd& u, const char* name) {
  if (u.rows() != u.cols()) throw DimensionError(std::string(name) + " must be square");
  const auto id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  if (spectral_norm(Eigen::MatrixXcd(u.adjoint() * u - id)) > 1e-10) {
    throw DomainError(std::string(name) + " is not unitary");
  }
}

Eigen::MatrixXcd single_block(const NormalFunctionald& phi, const char* what) {
  const auto& s = phi.space();
  if (s.is_sum() || s.factor(0).kind != FactorKind::kRect || !s.factor(0).is_square()) {
    throw DimensionError(std::string(what) + " needs a functional on a square rect(n,n)");
  }
  return phi.rep().block(0);
}

}  // namespace

NormalFunctionald merge_under_common_tripotent(const NormalFunctionald& phi1, const NormalFunctionald& phi2,
                                               const Tripotentd& p) {
  require_leq(phi1, p, "phi1");
  require_leq(phi2, p, "phi2");
  const double total = phi1.norm() + phi2.norm();
  if (total == 0) throw DomainError("phi1 + phi2 = 0");
  return NormalFunctionald((phi1.rep() + phi2.rep()) * (1.0 / total));
}

double peirce2_membership_residual(const NormalFunctionald& phi, const Tripotentd& p) {
  const auto& s = phi.support();
  return (peirce_projection(p, 2, s) - s).norm();
}

NormalFunctionald peirce2_pushforward(const NormalFunctionald& phi, const Tripotentd& p) {
  phi.rep().require_same(p.element());
  if (phi.is_zero()) return phi;
  const double resid = peirce2_membership_residual(phi, p);
  if (resid > 1e-9) {
    throw DomainError("s(phi) is not in the Peirce-2 space of p (residual " + std::to_string(resid) + ")");
  }
  const Tripotentd& u = phi.support_tripotent();
  const auto g = [&](const Elementd& x) { return peirce_projection(u, 2, triple_product(x, p.element(), u.element())); };
  return NormalFunctionald::from_linear_map(phi.space(), [&](const Elementd& x) { return phi(g(x)); });
}

NormalFunctionald combined_witness(const std::vector<NormalFunctionald>& phis, const Tripotentd& p) {
  if (phis.empty()) throw DomainError("combined_witness needs at least one functional");
  double total = 0;
  Elementd rep(p.space());
  for (const auto& phi : phis) {
    total += phi.norm();
    rep += peirce2_pushforward(phi, p).rep();
  }
  if (total == 0) throw DomainError("all functionals vanish");
  return NormalFunctionald(rep * (1.0 / total));
}

NormalFunctionald combined_witness(const NormalFunctionald& phi1, const NormalFunctionald& phi2,
                                   const Tripotentd& p) {
  return combined_witness(std::vector<NormalFunctionald>{phi1, phi2}, p);
}

Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& p) {
  const int r = static_cast<int>(std::lround(p.trace().real()));
  if (r <= 0) return Eigen::MatrixXcd(p.rows(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(p);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(p.rows(), r);
  return q;
}

ShiftDecomposition shift_to_state(const NormalFunctionald& phi, const Eigen::MatrixXcd& p) {
  const Eigen::MatrixXcd f = single_block(phi, "shift_to_state");
  const Eigen::Index n = f.rows();
  if (p.rows() != n) throw DimensionError("projection and functional sizes differ");
  require_projection(p, "p");
  if ((p * f - f).norm() > 1e-9 * std::max(1.0, f.norm())) {
    throw DomainError("the representative of phi does not lie in the corner pV");
  }
  const Eigen::MatrixXcd v = phi.support().block(0);
  const Eigen::MatrixXcd q = v * v.adjoint();
  if (spectral_norm(Eigen::MatrixXcd(p * q - q)) > 1e-9) {
    throw DomainError("the final projection of s(phi) is not below p");
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r = v.adjoint() * v;
  const Eigen::MatrixXcd bq = range_basis(Eigen::MatrixXcd(id - q));
  const Eigen::MatrixXcd br = range_basis(Eigen::MatrixXcd(id - r));
  if (bq.cols() != br.cols()) throw InternalConsistencyError("kernel dimensions of s(phi) disagree");
  const Eigen::MatrixXcd vt = v + bq * br.adjoint();
  ShiftDecomposition out{phi, p, NormalFunctionald(Elementd::single(phi.space(), f * vt.adjoint())), vt.adjoint(),
                         vt};
  return out;
}

Eigen::MatrixXcd corner_closure(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& u1, const Eigen::MatrixXcd& u2) {
  require_projection(p, "p");
  require_unitary(u1, "u1");
  require_unitary(u2, "u2");
  if (u1.rows() != p.rows() || u2.rows() != p.rows()) throw DimensionError("unitaries and p differ in size");
  const Eigen::MatrixXcd bp = range_basis(p);
  const Eigen::Index n = p.rows();
  if (bp.cols() == 0) return Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd m(n, 3 * bp.cols());
  m << bp, u1 * bp, u2 * bp;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double thr = kRankThreshold * s(0);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) >= thr) t += svd.matrixU().col(k) * svd.matrixU().col(k).adjoint();
  }
  return t;
}

NormalFunctionald compress_to_corner(const NormalFunctionald& phi, const Eigen::MatrixXcd& bp,
                                     const Eigen::MatrixXcd& bt) {
  const Eigen::MatrixXcd f = single_block(phi, "compress_to_corner");
  const auto space = TripleSpace::rect(static_cast<int>(bp.cols()), static_cast<int>(bt.cols()));
  return NormalFunctionald(Elementd::single(space, bp.adjoint() * f * bt));
}

CornerReduction corner_reduction_check(const NormalFunctionald& phi1, const NormalFunctionald& phi2,
                                       const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& t,
                                       const BallMaxOptions& options) {
  require_projection(p, "p");
  require_projection(t, "t");
  for (const auto* phi : {&phi1, &phi2}) {
    const Eigen::MatrixXcd s = single_block(*phi, "corner_reduction_check");
    if ((s - p * s * t).norm() > 1e-9 * std::max(1.0, s.norm()) ||
        spectral_norm(Eigen::MatrixXcd(phi->support().block(0) - p * phi->support().block(0) * t)) > 1e-9) {
      throw DomainError("a support does not lie in the corner pVt");
    }
  }
  const Eigen::MatrixXcd bp = range_basis(p);
  const Eigen::MatrixXcd bt = range_basis(t);
  const Eigen::MatrixXcd bm = Eigen::MatrixXcd::Identity(p.rows(), p.cols());
  const SeminormPaird on_m(compress_to_corner(phi1, bp, bm), compress_to_corner(phi2, bp, bm));
  const SeminormPaird on_n(compress_to_corner(phi1, bp, bt), compress_to_corner(phi2, bp, bt));
  const auto rm = ball_max(on_m, options);
  const auto rn = ball_max(on_n, options);
  CornerReduction out;
  out.sup_m = rm.value;
  out.sup_n = rn.value;
  out.residual = std::abs(rm.value - rn.value);
  out.certified = rm.converged && rn.converged;
  return out;
}

NormalFunctionald restrict_to_summand(const NormalFunctionald& phi, int b) {
  return NormalFunctionald(Elementd::single(TripleSpace::of(phi.space().factor(b)), phi.rep().block(b)));
}

Elementd assemble_blocks(const TripleSpace& space, const std::vector<Elementd>& parts) {
  if (static_cast<int>(parts.size()) != space.num_blocks()) throw DimensionError("one part per summand expected");
  std::vector<Eigen::MatrixXcd> blocks;
  for (const auto& x : parts) {
    if (x.num_blocks() != 1) throw DimensionError("parts must be single factors");
    blocks.push_back(x.block(0));
  }
  return Elementd(space, std::move(blocks));
}

std::vector<double> glue_weights(const NormalFunctionald& phi1, const NormalFunctionald& phi2) {
  const double total = phi1.norm() + phi2.norm();
  if (total == 0) throw DomainError("phi1 + phi2 = 0");
  std::vector<double> c;
  for (int b = 0; b < phi1.space().num_blocks(); ++b) {
    c.push_back((restrict_to_summand(phi1, b).norm() + restrict_to_summand(phi2, b).norm()) / total);
  }
  return c;
}

GlueResult glue_sums(const std::vector<NormalFunctionald>& psis, const NormalFunctionald& phi1,
                     const NormalFunctionald& phi2, double G, int samples, Rng& rng) {
  const TripleSpace& space = phi1.space();
  if (static_cast<int>(psis.size()) != space.num_blocks()) throw DimensionError("one witness per summand expected");
  const std::vector<double> c = glue_weights(phi1, phi2);
  GlueResult out{NormalFunctionald(space), c, {}, 0, 0};
  std::vector<Eigen::MatrixXcd> blocks;
  for (int b = 0; b < space.num_blocks(); ++b) {
    const auto& psi = psis[static_cast<std::size_t>(b)];
    if (!(psi.space() == TripleSpace::of(space.factor(b)))) throw DimensionError("witness on the wrong summand");
    const SeminormPaird pair(restrict_to_summand(phi1, b), restrict_to_summand(phi2, b));
    const double mass = pair.total_norm();
    double ratio = 0;
    if (mass > 0) {
      if (std::abs(psi.norm() - 1.0) > 1e-10) {
        throw DomainError("witness for summand " + std::to_string(b) + " is not norm one");
      }
      const WorstRatio w = generalized_worst_ratio(gram(pair), gram(psi));
      ratio = w.infinite ? std::numeric_limits<double>::infinity() : w.ratio / (G * std::sqrt(mass));
      if (ratio > 1.0 + 1e-9) {
        throw DomainError("summand " + std::to_string(b) + " violates its bound with G = " + std::to_string(G) +
                          " (ratio " + std::to_string(ratio) + ")");
      }
    }
    out.summand_ratio.push_back(ratio);
    blocks.push_back(psi.rep().block(0) * c[static_cast<std::size_t>(b)]);
  }
  out.phi = NormalFunctionald(Elementd::projected(space, std::move(blocks)));

  const SeminormPaird pair(phi1, phi2);
  const double total = pair.total_norm();
  const WorstRatio w = generalized_worst_ratio(gram(pair), gram(out.phi));
  out.global_ratio = w.infinite ? std::numeric_limits<double>::infinity() : w.ratio / (G * std::sqrt(total));
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Elementd x = random_element<double>(space, rng);
    const double lhs = seminorm_pair(pair, x);
    const double rhs = G * std::sqrt(total) * seminorm(out.phi, x);
    worst = std::max(worst, lhs - rhs * (1.0 + 1e-9));
  }
  out.sampled_violation = samples > 0 ? worst : 0;
  return out;
}

AtomwiseResult atomwise_maximizer(const SeminormPaird& pair, const BallMaxOptions& options) {
  const TripleSpace& space = pair.space();
  std::vector<Elementd> parts;
  AtomwiseResult out{Elementd(space), 0, {}, {}};
  double sq = 0;
  for (int b = 0; b < space.num_blocks(); ++b) {
    const SeminormPaird atom(restrict_to_summand(pair.phi1, b), restrict_to_summand(pair.phi2, b));
    if (atom.total_norm() == 0) {
      out.atom_values.push_back(0);
      parts.emplace_back(atom.space());
      continue;
    }
    BallMaxOptions o = options;
    o.seed = Rng::splitmix64(options.seed ^ static_cast<std::uint64_t>(b + 1));
    const auto r = ball_max(atom, o);
    if (!r.converged) out.unconverged_atoms.push_back(b);
    out.atom_values.push_back(r.value);
    sq += r.value * r.value;
    parts.push_back(r.maximizer);
  }
  out.maximizer = assemble_blocks(space, parts);
  out.value = std::sqrt(sq);
  return out;
}

}  // namespace jbt
