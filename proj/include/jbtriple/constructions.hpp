#pragma once

#include <optional>

#include "jbtriple/functional.hpp"

namespace jbt {

/// (phi1 + phi2) / (||phi1|| + ||phi2||). Requires s(phi1), s(phi2) <= p.
NormalFunctionald merge_under_common_tripotent(const NormalFunctionald& phi1, const NormalFunctionald& phi2,
                                               const Tripotentd& p);

/// phi o G with G(x) = P2(u){x,p,u}, u = s(phi). Requires s(phi) in E2(p).
/// When p is a projection of a unital ambient this is P2(u)(x o u).
NormalFunctionald peirce2_pushforward(const NormalFunctionald& phi, const Tripotentd& p);

/// (phi1~ + phi2~) / (||phi1|| + ||phi2||) with the pushforwards above.
NormalFunctionald combined_witness(const NormalFunctionald& phi1, const NormalFunctionald& phi2,
                                   const Tripotentd& p);

/// Same, for any number of functionals: sum_i phi_i~ / sum_i ||phi_i||.
NormalFunctionald combined_witness(const std::vector<NormalFunctionald>& phis, const Tripotentd& p);

/// Residual ||P2(p) s(phi) - s(phi)||; zero for phi = 0.
double peirce2_membership_residual(const NormalFunctionald& phi, const Tripotentd& p);

struct ShiftDecomposition {
  NormalFunctionald phi;
  Eigen::MatrixXcd p;
  NormalFunctionald psi;      // positive on pVp, psi(x) = phi(x v~)
  Eigen::MatrixXcd u;         // v~*
  Eigen::MatrixXcd v_tilde;   // unitary completion of s(phi)
};

/// phi is a functional on rect(n,n) whose representative lies in pV
/// (p F = F). Builds the positive functional psi and unitary u with
/// ||x||_phi^2 = (psi(xx*) + psi(p u* x* x u p)) / 2 on pV.
ShiftDecomposition shift_to_state(const NormalFunctionald& phi, const Eigen::MatrixXcd& p);

/// Orthonormal basis of the range of a projection (column-pivoted QR).
Eigen::MatrixXcd range_basis(const Eigen::MatrixXcd& p);

/// Projection onto span(range p, range u1 p u1*, range u2 p u2*).
Eigen::MatrixXcd corner_closure(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& u1, const Eigen::MatrixXcd& u2);

/// Restriction of a functional on rect(n,n) to the corner p V t, realized
/// on rect(rank p, rank t) through x -> Bp* x Bt.
NormalFunctionald compress_to_corner(const NormalFunctionald& phi, const Eigen::MatrixXcd& bp,
                                     const Eigen::MatrixXcd& bt);

struct CornerReduction {
  double sup_m = 0;
  double sup_n = 0;
  double residual = 0;
  bool certified = true;  // both optimizer runs converged
};

struct BallMaxOptions;

/// Compares the pair-seminorm maxima over the unit balls of M = pV and
/// N = pVt. Both supports must lie in N.
CornerReduction corner_reduction_check(const NormalFunctionald& phi1, const NormalFunctionald& phi2,
                                       const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& t,
                                       const BallMaxOptions& options);

/// The functional on summand `b` of a sum space.
NormalFunctionald restrict_to_summand(const NormalFunctionald& phi, int b);

/// c_b = (||phi1_b|| + ||phi2_b||) / (||phi1|| + ||phi2||).
std::vector<double> glue_weights(const NormalFunctionald& phi1, const NormalFunctionald& phi2);

struct GlueResult {
  NormalFunctionald phi;
  std::vector<double> weights;
  std::vector<double> summand_ratio;  // exact sup of pair / (G sqrt(mass) psi) per summand
  double global_ratio = 0;            // same for the glued functional, exact
  double sampled_violation = 0;       // max over samples of lhs - rhs
};

/// Glues norm-one summand witnesses psis[b] into phi = sum_b c_b psi_b.
/// Throws DomainError naming the summand whose bound with constant G fails.
GlueResult glue_sums(const std::vector<NormalFunctionald>& psis, const NormalFunctionald& phi1,
                     const NormalFunctionald& phi2, double G, int samples, Rng& rng);

struct AtomwiseResult {
  Elementd maximizer;
  double value = 0;
  std::vector<double> atom_values;
  std::vector<int> unconverged_atoms;
};

AtomwiseResult atomwise_maximizer(const SeminormPaird& pair, const BallMaxOptions& options);

/// Places per-summand elements into the sum space.
Elementd assemble_blocks(const TripleSpace& space, const std::vector<Elementd>& parts);

}  // namespace jbt
