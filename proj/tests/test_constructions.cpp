#include <gtest/gtest.h>

#include "jbtriple/constructions.hpp"
#include "jbtriple/optimize.hpp"
#include "jbtriple/random.hpp"

using namespace jbt;

namespace {

const TripleSpace kR22 = TripleSpace::rect(2, 2);

Eigen::MatrixXcd U(int n, int i, int j) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
  e(i, j) = 1;
  return e;
}

Elementd E(int i, int j) { return Elementd::single(kR22, U(2, i, j)); }

Tripotentd identity(int n) {
  return Tripotentd::certify(Elementd::single(TripleSpace::rect(n, n), Eigen::MatrixXcd::Identity(n, n)));
}

NormalFunctionald positive_below(const Tripotentd& p, Rng& rng) {
  const Elementd y = random_element<double>(p.space(), rng);
  return NormalFunctionald(peirce_projection(p, 2, triple_product(y, y, p.element())));
}

}  // namespace

TEST(Merge, WorkedExample) {
  const NormalFunctionald p1(E(0, 0)), p2(E(1, 1));
  const auto psi = merge_under_common_tripotent(p1, p2, identity(2));
  EXPECT_LT((psi.rep() - (E(0, 0) + E(1, 1)) * 0.5).norm(), 1e-15);
  EXPECT_NEAR(seminorm_pair(SeminormPaird(p1, p2), E(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::sqrt(2.0) * seminorm(psi, E(0, 1)), 1.0, 1e-15);
}

TEST(Merge, EqualStates) {
  const NormalFunctionald phi(E(0, 0));
  const auto psi = merge_under_common_tripotent(phi, phi, Tripotentd::certify(E(0, 0)));
  EXPECT_LT((psi.rep() - phi.rep()).norm(), 1e-15);
  EXPECT_THROW(merge_under_common_tripotent(phi, NormalFunctionald(E(1, 1)), Tripotentd::certify(E(0, 0))),
               DomainError);
}

TEST(Merge, RandomEquality) {
  Rng rng(31);
  for (const char* name : {"rect(3,3)", "rect(2,3)", "sym(3)", "antisym(4)"}) {
    const auto space = TripleSpace::parse(name);
    for (int i = 0; i < 30; ++i) {
      const auto p = random_extreme_point<double>(space, rng);
      const auto phi1 = positive_below(p, rng);
      const auto phi2 = positive_below(p, rng);
      const auto psi = merge_under_common_tripotent(phi1, phi2, p);
      const Elementd x = random_element<double>(space, rng);
      EXPECT_NEAR(seminorm_pair(SeminormPaird(phi1, phi2), x),
                  std::sqrt(phi1.norm() + phi2.norm()) * seminorm(psi, x), 1e-10 * x.norm())
          << name;
    }
  }
}

TEST(Pushforward, Examples) {
  const auto id = identity(2);
  const NormalFunctionald e11(E(0, 0));
  EXPECT_LT((peirce2_pushforward(e11, id).rep() - e11.rep()).norm(), 1e-15);

  const NormalFunctionald e12(E(0, 1));
  const auto t = peirce2_pushforward(e12, id);
  EXPECT_LT((t.rep() - (E(0, 0) + E(1, 1)) * 0.5).norm(), 1e-15);
  EXPECT_NEAR(t.norm(), 1.0, 1e-15);
  EXPECT_LT((t.support() - id.element()).norm(), 1e-15);
  EXPECT_NEAR(seminorm_squared(e12, E(0, 0)).squared, 0.5, 1e-15);
  EXPECT_NEAR(2 * seminorm_squared(t, E(0, 0)).squared, 1.0, 1e-15);

  EXPECT_THROW(peirce2_pushforward(e12, Tripotentd::certify(E(0, 0))), DomainError);
}

TEST(Pushforward, ExactRatioOnRandomFunctionals) {
  Rng rng(41);
  for (int n = 2; n <= 4; ++n) {
    const auto space = TripleSpace::rect(n, n);
    for (int i = 0; i < 20; ++i) {
      const NormalFunctionald phi(random_element<double>(space, rng));
      const auto tilde = peirce2_pushforward(phi, identity(n));
      EXPECT_NEAR(tilde.norm(), phi.norm(), 1e-12 * phi.norm());
      const auto w = generalized_worst_ratio(gram(phi), gram(tilde));
      ASSERT_FALSE(w.infinite);
      EXPECT_LE(w.ratio, std::sqrt(2.0) * (1 + 1e-10));
    }
  }
}

TEST(CombinedWitness, Examples) {
  const auto psi = combined_witness(NormalFunctionald(E(0, 1)), NormalFunctionald(E(1, 0)), identity(2));
  EXPECT_LT((psi.rep() - (E(0, 0) + E(1, 1)) * 0.5).norm(), 1e-15);

  Rng rng(5);
  const auto space = TripleSpace::rect(3, 3);
  const auto p = identity(3);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const NormalFunctionald a(random_element<double>(space, rng));
    const NormalFunctionald b(random_element<double>(space, rng));
    const auto w = combined_witness(a, b, p);
    const SeminormPaird pair(a, b);
    const auto r = generalized_worst_ratio(gram(pair), gram(w));
    worst = std::max(worst, r.ratio / std::sqrt(2 * (a.norm() + b.norm())));
  }
  EXPECT_LE(worst, 1 + 1e-10);
}

TEST(Shift, WorkedExample) {
  Eigen::MatrixXcd p = U(2, 0, 0);
  const auto d = shift_to_state(NormalFunctionald(E(0, 1)), p);
  EXPECT_LT((d.psi.rep().block(0) - p).norm(), 1e-15);
  EXPECT_NEAR(std::abs(d.v_tilde(0, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(d.v_tilde(1, 0)), 1.0, 1e-15);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(2, 2);
  x(0, 0) = 1;
  x(0, 1) = 2;
  const Eigen::MatrixXcd up = d.u * p;
  const double rhs = 0.5 * (d.psi(Elementd::single(kR22, x * x.adjoint())) +
                            d.psi(Elementd::single(kR22, up.adjoint() * x.adjoint() * x * up)))
                               .real();
  EXPECT_NEAR(seminorm_squared(d.phi, Elementd::single(kR22, x)).squared, 4.5, 1e-14);
  EXPECT_NEAR(rhs, 4.5, 1e-14);
}

TEST(Shift, RejectsOutsideCorner) {
  EXPECT_THROW(shift_to_state(NormalFunctionald(E(1, 1)), U(2, 0, 0)), DomainError);
}

TEST(Corner, Closure) {
  const Eigen::MatrixXcd p = U(3, 0, 0);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  EXPECT_LT((corner_closure(p, id, id) - p).norm(), 1e-14);
  Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(3, 3);
  swap(0, 1) = swap(1, 0) = swap(2, 2) = 1;
  EXPECT_LT((corner_closure(p, swap, id) - (U(3, 0, 0) + U(3, 1, 1))).norm(), 1e-14);
}

TEST(Corner, ReductionExample) {
  const auto space = TripleSpace::rect(3, 3);
  Eigen::MatrixXcd f1 = U(3, 0, 0) + 0.5 * U(3, 0, 1);
  Eigen::MatrixXcd f2 = U(3, 0, 1);
  const Eigen::MatrixXcd p = U(3, 0, 0);
  const Eigen::MatrixXcd t = U(3, 0, 0) + U(3, 1, 1);
  BallMaxOptions o;
  const auto r = corner_reduction_check(NormalFunctionald(Elementd::single(space, f1)),
                                        NormalFunctionald(Elementd::single(space, f2)), p, t, o);
  EXPECT_LE(r.residual, 1e-5);
  EXPECT_TRUE(r.certified);
  // The corner pVt is rect(1,2); brute force agrees with both runs.
  const auto bp = range_basis(p);
  const auto bt = range_basis(t);
  const double oracle = ball_max_oracle(SeminormPaird(compress_to_corner(NormalFunctionald(Elementd::single(space, f1)), bp, bt),
                                                      compress_to_corner(NormalFunctionald(Elementd::single(space, f2)), bp, bt)));
  EXPECT_NEAR(oracle, r.sup_n, 1e-4);
}

TEST(Corner, EqualStatesClosedForm) {
  const auto space = TripleSpace::rect(3, 3);
  const Eigen::MatrixXcd p = U(3, 0, 0);
  const Eigen::MatrixXcd t = U(3, 0, 0) + U(3, 1, 1);
  const NormalFunctionald phi(Elementd::single(space, 0.5 * (U(3, 0, 0) + U(3, 0, 1))));
  const auto r = corner_reduction_check(phi, phi, p, t, BallMaxOptions{});
  EXPECT_NEAR(r.sup_n, std::sqrt(2 * phi.norm()), 1e-9);
  EXPECT_NEAR(r.sup_m, std::sqrt(2 * phi.norm()), 1e-9);
}

TEST(Glue, Weights) {
  const auto sp = TripleSpace::parse("sum(rect(1,1),rect(1,1))");
  const NormalFunctionald a(from_coordinates<double>(sp, Eigen::Vector2cd(0.25, 0.75)));
  const auto w = glue_weights(a, a);
  EXPECT_DOUBLE_EQ(w[0], 0.25);
  EXPECT_DOUBLE_EQ(w[1], 0.75);

  const NormalFunctionald single(Elementd::single(TripleSpace::rect(2, 2), U(2, 0, 1)));
  const auto w1 = glue_weights(single, single);
  ASSERT_EQ(w1.size(), 1u);
  EXPECT_DOUBLE_EQ(w1[0], 1.0);
}

TEST(Glue, ThreeSummands) {
  Rng rng(77);
  const auto space = TripleSpace::parse("sum(rect(2,2),rect(2,2),rect(2,2))");
  for (int i = 0; i < 20; ++i) {
    const NormalFunctionald phi1(random_element<double>(space, rng));
    const NormalFunctionald phi2(random_element<double>(space, rng));
    std::vector<NormalFunctionald> psis;
    for (int b = 0; b < 3; ++b) {
      psis.push_back(combined_witness(restrict_to_summand(phi1, b), restrict_to_summand(phi2, b), identity(2)));
    }
    const auto g = glue_sums(psis, phi1, phi2, std::sqrt(2.0), 50, rng);
    EXPECT_LE(g.sampled_violation, 0.0);
    EXPECT_LE(g.global_ratio, 1 + 1e-9);
    EXPECT_NEAR(g.phi.norm(), 1.0, 1e-12);
  }
}

TEST(Glue, RejectsBadSummandWitness) {
  const auto space = TripleSpace::parse("sum(rect(2,2),rect(2,2))");
  Rng rng(3);
  const NormalFunctionald phi1(random_element<double>(space, rng));
  const NormalFunctionald phi2(random_element<double>(space, rng));
  const NormalFunctionald bad(Elementd::single(kR22, U(2, 0, 0)));
  const NormalFunctionald good = combined_witness(restrict_to_summand(phi1, 1), restrict_to_summand(phi2, 1), identity(2));
  EXPECT_THROW(glue_sums({bad, good}, phi1, phi2, std::sqrt(2.0), 10, rng), DomainError);
}

TEST(Atoms, SeparableMaximizer) {
  const auto space = TripleSpace::parse("sum(rect(2,2),rect(2,2),rect(2,2))");
  Rng rng(13);
  const NormalFunctionald phi1(random_element<double>(space, rng));
  const NormalFunctionald phi2(random_element<double>(space, rng));
  const SeminormPaird pair(phi1, phi2);
  const auto res = atomwise_maximizer(pair, BallMaxOptions{});
  EXPECT_TRUE(res.unconverged_atoms.empty());
  EXPECT_LE(res.maximizer.norm(), 1 + 1e-12);
  EXPECT_NEAR(res.value, seminorm_pair(pair, res.maximizer), 1e-12);
  for (int i = 0; i < 200; ++i) EXPECT_LE(seminorm_pair(pair, random_ball_point<double>(space, rng)), res.value + 1e-9);

  const auto single = TripleSpace::rect(2, 2);
  const SeminormPaird p1(NormalFunctionald(random_element<double>(single, rng)),
                         NormalFunctionald(random_element<double>(single, rng)));
  EXPECT_NEAR(atomwise_maximizer(p1, BallMaxOptions{}).value, ball_max(p1).value, 1e-12);
}
