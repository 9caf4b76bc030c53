#include <gtest/gtest.h>

#include "jbtriple/optimize.hpp"
#include "jbtriple/random.hpp"

using namespace jbt;

namespace {

const TripleSpace kR22 = TripleSpace::rect(2, 2);

Elementd E(int i, int j) {
  Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(2, 2);
  e(i, j) = 1;
  return Elementd::single(kR22, e);
}

OracleOptions quick_oracle(std::uint64_t seed) {
  OracleOptions o;
  o.samples = 20000;
  o.polish_iterations = 2000;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(BallLmo, AttainsDualNorm) {
  Rng rng(1);
  for (const char* name : {"rect(2,3)", "sym(3)", "antisym(4)", "antisym(3)", "sum(rect(1,2),sym(2))"}) {
    const auto space = TripleSpace::parse(name);
    const Elementd g = random_element<double>(space, rng);
    const Elementd y = ball_lmo(g);
    EXPECT_LE(y.norm(), 1 + 1e-12) << name;
    const NormalFunctionald phi(g);
    EXPECT_NEAR(phi(y).real(), phi.norm(), 1e-12 * phi.norm()) << name;
  }
}

TEST(BallMax, Examples) {
  const SeminormPaird nearly_pure(NormalFunctionald(E(0, 0)), NormalFunctionald(E(1, 1) * 1e-12));
  EXPECT_NEAR(ball_max(nearly_pure).value, 1.0, 1e-9);
  const SeminormPaird half(NormalFunctionald((E(0, 0) + E(1, 1)) * 0.5), NormalFunctionald(E(1, 1) * 1e-14));
  EXPECT_NEAR(ball_max(half).value, 1.0, 1e-9);
  const auto r12 = TripleSpace::rect(1, 2);
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(1, 2);
  f(0, 0) = 1;
  const SeminormPaird row(NormalFunctionald(Elementd::single(r12, f)), NormalFunctionald(r12));
  EXPECT_NEAR(ball_max(row).value, 1.0, 1e-12);
  EXPECT_NEAR(ball_max_oracle(row, quick_oracle(1)), 1.0, 1e-4);
  EXPECT_THROW(ball_max(SeminormPaird(NormalFunctionald(kR22), NormalFunctionald(kR22))), DomainError);
}

TEST(BallMax, AgreesWithOracle) {
  Rng rng(99);
  for (const char* name : {"rect(2,2)", "rect(1,3)", "sym(2)", "rect(2,3)"}) {
    const auto space = TripleSpace::parse(name);
    for (int i = 0; i < 3; ++i) {
      const SeminormPaird pair(NormalFunctionald(random_element<double>(space, rng)),
                               NormalFunctionald(random_element<double>(space, rng)));
      BallMaxOptions bo;
      bo.seed = rng.next();
      const auto fw = ball_max(pair, bo);
      EXPECT_TRUE(fw.converged);
      const double oracle = ball_max_oracle(pair, quick_oracle(rng.next()));
      EXPECT_NEAR(fw.value, oracle, 1e-4) << name;
      EXPECT_GE(fw.value, oracle - 1e-9) << name;
    }
  }
}

TEST(BallMax, FrozenValue) {
  // Frozen after agreement between Frank-Wolfe and the brute-force oracle.
  Rng rng(20241015);
  const auto space = TripleSpace::rect(2, 2);
  const SeminormPaird pair(NormalFunctionald(random_element<double>(space, rng)),
                           NormalFunctionald(random_element<double>(space, rng)));
  EXPECT_NEAR(ball_max(pair).value, 2.2453860809157935, 1e-9);
}

TEST(Oracle, RefusesLargeSpaces) {
  const auto big = TripleSpace::rect(3, 4);
  Rng rng(1);
  const SeminormPaird pair(NormalFunctionald(random_element<double>(big, rng)), NormalFunctionald(big));
  EXPECT_THROW(ball_max_oracle(pair), DomainError);
}

TEST(Quotient, PureStateRank) {
  const SeminormPaird pair(NormalFunctionald(E(0, 0)), NormalFunctionald(kR22));
  const auto q = quotient_map(pair);
  // |x11|^2 + |x12|^2 / 2 + |x21|^2 / 2: three directions survive.
  EXPECT_EQ(q.rank, 3);
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Elementd x = random_element<double>(kR22, rng);
    EXPECT_NEAR(q(x).norm(), seminorm_pair(pair, x), 1e-12);
  }
  EXPECT_NEAR(q(E(1, 1)).norm(), 0.0, 1e-15);
}

TEST(NormAttain, Examples) {
  const auto x12 = operator_norm_attain(HilbertOperator({NormalFunctionald(E(0, 1))}));
  EXPECT_NEAR(x12.norm, 1.0, 1e-12);
  EXPECT_TRUE(x12.snapped);
  EXPECT_TRUE(x12.complete);
  EXPECT_NEAR(std::abs(x12.e.block(0)(0, 1)), 1.0, 1e-9);

  const auto diag = operator_norm_attain(HilbertOperator({NormalFunctionald(E(0, 0)), NormalFunctionald(E(1, 1))}));
  EXPECT_NEAR(diag.norm, std::sqrt(2.0), 1e-12);

  Rng rng(6);
  const NormalFunctionald phi(random_element<double>(kR22, rng));
  EXPECT_NEAR(operator_norm_attain(HilbertOperator({phi})).norm, phi.norm(), 1e-10);
}

TEST(WorstRatio, KnownPairs) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = a;
  a(0, 0) = 4;
  a(1, 1) = 1;
  b(0, 0) = 1;
  b(1, 1) = 1;
  EXPECT_NEAR(generalized_worst_ratio(a, b).ratio, 2.0, 1e-14);
  b(0, 0) = 0;
  EXPECT_TRUE(generalized_worst_ratio(a, b).infinite);
  a(0, 0) = 0;
  const auto w = generalized_worst_ratio(a, b);
  EXPECT_FALSE(w.infinite);
  EXPECT_NEAR(w.ratio, 1.0, 1e-14);
}

TEST(LittleGi, Examples) {
  LittleGiOptions o;
  const HilbertOperator t12({NormalFunctionald(E(0, 1))});
  const auto r = little_gi_witness(t12, std::sqrt(2.0) + 1e-6, o);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(r.worst_ratio, std::sqrt(2.0) + 1e-6);

  const HilbertOperator state({NormalFunctionald(E(0, 0))});
  const auto s = little_gi_witness(state, 1.0 + 1e-9, o);
  EXPECT_TRUE(s.certified);
  const NormalFunctionald phi(E(0, 0));
  EXPECT_LE(generalized_worst_ratio(state.gram(), gram(phi)).ratio, 1 + 1e-12);
}

TEST(LittleGi, RandomOperatorsOnRect33) {
  Rng rng(123);
  const auto space = TripleSpace::rect(3, 3);
  for (int i = 0; i < 5; ++i) {
    std::vector<NormalFunctionald> rows;
    for (int k = 0; k < 3; ++k) rows.emplace_back(random_element<double>(space, rng));
    LittleGiOptions o;
    o.seed = rng.next();
    const auto r = little_gi_witness(HilbertOperator(rows), 2.01, o);
    EXPECT_TRUE(r.certified);
    EXPECT_LE(r.worst_ratio, 2.01 * (1 + 1e-6));
    EXPECT_LE(r.sampled_ratio, 2.01 * (1 + 1e-6));
    o.constructive_only = true;
    EXPECT_TRUE(little_gi_witness(HilbertOperator(rows), 2.01, o).certified);
  }
}

TEST(LittleGi, NeverCertifiesBelowTruth) {
  // ||x||_psi <= ||x|| for norm-one psi, so x = E12 forces a ratio of at least 1.
  const HilbertOperator t12({NormalFunctionald(E(0, 1))});
  const auto r = little_gi_witness(t12, 0.5, LittleGiOptions{});
  EXPECT_FALSE(r.certified);
  EXPECT_GT(r.worst_ratio, 0.5);
}

TEST(BigGi, Examples) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(2, 2) = 1;  // coordinate 2 of rect(2,2) is the (0,1) entry
  const BilinearForm v(kR22, kR22, c);
  EXPECT_NEAR(std::abs(v(E(0, 1), E(0, 1))), 1.0, 1e-15);
  const NormalFunctionald w(E(0, 1));
  EXPECT_LE(bilinear_worst_ratio(v, w, w).ratio, 2.0 * (1 + 1e-12));

  // rank one with states: V(x,y) = x11 y22 certifies with G = 1
  Eigen::MatrixXcd r1 = Eigen::MatrixXcd::Zero(4, 4);
  r1(0, 3) = 1;
  const BilinearForm u(kR22, kR22, r1);
  EXPECT_NEAR(bilinear_worst_ratio(u, NormalFunctionald(E(0, 0)), NormalFunctionald(E(1, 1))).ratio, 1.0, 1e-12);
  EXPECT_NEAR(bilinear_norm(u).norm, 1.0, 1e-12);
}

TEST(BigGi, RandomForm) {
  Rng rng(8);
  const auto l = TripleSpace::rect(2, 2);
  const auto r = TripleSpace::rect(2, 3);
  const BilinearForm v(l, r, random_gaussian<double>(l.complex_dim(), r.complex_dim(), rng));
  const auto res = big_gi_witness(v, kBigGiThreshold + 0.01);
  EXPECT_TRUE(res.certified);
  EXPECT_FALSE(res.below_proven_constant);
  EXPECT_LE(res.worst_ratio, kBigGiThreshold + 0.01);
  EXPECT_TRUE(big_gi_witness(v, 10.0).below_proven_constant);
}

TEST(Constants, ScalarsAndReplay) {
  const auto c1 = constant_estimate(GiMode::kLittle, {TripleSpace::rect(1, 1)}, 60, 1);
  EXPECT_NEAR(c1.lower_bound, 1.0, 1e-9);
  const auto c = constant_estimate(GiMode::kLittle, {TripleSpace::rect(1, 3)}, 60, 2);
  EXPECT_GE(c.lower_bound, 1.0 - 1e-9);
  EXPECT_LE(c.lower_bound, std::sqrt(2.0) + 0.02);
  for (const auto& inst : c.instances) EXPECT_EQ(replay_instance(inst), inst.bound);
  const auto b = constant_estimate(GiMode::kBig, {TripleSpace::rect(1, 2)}, 20, 3);
  for (const auto& inst : b.instances) EXPECT_EQ(replay_instance(inst), inst.bound);
}
