#pragma once

#include <cstdint>
#include <string>

#include "jbtriple/constructions.hpp"
#include "jbtriple/functional.hpp"

namespace jbt {

/// Linear maximization over the closed unit ball: argmax Re tr(G* y).
/// rect blocks get a complete tripotent from the full SVD; sym/antisym
/// blocks get the thresholded polar part.
Elementd ball_lmo(const Elementd& g);

struct BallMaxOptions {
  int multistarts = 16;
  int max_iterations = 1000;
  double tolerance = 1e-12;  // relative improvement that counts as converged
  std::uint64_t seed = 0;
};

struct BallMaxResult {
  Elementd maximizer;
  double value = 0;  // sqrt of the maximized quadratic form
  bool converged = false;
  int iterations = 0;
  int best_start = 0;
};

/// Maximizes c* A c over the unit ball of `space` by Frank-Wolfe with
/// full steps (the objective is convex, so every step is an ascent).
/// Start 0 is ball_lmo(`warm`), the rest are seeded extreme points.
BallMaxResult maximize_quadratic(const TripleSpace& space, const Eigen::MatrixXcd& a, const Elementd& warm,
                                 const BallMaxOptions& options);

/// sup over the unit ball of ||x||_{phi1,phi2}.
BallMaxResult ball_max(const SeminormPaird& pair, const BallMaxOptions& options = {});

struct OracleOptions {
  int samples = 100000;
  int polish_iterations = 4000;
  std::uint64_t seed = 0;
};

/// Brute force: Haar extreme points plus random-perturbation polish.
/// Refuses spaces of real dimension above 18.
double ball_max_oracle(const SeminormPaird& pair, const OracleOptions& options = {});
double quadratic_oracle(const TripleSpace& space, const Eigen::MatrixXcd& a, const OracleOptions& options);

/// c* A c for x = sum c_k b_k.
double quadratic_value(const Eigen::MatrixXcd& a, const Elementd& x);

struct QuotientMap {
  Eigen::MatrixXcd gram;  // H(l,k) = <b_k, b_l>
  Eigen::MatrixXcd map;   // d x dim; map(x) = map * coordinates(x)
  int rank = 0;
  double min_eigenvalue = 0;

  Eigen::VectorXcd operator()(const Elementd& x) const { return map * coordinates(x); }
};

/// Hilbertization of the pair seminorm. Throws PositivityViolation when
/// the Gram matrix has an eigenvalue below -1e-9.
QuotientMap quotient_map(const SeminormPaird& pair);

/// T(x) = (phi_1(x), ..., phi_k(x)).
class HilbertOperator {
 public:
  explicit HilbertOperator(std::vector<NormalFunctionald> rows);

  const TripleSpace& space() const { return rows_.front().space(); }
  const std::vector<NormalFunctionald>& rows() const { return rows_; }
  int dim() const { return static_cast<int>(rows_.size()); }

  Eigen::VectorXcd operator()(const Elementd& x) const;
  /// C(i,k) = phi_i(b_k).
  const Eigen::MatrixXcd& coefficients() const { return c_; }
  /// C* C, so that ||T(x)||^2 = c* A c.
  const Eigen::MatrixXcd& gram() const { return a_; }

 private:
  std::vector<NormalFunctionald> rows_;
  Eigen::MatrixXcd c_;
  Eigen::MatrixXcd a_;
};

struct NormAttainment {
  Elementd e;
  double norm = 0;
  bool snapped = false;    // e is a tripotent after snapping singular values
  bool complete = false;   // and P0(e) = 0
  bool converged = false;
};

NormAttainment operator_norm_attain(const HilbertOperator& t, const BallMaxOptions& options = {});

/// sqrt of sup_x c*Ac / c*Bc for Hermitian PSD A, B. Infinite when A does
/// not vanish on ker B.
struct WorstRatio {
  double ratio = 0;
  bool infinite = false;
  Eigen::VectorXcd argmax;  // coordinates of a maximizing direction
};
WorstRatio generalized_worst_ratio(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

struct LittleGiOptions {
  int samples = 10000;
  int refinement_rounds = 40;
  BallMaxOptions ball;
  std::uint64_t seed = 0;
  bool constructive_only = false;  // skip the ansatz when choosing psi
};

struct LittleGiResult {
  NormalFunctionald psi;
  bool certified = false;
  double worst_ratio = 0;          // exact sup ||T x|| / (||T|| ||x||_psi)
  double sampled_ratio = 0;        // over samples and the adversarial maximizer
  double ansatz_ratio = 0;         // exact worst ratio of the ansatz alone
  bool ansatz_certified = false;
  double constructive_ratio = 0;   // exact worst ratio of the best face mixture
  std::string path;                // "ansatz", "constructive" or "refined"
  double t_norm = 0;
};

/// Finds psi with ||T(x)|| <= K ||T|| ||x||_psi on the whole space. The
/// certificate is the exact generalized-eigenvalue ratio, backed by
/// sampling; a candidate is never reported certified on sampling alone.
LittleGiResult little_gi_witness(const HilbertOperator& t, double K, const LittleGiOptions& options = {});

/// V(x, y) = coords(x)^T C coords(y); bilinear.
class BilinearForm {
 public:
  BilinearForm(TripleSpace left, TripleSpace right, Eigen::MatrixXcd c);

  const TripleSpace& left() const { return left_; }
  const TripleSpace& right() const { return right_; }
  const Eigen::MatrixXcd& coefficients() const { return c_; }
  std::complex<double> operator()(const Elementd& x, const Elementd& y) const;

 private:
  TripleSpace left_;
  TripleSpace right_;
  Eigen::MatrixXcd c_;
};

struct BilinearNorm {
  double norm = 0;
  Elementd x;
  Elementd y;
};

/// ||V|| by alternating maximization; each half-step is the trace norm of
/// a linear functional, attained at its support.
BilinearNorm bilinear_norm(const BilinearForm& v, const BallMaxOptions& options = {});

/// 8 (1 + 2 sqrt 3).
inline const double kBigGiThreshold = 8.0 * (1.0 + 2.0 * std::sqrt(3.0));

struct BigGiResult {
  NormalFunctionald phi;
  NormalFunctionald psi;
  bool certified = false;
  bool below_proven_constant = false;  // G <= 8(1 + 2 sqrt 3)
  double worst_ratio = 0;       // exact sup |V(x,y)| / (||V|| ||x||_phi ||y||_psi)
  double sampled_ratio = 0;
  double v_norm = 0;
};

BigGiResult big_gi_witness(const BilinearForm& v, double G, const LittleGiOptions& options = {});

struct PairWorstRatio {
  double ratio = 0;  // sup |V(x,y)| / (||x||_phi ||y||_psi), not divided by ||V||
  bool infinite = false;
  Eigen::VectorXcd x;
  Eigen::VectorXcd y;
};

/// Exact worst ratio of a witness pair for V.
PairWorstRatio bilinear_worst_ratio(const BilinearForm& v, const NormalFunctionald& phi, const NormalFunctionald& psi);

enum class GiMode { kLittle, kBig };

struct ConstantInstance {
  GiMode mode = GiMode::kLittle;
  TripleSpace space = TripleSpace::rect(1, 1);
  TripleSpace right = TripleSpace::rect(1, 1);  // big mode only
  Eigen::MatrixXcd operator_;  // T coefficients (little) or V coefficients (big)
  std::uint64_t seed = 0;
  int iterations = 0;
  double bound = 0;
};

struct ConstantEstimate {
  double lower_bound = 0;
  std::vector<ConstantInstance> instances;
};

/// For each instance, inf over psi of the worst ratio by local search from
/// the witness candidates; reports the max over instances.
ConstantEstimate constant_estimate(GiMode mode, const std::vector<TripleSpace>& spaces, int budget,
                                   std::uint64_t seed);

/// Recomputes one instance's bound from its stored seed and iteration count.
double replay_instance(const ConstantInstance& instance);

}  // namespace jbt
