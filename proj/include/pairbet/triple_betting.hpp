#pragma once
// Betting on three consecutive observations at a time. Binary triples have 3
// distinct orderings when not all symbols are equal (conditional null
// likelihood 1/3); continuous triples use all 6 index permutations
// (conditional null likelihood 1/6). Optional stopping moves to times
// divisible by three.

#include <array>
#include <cstdint>

#include "pairbet/binary_pairwise.hpp"
#include "pairbet/continuous_pairwise.hpp"
#include "pairbet/core.hpp"

namespace pairbet {

// One revealed round of the binary triple game: the observation preceding
// the round and the three observations in their revealed order.
struct TripleOutcome {
  int prev = 0;
  std::array<int, 3> ordered{};
};

// 3 h(prev, ordered) / sum over distinct permutations, with
// h(w,x,y,z) = p(x|w) p(y|x) p(z|y). All-equal triples are the no-bet event
// (score 1). Value in (0,3); scores over the distinct permutations sum to 3.
EValue triple_score_binary(const TransitionEstimate& estimate,
                           const TripleOutcome& outcome);

// log of 6 g(prev, ordered) / sum over all 6 index permutations, duplicates
// included when values tie (this keeps the per-permutation null probability
// exactly 1/6 and the fair-game sum exact). Computed with log-sum-exp; the
// constant prefactor of g cancels.
double triple_score_continuous_log(double a_hat, double sigma2_hat, double prev,
                                   const std::array<double, 3>& ordered);
double triple_score_continuous_log(const AR1Fit& fit, double prev,
                                   const std::array<double, 3>& ordered);
EValue triple_score_continuous(const AR1Fit& fit, double prev,
                               const std::array<double, 3>& ordered);

class BinaryTripleState {
 public:
  explicit BinaryTripleState(EstimatorKind kind = EstimatorKind::smoothed);

  EValue step_triple(const std::array<int, 3>& observed);
  void ingest_solo(int x);

  const TransitionCounts& counts() const { return counts_; }

 private:
  TransitionCounts counts_;
  EstimatorKind kind_;
  std::int64_t rounds_ = 0;
};

class ContinuousTripleState {
 public:
  double step_triple_log(const std::array<double, 3>& observed);
  void ingest_solo(double x);

  const AR1Fit& fit() const { return fit_; }

 private:
  AR1Fit fit_;
  std::int64_t rounds_ = 0;
};

class BinaryTripleTester final : public Tester {
 public:
  explicit BinaryTripleTester(EstimatorKind kind = EstimatorKind::smoothed);

  void observe(double x) override;
  void finish() override;
  const WealthTrajectory& trajectory() const override { return trajectory_; }
  std::string_view method_name() const override { return "triple-binary"; }
  const BinaryTripleState& state() const { return state_; }

 private:
  BinaryTripleState state_;
  WealthTrajectory trajectory_;
  std::array<int, 3> buffer_{};
  int buffered_ = 0;
  std::int64_t observed_ = 0;
};

class ContinuousTripleTester final : public Tester {
 public:
  ContinuousTripleTester();

  void observe(double x) override;
  void finish() override;
  const WealthTrajectory& trajectory() const override { return trajectory_; }
  std::string_view method_name() const override { return "triple-continuous"; }
  const ContinuousTripleState& state() const { return state_; }

 private:
  ContinuousTripleState state_;
  WealthTrajectory trajectory_;
  std::array<double, 3> buffer_{};
  int buffered_ = 0;
  std::int64_t observed_ = 0;
};

// Almost-sure limit of log(M*_n)/(3n) under the Markov alternative:
//   (1/3) sum_i sum_{(j,k,l) not constant} log(3 p_{j|i} p_{k|j} p_{l|k} /
//     sum_{pi in distinct perms} p_{pi1|i} p_{pi2|pi1} p_{pi3|pi2})
//     p_i p_{j|i} p_{k|j} p_{l|k}.
// Nonnegative; zero iff p10 == p11. Numeric error on the boundary.
double triple_growth_rate_markov(const MarkovParams& params);

// Monte-Carlo estimate of (1/3) E[log S*_2] under true-parameter bets on
// stationary draws.
McEstimate triple_growth_rate_ar1_mc(const AR1Params& params,
                                     std::int64_t samples, std::uint64_t seed);

}  // namespace pairbet
