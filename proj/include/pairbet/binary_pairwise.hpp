#pragma once
// Pairwise betting on binary sequences against a first-order Markov
// alternative: streaming transition counts, plug-in betting scores, the
// wealth martingale, and the closed-form growth rates.
//
// The game: at each odd step t, nature reveals the unordered pair
// {x_t, x_{t+1}} and the bettor wagers on the order. Conditioned on the
// unordered pair (and the past), both orders are equally likely under
// exchangeability, so the null is a fair coin and the optimal bet is the
// conditional likelihood ratio of the estimated alternative.

#include <array>
#include <cstdint>
#include <utility>

#include "pairbet/core.hpp"

namespace pairbet {

enum class EstimatorKind {
  smoothed,  // add-one (Laplace) smoothing; uniform-prior MAP, always interior
  mle,       // raw maximum likelihood; may be degenerate early in the stream
};

// Streaming pair and triple pattern counts. After consuming t observations,
// the pair counts over all transitions sum to t-1.
class TransitionCounts {
 public:
  // Usage error for symbols outside {0,1}.
  void ingest(int symbol);

  // Number of times `to` immediately followed `from`.
  std::int64_t pair_count(int from, int to) const { return pair_[from][to]; }
  // Number of occurrences of the consecutive pattern (a, b, c).
  std::int64_t triple_count(int a, int b, int c) const { return triple_[a][b][c]; }
  std::int64_t symbol_count(int symbol) const { return sym_[symbol]; }
  std::int64_t observed() const { return total_; }

  // Most recently ingested symbol; -1 before the first observation.
  int last_symbol() const { return last_; }

 private:
  std::array<std::array<std::int64_t, 2>, 2> pair_{};
  std::array<std::array<std::array<std::int64_t, 2>, 2>, 2> triple_{};
  std::array<std::int64_t, 2> sym_{};
  std::int64_t total_ = 0;
  int last_ = -1;
  int second_last_ = -1;
};

// Plug-in transition probability estimate; rows sum to one.
class TransitionEstimate {
 public:
  static TransitionEstimate from_counts(const TransitionCounts& counts,
                                        EstimatorKind kind = EstimatorKind::smoothed);
  // Direct construction from p_{1|0} and p_{1|1}; used by oracles and tests.
  static TransitionEstimate from_probs(double p10, double p11,
                                       EstimatorKind kind = EstimatorKind::smoothed);

  double prob(int next, int prev) const { return p_[prev][next]; }
  EstimatorKind kind() const { return kind_; }

  // Numeric error if any component is 0 or 1 (possible under mle only).
  void require_interior() const;

 private:
  std::array<std::array<double, 2>, 2> p_{};
  EstimatorKind kind_ = EstimatorKind::smoothed;
};

// Betting score for one revealed pair. Equal symbols are the no-bet event
// (score 1); otherwise
//   2 p(x_t|x_prev) p(x_{t+1}|x_t) /
//     (p(x_t|x_prev) p(x_{t+1}|x_t) + p(x_{t+1}|x_prev) p(x_t|x_{t+1}))
// which lies in (0,2). The two orders of an unequal pair always score to a
// sum of exactly 2.
EValue pair_score(const TransitionEstimate& estimate, int x_prev,
                  std::pair<int, int> pair);

// State machine for the pairwise game. Scores are predictable: the estimate
// used for a pair is built from the observations revealed before it, and the
// pair is ingested only after scoring. The first pair never produces a bet.
class BinaryPairwiseState {
 public:
  explicit BinaryPairwiseState(EstimatorKind kind = EstimatorKind::smoothed);

  EValue step_pair(int x_t, int x_t1);
  // Feeds one observation into the counts without betting (phase lead-in or
  // a trailing unpaired observation).
  void ingest_solo(int x);

  const TransitionCounts& counts() const { return counts_; }
  std::int64_t pairs_scored() const { return pairs_scored_; }

 private:
  TransitionCounts counts_;
  EstimatorKind kind_;
  std::int64_t pairs_scored_ = 0;
};

// Tester wrapper: buffers observations into pairs and keeps the wealth
// ledger at stride 2.
class BinaryPairwiseTester final : public Tester {
 public:
  explicit BinaryPairwiseTester(EstimatorKind kind = EstimatorKind::smoothed,
                                PairingPhase phase = PairingPhase::odd);

  void observe(double x) override;
  void finish() override;
  const WealthTrajectory& trajectory() const override { return trajectory_; }
  std::string_view method_name() const override { return "pairwise-binary"; }
  const BinaryPairwiseState& state() const { return state_; }

 private:
  BinaryPairwiseState state_;
  WealthTrajectory trajectory_;
  PairingPhase phase_;
  std::int64_t observed_ = 0;
  int pending_ = -1;
  bool have_pending_ = false;
};

// First-order Markov chain parameters, Markov(p_{1|0}, p_{1|1}). Boundary
// values are legal here (the generators need them); the growth-rate formulas
// require interior parameters and say so.
struct MarkovParams {
  double p10 = 0.5;  // transition probability 1 given 0
  double p11 = 0.5;  // transition probability 1 given 1

  double p01() const { return 1.0 - p11; }
  double p00() const { return 1.0 - p10; }
  double trans(int next, int prev) const;
  // p_i = p_{i|i^c} / (p_{i|i^c} + p_{i^c|i})
  double stationary(int i) const;
  void require_interior() const;
};

// Almost-sure limit of log(M_2n)/(2n) under the Markov alternative:
//   r = 1/2 sum_{i,j} log(2 p_{j|i} p_{jc|j} / (p_{j|i} p_{jc|j} +
//       p_{jc|i} p_{j|jc})) p_i p_{j|i} p_{jc|j}.
// Nonnegative; zero exactly when p10 == p11. Numeric error on the boundary.
double markov_growth_rate(const MarkovParams& params);

// Same quantity via the expanded four-term expression; an algebraically
// independent route kept for cross-checking.
double markov_growth_rate_expanded(const MarkovParams& params);

// Almost-sure count limits of a general binary sequence:
//   alpha = lim n_{1|1}(t)/t, beta = lim n_{0|0}(t)/t,
//   gamma = lim n_{1|0}(t)/t = lim n_{0|1}(t)/t,
//   pattern[i][j] = lim (occurrences of the consecutive pattern (i,j,jc))/t.
struct GeneralLimits {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::array<std::array<double, 2>, 2> pattern{};

  // Derived transition limits: p_{1|1} = alpha/(alpha+gamma),
  // p_{1|0} = gamma/(beta+gamma), complements for the rest. Numeric error
  // when a denominator vanishes.
  double trans(int next, int prev) const;

  static GeneralLimits from_markov(const MarkovParams& params);
};

// Growth rate r' for a general sequence with the limits above:
//   r' = 1/2 sum_{i,j} log(2 p_{j|i} p_{jc|j} / (p_{j|i} p_{jc|j} +
//        p_{jc|i} p_{j|jc})) pattern[i][j].
// Reduces to markov_growth_rate under Markov-induced limits.
double general_growth_rate(const GeneralLimits& limits);

struct PositivityConditions {
  bool first_sign_holds = false;       // (2 p_{0|1} - 1)(a + p_{0|1} - 1) >= 0
  bool second_sign_holds = false;      // (2 p_{1|0} - 1)(b + p_{1|0} - 1) >= 0
  bool transitions_distinct = false;   // p_{1|0} != p_{1|1}
  double a = 0.0;  // pattern(1,1,0) / (pattern(1,1,0) + pattern(0,1,0))
  double b = 0.0;  // pattern(1,0,1) / (pattern(1,0,1) + pattern(0,0,1))
  double first_product = 0.0;
  double second_product = 0.0;
};

// Evaluates the sufficient conditions quoted with the general growth-rate
// result. Products within 1e-14 of zero count as the boundary case, which
// satisfies the (non-strict) sign conditions; Markov-induced limits sit
// exactly there. Numeric error when the denominator of a or b vanishes (the
// constants are undefined there).
PositivityConditions check_positivity_conditions(const GeneralLimits& limits);

}  // namespace pairbet
