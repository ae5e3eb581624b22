#include "pairbet/binary_pairwise.hpp"

#include <cmath>
#include <string>

namespace pairbet {

namespace {

void require_symbol(int x) {
  if (x != 0 && x != 1)
    throw usage_error("non-binary observation " + std::to_string(x) +
                      "; use a continuous method for real-valued data");
}

}  // namespace

void TransitionCounts::ingest(int symbol) {
  require_symbol(symbol);
  if (last_ >= 0) ++pair_[last_][symbol];
  if (second_last_ >= 0) ++triple_[second_last_][last_][symbol];
  ++sym_[symbol];
  ++total_;
  second_last_ = last_;
  last_ = symbol;
}

TransitionEstimate TransitionEstimate::from_counts(const TransitionCounts& counts,
                                                   EstimatorKind kind) {
  TransitionEstimate estimate;
  estimate.kind_ = kind;
  for (int from : {0, 1}) {
    const double n1 = static_cast<double>(counts.pair_count(from, 1));
    const double n0 = static_cast<double>(counts.pair_count(from, 0));
    double p1;
    if (kind == EstimatorKind::smoothed) {
      p1 = (n1 + 1.0) / (n0 + n1 + 2.0);
    } else {
      if (n0 + n1 == 0.0)
        throw numeric_error("transition MLE from state " + std::to_string(from) +
                            " is undefined (no transitions observed); use the "
                            "smoothed estimator");
      p1 = n1 / (n0 + n1);
    }
    estimate.p_[from][1] = p1;
    estimate.p_[from][0] = 1.0 - p1;
  }
  return estimate;
}

TransitionEstimate TransitionEstimate::from_probs(double p10, double p11,
                                                  EstimatorKind kind) {
  TransitionEstimate estimate;
  estimate.kind_ = kind;
  estimate.p_[0][1] = p10;
  estimate.p_[0][0] = 1.0 - p10;
  estimate.p_[1][1] = p11;
  estimate.p_[1][0] = 1.0 - p11;
  return estimate;
}

void TransitionEstimate::require_interior() const {
  for (int from : {0, 1})
    for (int to : {0, 1})
      if (!(p_[from][to] > 0.0) || !(p_[from][to] < 1.0))
        throw numeric_error(
            "transition estimate has a boundary component; a zero estimate "
            "would zero the wealth irrecoverably -- use the smoothed estimator");
}

EValue pair_score(const TransitionEstimate& estimate, int x_prev,
                  std::pair<int, int> pair) {
  require_symbol(x_prev);
  require_symbol(pair.first);
  require_symbol(pair.second);
  if (pair.first == pair.second) return EValue{1.0};  // no-bet event
  estimate.require_interior();
  const double observed =
      estimate.prob(pair.first, x_prev) * estimate.prob(pair.second, pair.first);
  const double swapped =
      estimate.prob(pair.second, x_prev) * estimate.prob(pair.first, pair.second);
  return EValue{2.0 * observed / (observed + swapped)};
}

BinaryPairwiseState::BinaryPairwiseState(EstimatorKind kind) : kind_(kind) {}

EValue BinaryPairwiseState::step_pair(int x_t, int x_t1) {
  require_symbol(x_t);
  require_symbol(x_t1);
  EValue score{1.0};
  // No bet on the first pair regardless of estimator; afterwards the score is
  // computed before the pair enters the counts.
  if (pairs_scored_ > 0 && x_t != x_t1) {
    const auto estimate = TransitionEstimate::from_counts(counts_, kind_);
    score = pair_score(estimate, counts_.last_symbol(), {x_t, x_t1});
  }
  counts_.ingest(x_t);
  counts_.ingest(x_t1);
  ++pairs_scored_;
  return score;
}

void BinaryPairwiseState::ingest_solo(int x) { counts_.ingest(x); }

BinaryPairwiseTester::BinaryPairwiseTester(EstimatorKind kind, PairingPhase phase)
    : state_(kind),
      trajectory_(2, phase == PairingPhase::even ? 1 : 0),
      phase_(phase) {}

void BinaryPairwiseTester::observe(double x) {
  if (x != 0.0 && x != 1.0)
    throw usage_error("non-binary observation; use a continuous method for "
                      "real-valued data");
  const int symbol = x == 1.0 ? 1 : 0;
  ++observed_;
  if (phase_ == PairingPhase::even && observed_ == 1) {
    state_.ingest_solo(symbol);
    return;
  }
  if (!have_pending_) {
    pending_ = symbol;
    have_pending_ = true;
    return;
  }
  const EValue e = state_.step_pair(pending_, symbol);
  have_pending_ = false;
  trajectory_.append_log_factor(observed_, std::log(e.value));
}

void BinaryPairwiseTester::finish() {
  if (have_pending_) {
    state_.ingest_solo(pending_);
    have_pending_ = false;
  }
}

double MarkovParams::trans(int next, int prev) const {
  if (prev == 0) return next == 1 ? p10 : 1.0 - p10;
  return next == 1 ? p11 : 1.0 - p11;
}

double MarkovParams::stationary(int i) const {
  const double up = trans(i, 1 - i);
  const double down = trans(1 - i, i);
  if (up + down <= 0.0)
    throw numeric_error("stationary distribution undefined: both cross-transition "
                        "probabilities are zero");
  return up / (up + down);
}

void MarkovParams::require_interior() const {
  for (double p : {p10, p11})
    if (!(p > 0.0) || !(p < 1.0))
      throw numeric_error("growth rate requires interior transition probabilities");
}

double markov_growth_rate(const MarkovParams& params) {
  params.require_interior();
  double total = 0.0;
  for (int i : {0, 1}) {
    for (int j : {0, 1}) {
      const int jc = 1 - j;
      const double observed = params.trans(j, i) * params.trans(jc, j);
      const double swapped = params.trans(jc, i) * params.trans(j, jc);
      total += std::log(2.0 * observed / (observed + swapped)) *
               params.stationary(i) * observed;
    }
  }
  return 0.5 * total;
}

double markov_growth_rate_expanded(const MarkovParams& params) {
  params.require_interior();
  const double q = params.p01();
  const double s = params.p10;
  const double prefactor = q * s / (2.0 * (q + s));
  const double bracket = std::log(4.0)
      - (1.0 - q) * std::log1p(s / (1.0 - q))
      - s * std::log1p((1.0 - q) / s)
      - (1.0 - s) * std::log1p(q / (1.0 - s))
      - q * std::log1p((1.0 - s) / q);
  return prefactor * bracket;
}

double GeneralLimits::trans(int next, int prev) const {
  const double from_one = alpha + gamma;
  const double from_zero = beta + gamma;
  if (prev == 1) {
    if (from_one <= 0.0)
      throw numeric_error("degenerate limits: no transitions out of state 1");
    return next == 1 ? alpha / from_one : gamma / from_one;
  }
  if (from_zero <= 0.0)
    throw numeric_error("degenerate limits: no transitions out of state 0");
  return next == 1 ? gamma / from_zero : beta / from_zero;
}

GeneralLimits GeneralLimits::from_markov(const MarkovParams& params) {
  GeneralLimits limits;
  const double pi0 = params.stationary(0);
  const double pi1 = params.stationary(1);
  limits.alpha = pi1 * params.p11;
  limits.beta = pi0 * params.p00();
  limits.gamma = pi1 * params.p01();
  for (int i : {0, 1})
    for (int j : {0, 1})
      limits.pattern[i][j] = params.stationary(i) * params.trans(j, i) *
                             params.trans(1 - j, j);
  return limits;
}

double general_growth_rate(const GeneralLimits& limits) {
  for (int prev : {0, 1})
    for (int next : {0, 1}) {
      const double p = limits.trans(next, prev);
      if (!(p > 0.0) || !(p < 1.0))
        throw numeric_error("degenerate limits: a derived transition probability "
                            "is 0 or 1");
    }
  double total = 0.0;
  for (int i : {0, 1}) {
    for (int j : {0, 1}) {
      const int jc = 1 - j;
      const double observed = limits.trans(j, i) * limits.trans(jc, j);
      const double swapped = limits.trans(jc, i) * limits.trans(j, jc);
      total += std::log(2.0 * observed / (observed + swapped)) * limits.pattern[i][j];
    }
  }
  return 0.5 * total;
}

PositivityConditions check_positivity_conditions(const GeneralLimits& limits) {
  const double denom_a = limits.pattern[1][1] + limits.pattern[0][1];
  const double denom_b = limits.pattern[1][0] + limits.pattern[0][0];
  if (denom_a <= 0.0 || denom_b <= 0.0)
    throw numeric_error("positivity constants undefined: a pattern-frequency "
                        "denominator vanishes");
  PositivityConditions out;
  out.a = limits.pattern[1][1] / denom_a;
  out.b = limits.pattern[1][0] / denom_b;
  const double p01 = limits.trans(0, 1);
  const double p10 = limits.trans(1, 0);
  constexpr double kBoundary = 1e-14;
  out.first_product = (2.0 * p01 - 1.0) * (out.a + p01 - 1.0);
  out.second_product = (2.0 * p10 - 1.0) * (out.b + p10 - 1.0);
  out.first_sign_holds = out.first_product >= -kBoundary;
  out.second_sign_holds = out.second_product >= -kBoundary;
  out.transitions_distinct = limits.trans(1, 0) != limits.trans(1, 1);
  return out;
}

}  // namespace pairbet
