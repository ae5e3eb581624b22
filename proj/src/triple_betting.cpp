#include "pairbet/triple_betting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pairbet/rng.hpp"

namespace pairbet {

namespace {

constexpr std::array<std::array<int, 3>, 6> kIndexPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

void require_symbol(int x) {
  if (x != 0 && x != 1)
    throw usage_error("non-binary observation " + std::to_string(x) +
                      "; use a continuous method for real-valued data");
}

bool all_equal(const std::array<int, 3>& v) { return v[0] == v[1] && v[1] == v[2]; }

// Distinct value orderings of a binary triple (3 when not all equal).
std::vector<std::array<int, 3>> distinct_orderings(const std::array<int, 3>& v) {
  std::vector<std::array<int, 3>> out;
  for (const auto& perm : kIndexPerms) {
    std::array<int, 3> candidate{v[perm[0]], v[perm[1]], v[perm[2]]};
    if (std::find(out.begin(), out.end(), candidate) == out.end())
      out.push_back(candidate);
  }
  return out;
}

void require_finite(double x) {
  if (!std::isfinite(x)) throw numeric_error("non-finite observation");
}

}  // namespace

EValue triple_score_binary(const TransitionEstimate& estimate,
                           const TripleOutcome& outcome) {
  require_symbol(outcome.prev);
  for (int s : outcome.ordered) require_symbol(s);
  if (all_equal(outcome.ordered)) return EValue{1.0};  // no-bet event
  estimate.require_interior();
  const auto likelihood = [&](const std::array<int, 3>& v) {
    return estimate.prob(v[0], outcome.prev) * estimate.prob(v[1], v[0]) *
           estimate.prob(v[2], v[1]);
  };
  const double observed = likelihood(outcome.ordered);
  double denom = 0.0;
  for (const auto& ordering : distinct_orderings(outcome.ordered))
    denom += likelihood(ordering);
  return EValue{3.0 * observed / denom};
}

double triple_score_continuous_log(double a_hat, double sigma2_hat, double prev,
                                   const std::array<double, 3>& ordered) {
  require_finite(prev);
  for (double x : ordered) require_finite(x);
  if (!(sigma2_hat > 0.0)) throw numeric_error("nonpositive variance; apply the floor");
  if (a_hat == 0.0) return 0.0;  // g is permutation-symmetric

  const double inv2s = 1.0 / (2.0 * sigma2_hat);
  const auto quad = [&](double x, double y, double z) {
    const double r1 = x - a_hat * prev;
    const double r2 = y - a_hat * x;
    const double r3 = z - a_hat * y;
    return -(r1 * r1 + r2 * r2 + r3 * r3) * inv2s;
  };
  const double observed = quad(ordered[0], ordered[1], ordered[2]);
  std::array<double, 6> exponents;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kIndexPerms.size(); ++i) {
    const auto& perm = kIndexPerms[i];
    exponents[i] = quad(ordered[perm[0]], ordered[perm[1]], ordered[perm[2]]);
    peak = std::max(peak, exponents[i]);
  }
  double sum = 0.0;
  for (double e : exponents) sum += std::exp(e - peak);
  return std::log(6.0) + observed - (peak + std::log(sum));
}

double triple_score_continuous_log(const AR1Fit& fit, double prev,
                                   const std::array<double, 3>& ordered) {
  return triple_score_continuous_log(fit.a_hat(), fit.sigma2_floored(), prev,
                                     ordered);
}

EValue triple_score_continuous(const AR1Fit& fit, double prev,
                               const std::array<double, 3>& ordered) {
  return EValue{std::exp(triple_score_continuous_log(fit, prev, ordered))};
}

BinaryTripleState::BinaryTripleState(EstimatorKind kind) : kind_(kind) {}

EValue BinaryTripleState::step_triple(const std::array<int, 3>& observed) {
  for (int s : observed) require_symbol(s);
  EValue score{1.0};
  if (rounds_ > 0 && !all_equal(observed)) {
    const auto estimate = TransitionEstimate::from_counts(counts_, kind_);
    score = triple_score_binary(estimate, {counts_.last_symbol(), observed});
  }
  for (int s : observed) counts_.ingest(s);
  ++rounds_;
  return score;
}

void BinaryTripleState::ingest_solo(int x) { counts_.ingest(x); }

double ContinuousTripleState::step_triple_log(const std::array<double, 3>& observed) {
  double log_e = 0.0;
  if (rounds_ > 0 && fit_.observed() >= ContinuousPairwiseState::kWarmupObservations)
    log_e = triple_score_continuous_log(fit_, fit_.last(), observed);
  for (double x : observed) fit_.ingest(x);
  ++rounds_;
  return log_e;
}

void ContinuousTripleState::ingest_solo(double x) { fit_.ingest(x); }

BinaryTripleTester::BinaryTripleTester(EstimatorKind kind)
    : state_(kind), trajectory_(3) {}

void BinaryTripleTester::observe(double x) {
  if (x != 0.0 && x != 1.0)
    throw usage_error("non-binary observation; use a continuous method for "
                      "real-valued data");
  buffer_[buffered_++] = x == 1.0 ? 1 : 0;
  ++observed_;
  if (buffered_ < 3) return;
  buffered_ = 0;
  const EValue e = state_.step_triple(buffer_);
  trajectory_.append_log_factor(observed_, std::log(e.value));
}

void BinaryTripleTester::finish() {
  for (int i = 0; i < buffered_; ++i) state_.ingest_solo(buffer_[i]);
  buffered_ = 0;
}

ContinuousTripleTester::ContinuousTripleTester() : trajectory_(3) {}

void ContinuousTripleTester::observe(double x) {
  require_finite(x);
  buffer_[buffered_++] = x;
  ++observed_;
  if (buffered_ < 3) return;
  buffered_ = 0;
  const double log_e = state_.step_triple_log(buffer_);
  trajectory_.append_log_factor(observed_, log_e);
}

void ContinuousTripleTester::finish() {
  for (int i = 0; i < buffered_; ++i) state_.ingest_solo(buffer_[i]);
  buffered_ = 0;
}

double triple_growth_rate_markov(const MarkovParams& params) {
  params.require_interior();
  double total = 0.0;
  for (int i : {0, 1}) {
    const double pi = params.stationary(i);
    for (int j : {0, 1}) {
      for (int k : {0, 1}) {
        for (int l : {0, 1}) {
          if (j == k && k == l) continue;
          const double path =
              params.trans(j, i) * params.trans(k, j) * params.trans(l, k);
          double denom = 0.0;
          for (const auto& ordering : distinct_orderings({j, k, l}))
            denom += params.trans(ordering[0], i) *
                     params.trans(ordering[1], ordering[0]) *
                     params.trans(ordering[2], ordering[1]);
          total += std::log(3.0 * path / denom) * pi * path;
        }
      }
    }
  }
  return total / 3.0;
}

McEstimate triple_growth_rate_ar1_mc(const AR1Params& params, std::int64_t samples,
                                     std::uint64_t seed) {
  if (!(std::abs(params.a) < 1.0))
    throw numeric_error("AR(1) oracle requires |a| < 1");
  if (!(params.sigma2 > 0.0)) throw numeric_error("AR(1) oracle requires sigma2 > 0");
  if (samples < 2) throw usage_error("at least two Monte-Carlo samples required");
  rng::NormalSampler normal(rng::substream_seed(seed, 0));
  const double sd = std::sqrt(params.sigma2);
  const double sd0 = std::sqrt(params.sigma2 / (1.0 - params.a * params.a));
  std::int64_t n = 0;
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double x3 = sd0 * normal.next();
    const double x4 = params.a * x3 + sd * normal.next();
    const double x5 = params.a * x4 + sd * normal.next();
    const double x6 = params.a * x5 + sd * normal.next();
    const double v = triple_score_continuous_log(params.a, params.sigma2, x3,
                                                 {x4, x5, x6}) / 3.0;
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  const double se =
      std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  return {mean, se, samples, seed};
}

}  // namespace pairbet
