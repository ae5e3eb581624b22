#include "pairbet/continuous_pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pairbet/rng.hpp"

namespace pairbet {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw numeric_error(std::string("non-finite ") + what);
}

// log(1 + exp(d)), stable for large |d|.
double softplus(double d) {
  return d > 0.0 ? d + std::log1p(std::exp(-d)) : std::log1p(std::exp(d));
}

struct RunningMoments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

void require_ar1_domain(const AR1Params& params) {
  if (!(std::abs(params.a) < 1.0))
    throw numeric_error("AR(1) oracle requires |a| < 1");
  if (!(params.sigma2 > 0.0))
    throw numeric_error("AR(1) oracle requires sigma2 > 0");
}

}  // namespace

void AR1Fit::ingest(double x) {
  require_finite(x, "observation");
  if (count_ >= 1) {
    sum_sq_from2_ += x * x;
    sum_lag_prod_ += x * last_;
    sum_sq_lagged_ += last_ * last_;
  }
  last_ = x;
  ++count_;
}

double AR1Fit::a_hat() const {
  if (count_ < 2 || !(sum_sq_lagged_ > 0.0)) return 0.0;
  return sum_lag_prod_ / sum_sq_lagged_;
}

double AR1Fit::sigma2_hat() const {
  if (count_ < 2) return 0.0;
  const double a = a_hat();
  const double rss =
      sum_sq_from2_ - 2.0 * a * sum_lag_prod_ + a * a * sum_sq_lagged_;
  return std::max(rss, 0.0) / static_cast<double>(count_ - 1);
}

double AR1Fit::sigma2_floored() const { return std::max(sigma2_hat(), kVarianceFloor); }

double log_pair_likelihood_ratio(double a_hat, double sigma2_hat, double x_prev,
                                 double x_t, double x_t1) {
  require_finite(a_hat, "autoregression coefficient");
  require_finite(x_prev, "observation");
  require_finite(x_t, "observation");
  require_finite(x_t1, "observation");
  if (!(sigma2_hat > 0.0)) throw numeric_error("nonpositive variance; apply the floor");
  if (x_t == x_t1) return 0.0;  // the swap is the identity permutation

  const double inv2s = 1.0 / (2.0 * sigma2_hat);
  const auto quad = [&](double w, double y, double z) {
    const double r1 = y - a_hat * w;
    const double r2 = z - a_hat * y;
    return -(r1 * r1 + r2 * r2) * inv2s;
  };
  const double diff = quad(x_prev, x_t1, x_t) - quad(x_prev, x_t, x_t1);
  if (diff == 0.0) return 0.0;
  // log 2 + q_obs - logsumexp(q_obs, q_swap)
  return std::numbers::ln2 - softplus(diff);
}

double log_pair_likelihood_ratio(const AR1Fit& fit, double x_prev, double x_t,
                                 double x_t1) {
  return log_pair_likelihood_ratio(fit.a_hat(), fit.sigma2_floored(), x_prev, x_t,
                                   x_t1);
}

double ContinuousPairwiseState::step_pair_log(double x_t, double x_t1) {
  double log_e = 0.0;
  if (pairs_scored_ > 0 && fit_.observed() >= kWarmupObservations)
    log_e = log_pair_likelihood_ratio(fit_, fit_.last(), x_t, x_t1);
  fit_.ingest(x_t);
  fit_.ingest(x_t1);
  ++pairs_scored_;
  return log_e;
}

EValue ContinuousPairwiseState::step_pair(double x_t, double x_t1) {
  return EValue{std::exp(step_pair_log(x_t, x_t1))};
}

void ContinuousPairwiseState::ingest_solo(double x) { fit_.ingest(x); }

ContinuousPairwiseTester::ContinuousPairwiseTester(PairingPhase phase)
    : trajectory_(2, phase == PairingPhase::even ? 1 : 0), phase_(phase) {}

void ContinuousPairwiseTester::observe(double x) {
  require_finite(x, "observation");
  ++observed_;
  if (phase_ == PairingPhase::even && observed_ == 1) {
    state_.ingest_solo(x);
    return;
  }
  if (!have_pending_) {
    pending_ = x;
    have_pending_ = true;
    return;
  }
  const double log_e = state_.step_pair_log(pending_, x);
  have_pending_ = false;
  trajectory_.append_log_factor(observed_, log_e);
}

void ContinuousPairwiseTester::finish() {
  if (have_pending_) {
    state_.ingest_solo(pending_);
    have_pending_ = false;
  }
}

McEstimate ar1_growth_rate_mc(const AR1Params& params, std::int64_t samples,
                              std::uint64_t seed) {
  require_ar1_domain(params);
  if (samples < 2) throw usage_error("at least two Monte-Carlo samples required");
  rng::NormalSampler normal(rng::substream_seed(seed, 0));
  const double sd = std::sqrt(params.sigma2);
  const double sd0 = std::sqrt(params.sigma2 / (1.0 - params.a * params.a));
  RunningMoments moments;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double x2 = sd0 * normal.next();
    const double x3 = params.a * x2 + sd * normal.next();
    const double x4 = params.a * x3 + sd * normal.next();
    moments.add(0.5 *
                log_pair_likelihood_ratio(params.a, params.sigma2, x2, x3, x4));
  }
  return {moments.mean, moments.std_error(), samples, seed};
}

McEstimate inverse_evalue_check(const AR1Params& params, std::int64_t samples,
                                std::uint64_t seed) {
  require_ar1_domain(params);
  if (samples < 2) throw usage_error("at least two Monte-Carlo samples required");
  rng::NormalSampler normal(rng::substream_seed(seed, 0));
  const double sd = std::sqrt(params.sigma2);
  const double sd0 = std::sqrt(params.sigma2 / (1.0 - params.a * params.a));
  RunningMoments moments;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double x2 = sd0 * normal.next();
    const double x3 = params.a * x2 + sd * normal.next();
    const double x4 = params.a * x3 + sd * normal.next();
    moments.add(std::exp(
        -log_pair_likelihood_ratio(params.a, params.sigma2, x2, x3, x4)));
  }
  return {moments.mean, moments.std_error(), samples, seed};
}

}  // namespace pairbet
