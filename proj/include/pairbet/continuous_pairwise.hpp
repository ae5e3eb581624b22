#pragma once
// Pairwise betting on real-valued sequences against a Gaussian AR(1)
// alternative: streaming least-squares fit, the log-space pair likelihood
// ratio, the wealth process W, and Monte-Carlo growth-rate oracles.

#include <cstdint>

#include "pairbet/core.hpp"

namespace pairbet {

// Streaming least-squares AR(1) fit over the observations consumed so far:
//   a_hat      = sum_{i=2..t} x_i x_{i-1} / sum_{i=1..t-1} x_i^2
//   sigma2_hat = (1/(t-1)) sum_{i=2..t} (x_i - a_hat x_{i-1})^2
// sigma2_hat is exactly 0 after two observations (one residual from an exact
// interpolation), which is why scoring applies a floor and the testers warm
// up before betting.
class AR1Fit {
 public:
  static constexpr double kVarianceFloor = 1e-12;

  // Numeric error on non-finite input.
  void ingest(double x);

  std::int64_t observed() const { return count_; }
  double last() const { return last_; }
  double a_hat() const;
  double sigma2_hat() const;
  double sigma2_floored() const;

 private:
  double sum_sq_from2_ = 0.0;   // sum x_i^2, i = 2..t
  double sum_lag_prod_ = 0.0;   // sum x_i x_{i-1}, i = 2..t
  double sum_sq_lagged_ = 0.0;  // sum x_i^2, i = 1..t-1
  double last_ = 0.0;
  std::int64_t count_ = 0;
};

// log S for one revealed pair:
//   log 2 + log f(x_prev, x_t, x_t1) - log(f(x_prev, x_t, x_t1) +
//                                          f(x_prev, x_t1, x_t))
// with f the AR(1) conditional density whose constant prefactor cancels.
// Quadratic exponents are combined with log-sum-exp; the result lies in
// (-inf, log 2). Ties x_t == x_t1 give exactly 0 (the swap is the identity).
// Numeric error on non-finite inputs or a nonpositive variance.
double log_pair_likelihood_ratio(double a_hat, double sigma2_hat, double x_prev,
                                 double x_t, double x_t1);
// Same, with the fit's floored variance.
double log_pair_likelihood_ratio(const AR1Fit& fit, double x_prev, double x_t,
                                 double x_t1);

// State machine for the continuous pairwise game. No bet on the first pair,
// and none until at least four observations have been ingested (the earliest
// point where both a_hat and a nonzero sigma2_hat are well defined);
// afterwards the score is exp(log_pair_likelihood_ratio) with the fit built
// from the observations revealed before the pair.
class ContinuousPairwiseState {
 public:
  static constexpr std::int64_t kWarmupObservations = 4;

  double step_pair_log(double x_t, double x_t1);
  EValue step_pair(double x_t, double x_t1);
  void ingest_solo(double x);

  const AR1Fit& fit() const { return fit_; }
  std::int64_t pairs_scored() const { return pairs_scored_; }

 private:
  AR1Fit fit_;
  std::int64_t pairs_scored_ = 0;
};

class ContinuousPairwiseTester final : public Tester {
 public:
  explicit ContinuousPairwiseTester(PairingPhase phase = PairingPhase::odd);

  void observe(double x) override;
  void finish() override;
  const WealthTrajectory& trajectory() const override { return trajectory_; }
  std::string_view method_name() const override { return "pairwise-continuous"; }
  const ContinuousPairwiseState& state() const { return state_; }

 private:
  ContinuousPairwiseState state_;
  WealthTrajectory trajectory_;
  PairingPhase phase_;
  std::int64_t observed_ = 0;
  double pending_ = 0.0;
  bool have_pending_ = false;
};

// Gaussian AR(1) parameters: x_{t+1} = a x_t + eps, eps ~ N(0, sigma2).
struct AR1Params {
  enum class Init {
    stationary,  // x_1 ~ N(0, sigma2/(1-a^2)); requires |a| < 1
    standard,    // x_1 ~ N(0, 1)
  };

  double a = 0.0;
  double sigma2 = 1.0;
  Init init = Init::stationary;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

// Monte-Carlo estimate of r* = (1/2) E[log S_4], the growth rate of the
// oracle that bets with the true parameters on stationary draws. Numeric
// error unless |a| < 1 and sigma2 > 0.
McEstimate ar1_growth_rate_mc(const AR1Params& params, std::int64_t samples,
                              std::uint64_t seed);

// Monte-Carlo estimate of E[1/S_4] under the supplied process; at most 1
// (within error) under the AR(1) alternative, the sufficient condition for
// positivity on general ergodic inputs.
McEstimate inverse_evalue_check(const AR1Params& params, std::int64_t samples,
                                std::uint64_t seed);

}  // namespace pairbet
