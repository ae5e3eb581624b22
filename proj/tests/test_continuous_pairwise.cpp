#include "pairbet/continuous_pairwise.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

#include "pairbet/rng.hpp"
#include "pairbet/simulate.hpp"

using namespace pairbet;

namespace {

// Direct (non-streaming) least squares over a full path.
std::pair<double, double> batch_fit(const std::vector<double>& x) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) num += x[i] * x[i - 1];
  for (std::size_t i = 0; i + 1 < x.size(); ++i) den += x[i] * x[i];
  const double a = num / den;
  double rss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double r = x[i] - a * x[i - 1];
    rss += r * r;
  }
  return {a, rss / static_cast<double>(x.size() - 1)};
}

// f with unit prefactor dropped; safe at moderate magnitudes.
double density_kernel(double a, double s2, double w, double y, double z) {
  const double r1 = y - a * w;
  const double r2 = z - a * y;
  return std::exp(-(r1 * r1 + r2 * r2) / (2.0 * s2));
}

}  // namespace

TEST_SUITE("continuous_pairwise") {

TEST_CASE("streaming fit matches the batch least-squares formulas") {
  rng::NormalSampler normal(3);
  std::vector<double> path;
  AR1Fit fit;
  for (int i = 0; i < 400; ++i) {
    path.push_back(normal.next() + 0.5 * (path.empty() ? 0.0 : path.back()));
    fit.ingest(path.back());
  }
  const auto [a, s2] = batch_fit(path);
  CHECK(fit.a_hat() == doctest::Approx(a).epsilon(1e-12));
  CHECK(fit.sigma2_hat() == doctest::Approx(s2).epsilon(1e-10));
}

TEST_CASE("two observations interpolate exactly: sigma2_hat is zero") {
  AR1Fit fit;
  fit.ingest(1.7);
  fit.ingest(-0.4);
  CHECK(fit.a_hat() == doctest::Approx(-0.4 / 1.7).epsilon(1e-15));
  CHECK(fit.sigma2_hat() == 0.0);
  CHECK(fit.sigma2_floored() == AR1Fit::kVarianceFloor);
  CHECK_THROWS_AS(fit.ingest(std::nan("")), numeric_error);
}

TEST_CASE("log pair ratio is zero under symmetry") {
  // a_hat = 0 makes f symmetric in its last two arguments
  CHECK(log_pair_likelihood_ratio(0.0, 2.3, 1.0, 0.4, -0.9) == 0.0);
  // the swap of a tied pair is the identity
  CHECK(log_pair_likelihood_ratio(0.8, 1.0, 0.2, 0.7, 0.7) == 0.0);
}

TEST_CASE("log pair ratio matches direct evaluation at moderate magnitudes") {
  const double a = 0.8, s2 = 1.0;
  const double f_obs = density_kernel(a, s2, 1.0, 0.9, 0.5);
  const double f_swap = density_kernel(a, s2, 1.0, 0.5, 0.9);
  const double direct = std::log(2.0 * f_obs / (f_obs + f_swap));
  CHECK(log_pair_likelihood_ratio(a, s2, 1.0, 0.9, 0.5) ==
        doctest::Approx(direct).epsilon(1e-9));
  CHECK_THROWS_AS(log_pair_likelihood_ratio(a, s2, std::nan(""), 0.9, 0.5),
                  numeric_error);
  CHECK_THROWS_AS(log_pair_likelihood_ratio(a, 0.0, 1.0, 0.9, 0.5), numeric_error);
}

TEST_CASE("log pair ratio survives magnitudes that overflow direct evaluation") {
  const double v = log_pair_likelihood_ratio(0.9, 1.0, 80.0, -75.0, 70.0);
  CHECK(std::isfinite(v));
  CHECK(v < std::log(2.0));
}

TEST_CASE("joint rescaling of data and variance leaves the ratio unchanged") {
  rng::Xoshiro256pp gen(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = 2.0 * gen.uniform01() - 1.0;
    const double s2 = 0.5 + gen.uniform01();
    const double w = 3.0 * (gen.uniform01() - 0.5);
    const double y = 3.0 * (gen.uniform01() - 0.5);
    const double z = 3.0 * (gen.uniform01() - 0.5);
    const double base = log_pair_likelihood_ratio(a, s2, w, y, z);
    for (double c : {1e-3, 1e3}) {
      const double scaled =
          log_pair_likelihood_ratio(a, c * c * s2, c * w, c * y, c * z);
      CHECK(scaled == doctest::Approx(base).epsilon(1e-9));
    }
  }
}

TEST_CASE("fair game: the two orders' scores sum to 2") {
  rng::Xoshiro256pp gen(17);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = 2.0 * gen.uniform01() - 1.0;
    const double s2 = 0.1 + 2.0 * gen.uniform01();
    const double w = 4.0 * (gen.uniform01() - 0.5);
    const double y = 4.0 * (gen.uniform01() - 0.5);
    const double z = 4.0 * (gen.uniform01() - 0.5);
    const double sum = std::exp(log_pair_likelihood_ratio(a, s2, w, y, z)) +
                       std::exp(log_pair_likelihood_ratio(a, s2, w, z, y));
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("warm-up: no bets before four observations are in the fit") {
  ContinuousPairwiseState state;
  CHECK(state.step_pair(0.3, -1.2).value == 1.0);   // first pair, never a bet
  CHECK(state.step_pair(2.0, 0.1).value == 1.0);    // fit holds 2 obs, warming up
  const double log_e = state.step_pair_log(1.4, -0.7);
  CHECK(log_e != 0.0);                              // first real bet, pair (x5,x6)
  CHECK(std::isfinite(log_e));
}

TEST_CASE("scores depend only on observations revealed before the pair") {
  ContinuousPairwiseState a;
  ContinuousPairwiseState b;
  for (double x : {0.4, -1.1, 0.9, 0.3}) {
    a.ingest_solo(x);
    b.ingest_solo(x);
  }
  a.step_pair(0.2, -0.5);
  b.step_pair(0.2, -0.5);
  const double score_a = a.step_pair_log(1.3, -0.2);
  const double score_b = b.step_pair_log(1.3, -0.2);
  CHECK(score_a == score_b);
  a.step_pair(5.0, -5.0);
  b.step_pair(0.0, 0.1);
  CHECK(score_a == score_b);
}

TEST_CASE("tester ledger has stride 2 and finite log-wealth") {
  ContinuousPairwiseTester tester;
  rng::NormalSampler normal(9);
  for (int i = 0; i < 101; ++i) tester.observe(normal.next());
  tester.finish();
  const auto& entries = tester.trajectory().entries();
  REQUIRE(entries.size() == 50);
  CHECK(entries.back().time == 100);
  for (const auto& e : entries) CHECK(std::isfinite(e.log_wealth));
}

TEST_CASE("oracle growth rate: exact zero in the iid case") {
  const auto at_zero = ar1_growth_rate_mc({0.0, 1.0}, 10000, 7);
  CHECK(at_zero.estimate == 0.0);  // S_4 is identically 1 when a = 0
  CHECK(at_zero.std_error == 0.0);
}

TEST_CASE("oracle growth rate: positive and asymmetric in the sign of a") {
  const auto pos = ar1_growth_rate_mc({0.8, 1.0}, 200000, 7);
  CHECK(pos.estimate > 3.0 * pos.std_error);
  const auto neg = ar1_growth_rate_mc({-0.8, 1.0}, 200000, 7);
  CHECK(neg.estimate > 3.0 * neg.std_error);
  // positive and negative a behave differently
  CHECK(std::abs(pos.estimate - neg.estimate) >
        3.0 * std::hypot(pos.std_error, neg.std_error));
  CHECK(pos.estimate > -3.0 * pos.std_error);
  CHECK_THROWS_AS(ar1_growth_rate_mc({1.0, 1.0}, 1000, 7), numeric_error);
}

TEST_CASE("inverse e-value stays at or below one under the alternative") {
  const auto at_zero = inverse_evalue_check({0.0, 1.0}, 10000, 3);
  CHECK(at_zero.estimate == 1.0);
  for (double a : {0.5, 0.8}) {
    const auto est = inverse_evalue_check({a, 1.0}, 400000, 3);
    CHECK(est.estimate <= 1.0 + 3.0 * est.std_error);
  }
}

TEST_CASE("least-squares estimates converge on a long path") {
  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::ar1;
  spec.ar1 = {0.8, 1.0, AR1Params::Init::stationary};
  spec.horizon = 100000;
  const auto path = generate(spec, 21);
  AR1Fit fit;
  for (double x : path) fit.ingest(x);
  CHECK(std::abs(fit.a_hat() - 0.8) <= 0.02);
  CHECK(std::abs(fit.sigma2_hat() - 1.0) <= 0.05);
}

TEST_CASE("plug-in wealth is a martingale under the null (Monte Carlo)") {
  const int reps = 4000;
  const int horizon = 20;
  rng::SplitMix64 seeds(2024);
  double sum = 0.0, sum_sq = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    rng::NormalSampler normal(seeds.next());
    ContinuousPairwiseState state;
    double log_wealth = 0.0;
    for (int i = 0; i < horizon; i += 2)
      log_wealth += state.step_pair_log(normal.next(), normal.next());
    const double wealth = std::exp(log_wealth);
    sum += wealth;
    sum_sq += wealth * wealth;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sum_sq - reps * mean * mean) / (reps - 1.0) / reps);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

}  // TEST_SUITE
