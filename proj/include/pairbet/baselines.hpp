#pragma once
// The two comparison methods: the closed-form universal-inference e-process
// R_n over binary sequences, and the conformal simple-jumper test martingale
// driven by rank-based p-values.

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "pairbet/binary_pairwise.hpp"
#include "pairbet/core.hpp"
#include "pairbet/rng.hpp"

namespace pairbet {

// Counts for the universal-inference e-process.
class UniversalState {
 public:
  void ingest(int symbol) { counts_.ingest(symbol); }
  const TransitionCounts& counts() const { return counts_; }
  std::int64_t observed() const { return counts_.observed(); }

  // log R_n via log-gamma:
  //   R_n = Gamma(n00+1/2) Gamma(n01+1/2) Gamma(n10+1/2) Gamma(n11+1/2)
  //         / (2 Gamma(1/2)^4 Gamma(n00+n10+1) Gamma(n01+n11+1))
  //         / ((n1/n)^{n1} (n0/n)^{n0}),   0^0 = 1,
  // where n_{i|j} counts transitions from j to i. Usage error when no
  // observation has been consumed. R_n is an e-process, not a test
  // supermartingale; thresholding applies at every time (stride 1).
  double log_evalue() const;

 private:
  TransitionCounts counts_;
};

class UniversalTester final : public Tester {
 public:
  UniversalTester();

  void observe(double x) override;
  const WealthTrajectory& trajectory() const override { return trajectory_; }
  std::string_view method_name() const override { return "universal"; }

 private:
  UniversalState state_;
  WealthTrajectory trajectory_;
};

// Conformal p-value with the identity nonconformity score and randomized
// tie-breaking:
//   p = (#{values > x} + theta * #{ties, including x itself}) / (n + 1)
// over the history plus the new value, theta in [0,1).
double conformal_pvalue(std::span<const double> history, double x, double theta);

// Order statistics over the values consumed so far; O(log n) insert/rank.
class RankAccumulator {
 public:
  RankAccumulator();
  ~RankAccumulator();
  RankAccumulator(RankAccumulator&&) noexcept;
  RankAccumulator& operator=(RankAccumulator&&) noexcept;

  void insert(double x);
  std::int64_t count_greater(double x) const;
  std::int64_t count_equal(double x) const;
  std::int64_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Simple-jumper calibrator: three capital accounts for the betting functions
// f_eps(p) = 1 + eps (p - 1/2), eps in {-1, 0, 1}, mixed through a jump-rate-J
// Markov chain. Each step first mixes capital
//   (capital <- (1-J) capital + J/3 total)
// and then multiplies account eps by f_eps(p). This finite-state dynamic
// program evaluates the defining mixture integral exactly, in linear time.
class SimpleJumper {
 public:
  explicit SimpleJumper(double jump_rate);

  // Returns the martingale value (sum of capitals). Numeric error for p
  // outside (0,1].
  double step(double p);

  double value() const;
  std::array<double, 3> capitals() const;  // eps = -1, 0, +1
  double jump_rate() const { return rate_; }

 private:
  // Stored scaled by 3 so that the all-equal state is exact in floating
  // point; value() divides the scale back out.
  std::array<double, 3> scaled_{1.0, 1.0, 1.0};
  double rate_;
};

class ConformalJumperTester final : public Tester {
 public:
  ConformalJumperTester(double jump_rate, std::uint64_t seed);

  void observe(double x) override;
  const WealthTrajectory& trajectory() const override { return trajectory_; }
  std::string_view method_name() const override { return "conformal"; }

  double last_pvalue() const { return last_pvalue_; }

 private:
  RankAccumulator ranks_;
  SimpleJumper jumper_;
  WealthTrajectory trajectory_;
  rng::Xoshiro256pp theta_;
  double last_pvalue_ = 0.0;
  std::int64_t observed_ = 0;
};

}  // namespace pairbet
