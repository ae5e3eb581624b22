#include "pairbet/triple_betting.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pairbet/rng.hpp"

using namespace pairbet;

namespace {

const std::array<std::array<int, 3>, 6> kPerms = {
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

double kernel_g(double a, double s2, double w, const std::array<double, 3>& v) {
  const double r1 = v[0] - a * w;
  const double r2 = v[1] - a * v[0];
  const double r3 = v[2] - a * v[1];
  return std::exp(-(r1 * r1 + r2 * r2 + r3 * r3) / (2.0 * s2));
}

}  // namespace

TEST_SUITE("triple_betting") {

TEST_CASE("binary triple score: no-bet and iid-shaped cases") {
  const auto est = TransitionEstimate::from_probs(0.9, 0.1);
  CHECK(triple_score_binary(est, {0, {1, 1, 1}}).value == 1.0);
  CHECK(triple_score_binary(est, {1, {0, 0, 0}}).value == 1.0);

  // equal rows: every permutation of the multiset is equally likely
  const auto iid = TransitionEstimate::from_probs(0.6, 0.6);
  for (int prev : {0, 1})
    for (int x : {0, 1})
      for (int y : {0, 1})
        for (int z : {0, 1})
          CHECK(triple_score_binary(iid, {prev, {x, y, z}}).value ==
                doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("binary triple score by direct enumeration") {
  const auto est = TransitionEstimate::from_probs(0.9, 0.1);
  const auto h = [&](int w, int x, int y, int z) {
    return est.prob(x, w) * est.prob(y, x) * est.prob(z, y);
  };
  // permutations of {1,0,1}: (1,0,1), (1,1,0), (0,1,1)
  const double expected =
      3.0 * h(0, 1, 0, 1) / (h(0, 1, 0, 1) + h(0, 1, 1, 0) + h(0, 0, 1, 1));
  CHECK(triple_score_binary(est, {0, {1, 0, 1}}).value ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("fair game: binary scores over the distinct orderings sum to 3") {
  rng::Xoshiro256pp gen(23);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto est = TransitionEstimate::from_probs(0.01 + 0.98 * gen.uniform01(),
                                                    0.01 + 0.98 * gen.uniform01());
    const int prev = gen.uniform01() < 0.5;
    std::array<int, 3> multiset{static_cast<int>(gen.uniform01() < 0.5),
                                static_cast<int>(gen.uniform01() < 0.5), 0};
    multiset[2] = multiset[0] == multiset[1] ? 1 - multiset[0] : multiset[0];

    std::vector<std::array<int, 3>> orderings;
    for (const auto& p : kPerms) {
      std::array<int, 3> candidate{multiset[p[0]], multiset[p[1]], multiset[p[2]]};
      if (std::find(orderings.begin(), orderings.end(), candidate) == orderings.end())
        orderings.push_back(candidate);
    }
    REQUIRE(orderings.size() == 3);
    double sum = 0.0;
    for (const auto& ordering : orderings) {
      const double value = triple_score_binary(est, {prev, ordering}).value;
      CHECK(value > 0.0);
      CHECK(value < 3.0);
      sum += value;
    }
    CHECK(sum == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("continuous triple score: symmetric cases and direct evaluation") {
  // a_hat = 0 makes g permutation-symmetric
  CHECK(triple_score_continuous_log(0.0, 1.4, 0.3, {1.0, -0.2, 0.7}) == 0.0);

  const double a = 0.8, s2 = 1.0, prev = 0.5;
  const std::array<double, 3> v{1.0, 0.6, 0.2};
  double denom = 0.0;
  for (const auto& p : kPerms)
    denom += kernel_g(a, s2, prev, {v[p[0]], v[p[1]], v[p[2]]});
  const double direct = std::log(6.0 * kernel_g(a, s2, prev, v) / denom);
  CHECK(triple_score_continuous_log(a, s2, prev, v) ==
        doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("repeated values: summing over index permutations keeps the identity") {
  const double a = 0.7, s2 = 0.9, prev = -0.2;
  const std::array<double, 3> tied{1.1, 1.1, -0.4};
  double sum = 0.0;
  for (const auto& p : kPerms) {
    // scores attached to index permutations, duplicates included
    sum += std::exp(triple_score_continuous_log(
        a, s2, prev, {tied[p[0]], tied[p[1]], tied[p[2]]}));
  }
  CHECK(sum == doctest::Approx(6.0).epsilon(1e-10));
}

TEST_CASE("fair game: continuous scores over the 6 index permutations sum to 6") {
  rng::Xoshiro256pp gen(29);
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = 2.0 * gen.uniform01() - 1.0;
    const double s2 = 0.1 + 2.0 * gen.uniform01();
    const double prev = 4.0 * (gen.uniform01() - 0.5);
    const std::array<double, 3> v{4.0 * (gen.uniform01() - 0.5),
                                  4.0 * (gen.uniform01() - 0.5),
                                  4.0 * (gen.uniform01() - 0.5)};
    double sum = 0.0;
    for (const auto& p : kPerms)
      sum += std::exp(
          triple_score_continuous_log(a, s2, prev, {v[p[0]], v[p[1]], v[p[2]]}));
    CHECK(sum == doctest::Approx(6.0).epsilon(1e-10));
  }
}

TEST_CASE("no bet in the first round, then plug-in scores") {
  BinaryTripleState state;
  CHECK(state.step_triple({1, 1, 1}).value == 1.0);
  // counts hold n(1->1)=2: rows p(.|1) = (1/4, 3/4), p(.|0) = (1/2, 1/2).
  // For (1,0,1) after prev=1: h(101) = (3/4)(1/4)(1/2), h(110) = (3/4)(3/4)(1/4),
  // h(011) = (1/4)(1/2)(3/4); the score is 3 h(101) / sum = 6/7.
  const double second = state.step_triple({1, 0, 1}).value;
  CHECK(second == doctest::Approx(6.0 / 7.0).epsilon(1e-14));

  ContinuousTripleState cstate;
  CHECK(cstate.step_triple_log({0.4, -1.0, 0.2}) == 0.0);  // first round
  CHECK(cstate.step_triple_log({1.0, 0.3, 0.9}) == 0.0);   // fit has 3 obs, warming up
  CHECK(cstate.step_triple_log({-0.5, 0.8, 0.1}) != 0.0);  // fit has 6 obs
}

TEST_CASE("exact martingale at a spot check") {
  CHECK(testutil::enumerate_triple_mean(0.3, 6) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("triple growth rate: zero on the diagonal, known value off it") {
  for (double p : {0.2, 0.5, 0.8})
    CHECK(std::abs(triple_growth_rate_markov({p, p})) <= 1e-12);
  const double rate = triple_growth_rate_markov({0.9, 0.1});
  CHECK(rate == doctest::Approx(0.20907072351852551).epsilon(1e-12));
  CHECK_THROWS_AS(triple_growth_rate_markov({0.5, 1.0}), numeric_error);
}

TEST_CASE("triples grow faster than pairs at the reference configurations") {
  for (auto [p10, p11] : {std::pair{0.9, 0.1}, std::pair{0.6, 0.4},
                          std::pair{0.1, 0.9}, std::pair{0.4, 0.6}}) {
    CHECK(triple_growth_rate_markov({p10, p11}) >
          markov_growth_rate({p10, p11}));
  }
}

TEST_CASE("triple growth rate is invariant under symbol relabeling") {
  for (int i = 1; i <= 9; i += 2) {
    for (int j = 1; j <= 9; j += 2) {
      const MarkovParams params{i / 10.0, j / 10.0};
      const MarkovParams relabeled{1.0 - params.p11, 1.0 - params.p10};
      CHECK(triple_growth_rate_markov(params) ==
            doctest::Approx(triple_growth_rate_markov(relabeled)).epsilon(1e-12));
    }
  }
}

TEST_CASE("continuous triple oracle rate") {
  const auto at_zero = triple_growth_rate_ar1_mc({0.0, 1.0}, 10000, 5);
  CHECK(at_zero.estimate == 0.0);

  const auto pairwise = ar1_growth_rate_mc({0.8, 1.0}, 200000, 5);
  const auto triple = triple_growth_rate_ar1_mc({0.8, 1.0}, 200000, 5);
  CHECK(triple.estimate > 3.0 * triple.std_error);
  CHECK(triple.estimate - pairwise.estimate >
        3.0 * std::hypot(triple.std_error, pairwise.std_error));
  CHECK_THROWS_AS(triple_growth_rate_ar1_mc({-1.2, 1.0}, 1000, 5), numeric_error);
}

TEST_CASE("tester strides by three") {
  BinaryTripleTester tester;
  for (double x : {1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0}) tester.observe(x);
  tester.finish();
  const auto& entries = tester.trajectory().entries();
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].time == 3);
  CHECK(entries[1].time == 6);
  CHECK(tester.trajectory().stop_stride() == 3);
}

}  // TEST_SUITE
