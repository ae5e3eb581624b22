#include "pairbet/core.hpp"

#include <doctest.h>

#include <cmath>

using namespace pairbet;

TEST_SUITE("core") {

TEST_CASE("wealth update appends multiplicative factors in log space") {
  WealthTrajectory traj(2);
  traj = update_wealth(std::move(traj), EValue{1.0}, 2);
  REQUIRE(traj.entries().size() == 1);
  CHECK(traj.entries()[0].time == 2);
  CHECK(traj.entries()[0].log_wealth == 0.0);

  traj = update_wealth(std::move(traj), EValue{2.0}, 4);
  CHECK(traj.entries()[1].log_wealth == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  traj = update_wealth(std::move(traj), EValue{0.5}, 6);
  CHECK(traj.entries()[2].log_wealth == 0.0);  // inverse factor cancels exactly
}

TEST_CASE("wealth update rejects misuse") {
  WealthTrajectory traj(2);
  traj.append_log_factor(4, 0.1);
  CHECK_THROWS_AS(traj.append_log_factor(4, 0.0), usage_error);   // non-monotone
  CHECK_THROWS_AS(traj.append_log_factor(2, 0.0), usage_error);
  CHECK_THROWS_AS(traj.append_log_factor(7, 0.0), usage_error);   // off-stride
  CHECK_THROWS_AS(update_wealth(WealthTrajectory(2), EValue{0.0}, 2), numeric_error);
  CHECK_THROWS_AS(
      update_wealth(WealthTrajectory(2), EValue{std::nan("")}, 2), numeric_error);
}

TEST_CASE("phase offset shifts the permitted times") {
  WealthTrajectory traj(2, 1);  // even game: pairs complete at odd times
  traj.append_log_factor(3, 0.0);
  traj.append_log_factor(5, 0.0);
  CHECK_THROWS_AS(traj.append_log_factor(8, 0.0), usage_error);
}

TEST_CASE("stop rule finds the first permitted crossing") {
  WealthTrajectory traj(2);
  traj.append_log_factor(2, 1.0);
  traj.append_log_factor(4, 2.1);  // cumulative 3.1 >= log(20) ~ 2.9957

  const auto decision = stop_rule(traj, 0.05);
  CHECK(decision.rejected);
  REQUIRE(decision.stop_time.has_value());
  CHECK(*decision.stop_time == 4);
  CHECK(decision.threshold == doctest::Approx(20.0));

  // idempotent, pure function of (trajectory, alpha)
  const auto again = stop_rule(traj, 0.05);
  CHECK(again.rejected == decision.rejected);
  CHECK(again.stop_time == decision.stop_time);
}

TEST_CASE("stop rule below threshold never rejects") {
  WealthTrajectory traj(2);
  traj.append_log_factor(2, 1.0);
  traj.append_log_factor(4, 1.5);  // 2.5 < log 20
  const auto decision = stop_rule(traj, 0.05);
  CHECK_FALSE(decision.rejected);
  CHECK_FALSE(decision.stop_time.has_value());
}

TEST_CASE("stop rule can fire at the first permitted time") {
  WealthTrajectory traj(2);
  traj.append_log_factor(2, 3.1);
  const auto decision = stop_rule(traj, 0.05);
  CHECK(decision.rejected);
  CHECK(*decision.stop_time == 2);
}

TEST_CASE("stop rule validates alpha") {
  WealthTrajectory traj(2);
  CHECK_THROWS_AS(stop_rule(traj, 0.0), usage_error);
  CHECK_THROWS_AS(stop_rule(traj, 1.0), usage_error);
  CHECK_THROWS_AS(stop_rule(traj, -0.3), usage_error);
}

}  // TEST_SUITE
