#include "pairbet/core.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace pairbet {

WealthTrajectory::WealthTrajectory(int stop_stride, int phase_offset)
    : stride_(stop_stride), offset_(phase_offset) {
  if (stop_stride < 1) throw usage_error("stop stride must be positive");
  if (phase_offset < 0 || phase_offset >= stop_stride)
    throw usage_error("phase offset must lie in [0, stride)");
}

void WealthTrajectory::check_time(std::int64_t time) const {
  if (time <= last_time())
    throw usage_error("wealth entry at time " + std::to_string(time) +
                      " does not follow the last recorded index " +
                      std::to_string(last_time()));
  if ((time - offset_) % stride_ != 0 || time < offset_ + stride_)
    throw usage_error("time " + std::to_string(time) +
                      " is not a permitted stopping time (stride " +
                      std::to_string(stride_) + ")");
}

void WealthTrajectory::append_log_factor(std::int64_t time, double log_factor) {
  check_time(time);
  if (!std::isfinite(log_factor))
    throw numeric_error("non-finite wealth factor at time " + std::to_string(time) +
                        "; e-values must be strictly positive and finite");
  entries_.push_back({time, last_log_wealth() + log_factor});
}

void WealthTrajectory::append_absolute(std::int64_t time, double log_wealth) {
  check_time(time);
  if (!std::isfinite(log_wealth))
    throw numeric_error("non-finite log-wealth at time " + std::to_string(time));
  entries_.push_back({time, log_wealth});
}

WealthTrajectory update_wealth(WealthTrajectory trajectory, EValue e, std::int64_t time) {
  if (!(e.value > 0.0) || !std::isfinite(e.value))
    throw numeric_error("e-value must be strictly positive and finite (got " +
                        std::to_string(e.value) + ")");
  trajectory.append_log_factor(time, std::log(e.value));
  return trajectory;
}

StoppingDecision stop_rule(const WealthTrajectory& trajectory, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw usage_error("alpha must lie in (0,1)");
  StoppingDecision decision;
  decision.threshold = 1.0 / alpha;
  const double log_threshold = -std::log(alpha);
  for (const auto& entry : trajectory.entries()) {
    if (entry.log_wealth >= log_threshold) {
      decision.rejected = true;
      decision.stop_time = entry.time;
      break;
    }
  }
  return decision;
}

}  // namespace pairbet
