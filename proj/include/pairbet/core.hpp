#pragma once
// Shared abstractions for sequential testing by betting: the wealth ledger,
// e-value composition, the level-alpha first-crossing rule, and the streaming
// tester interface every method implements.
//
// Wealth arithmetic is carried in log space throughout; over 1e5 steps the
// wealth spans hundreds of orders of magnitude.

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "pairbet/errors.hpp"

namespace pairbet {

// Multiplicative evidence factor for one betting round. value >= 0, finite;
// conditional expectation <= 1 under the null.
struct EValue {
  double value = 1.0;
};

// Where the pairing starts. The two games use different coarsenings of the
// data filtration and are never averaged.
enum class PairingPhase {
  odd,   // pairs (x1,x2), (x3,x4), ...
  even,  // x1 consumed alone, then pairs (x2,x3), (x4,x5), ...
};

struct WealthPoint {
  std::int64_t time = 0;
  double log_wealth = 0.0;
};

// Log-wealth recorded at every permitted stopping time. Permitted times are
// offset + k*stride for k = 1, 2, ...: stride 2 for pairwise betting, 3 for
// triples, 1 for the baselines. offset is 0 except in the "even game", where
// pairs complete at odd times. Initial wealth is 1 (log-wealth 0 at time 0,
// implicit). Append-only; immutable afterwards, safe to move across threads.
class WealthTrajectory {
 public:
  explicit WealthTrajectory(int stop_stride, int phase_offset = 0);

  int stop_stride() const { return stride_; }
  int phase_offset() const { return offset_; }
  const std::vector<WealthPoint>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::int64_t last_time() const { return entries_.empty() ? 0 : entries_.back().time; }
  double last_log_wealth() const { return entries_.empty() ? 0.0 : entries_.back().log_wealth; }

  // Multiplies wealth by exp(log_factor) at `time`. Usage error if time is
  // not a permitted index strictly after the last entry; numeric error if the
  // factor is not finite (an e-value of zero kills the wealth irrecoverably
  // and signals an estimator that was not floored).
  void append_log_factor(std::int64_t time, double log_factor);

  // Records an absolute log-wealth value; used by methods that evaluate their
  // evidence process in closed form rather than as a running product.
  void append_absolute(std::int64_t time, double log_wealth);

 private:
  void check_time(std::int64_t time) const;

  std::vector<WealthPoint> entries_;
  int stride_;
  int offset_;
};

// Value-semantics form of the wealth update: returns the extended trajectory.
WealthTrajectory update_wealth(WealthTrajectory trajectory, EValue e, std::int64_t time);

// First crossing of the 1/alpha threshold at a permitted time.
struct StoppingDecision {
  bool rejected = false;
  std::optional<std::int64_t> stop_time;
  double threshold = 0.0;  // 1/alpha
};

// Comparison is done in log space: log-wealth >= -log(alpha). Usage error for
// alpha outside (0,1). Pure function of (trajectory, alpha).
StoppingDecision stop_rule(const WealthTrajectory& trajectory, double alpha);

// Streaming tester interface. Implementations are single-threaded state
// machines; independent instances may run on different threads.
class Tester {
 public:
  virtual ~Tester() = default;

  // Consumes one observation. Binary methods reject values outside {0,1}.
  virtual void observe(double x) = 0;

  // Marks the end of the stream: a trailing observation that never completed
  // a round is folded into the estimator state. Generates no bet and never
  // changes the trajectory.
  virtual void finish() {}

  virtual const WealthTrajectory& trajectory() const = 0;
  virtual std::string_view method_name() const = 0;
};

}  // namespace pairbet
