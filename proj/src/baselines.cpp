#include "pairbet/baselines.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>

namespace pairbet {

double UniversalState::log_evalue() const {
  const std::int64_t n = counts_.observed();
  if (n == 0) throw usage_error("universal e-process undefined before any observation");
  const double n00 = static_cast<double>(counts_.pair_count(0, 0));
  const double n10 = static_cast<double>(counts_.pair_count(0, 1));  // 1 after 0
  const double n01 = static_cast<double>(counts_.pair_count(1, 0));  // 0 after 1
  const double n11 = static_cast<double>(counts_.pair_count(1, 1));
  const double log_half_gamma = std::lgamma(0.5);

  const double log_mixture = std::lgamma(n00 + 0.5) + std::lgamma(n01 + 0.5) +
                             std::lgamma(n10 + 0.5) + std::lgamma(n11 + 0.5) -
                             std::log(2.0) - 4.0 * log_half_gamma -
                             std::lgamma(n00 + n10 + 1.0) -
                             std::lgamma(n01 + n11 + 1.0);

  // Null maximum likelihood (n1/n)^n1 (n0/n)^n0 with 0^0 = 1.
  double log_null_mle = 0.0;
  const double total = static_cast<double>(n);
  for (int s : {0, 1}) {
    const double count = static_cast<double>(counts_.symbol_count(s));
    if (count > 0.0) log_null_mle += count * std::log(count / total);
  }
  return log_mixture - log_null_mle;
}

UniversalTester::UniversalTester() : trajectory_(1) {}

void UniversalTester::observe(double x) {
  if (x != 0.0 && x != 1.0)
    throw usage_error("non-binary observation; the universal e-process is "
                      "defined for binary sequences only");
  state_.ingest(x == 1.0 ? 1 : 0);
  trajectory_.append_absolute(state_.observed(), state_.log_evalue());
}

double conformal_pvalue(std::span<const double> history, double x, double theta) {
  if (!(theta >= 0.0) || !(theta < 1.0))
    throw usage_error("tie-breaking draw must lie in [0,1)");
  if (!std::isfinite(x)) throw numeric_error("non-finite observation");
  std::int64_t greater = 0;
  std::int64_t ties = 1;  // x ties with itself
  for (double v : history) {
    if (v > x)
      ++greater;
    else if (v == x)
      ++ties;
  }
  return (static_cast<double>(greater) + theta * static_cast<double>(ties)) /
         static_cast<double>(history.size() + 1);
}

namespace {
using OrderedMultiset =
    __gnu_pbds::tree<std::pair<double, std::uint64_t>, __gnu_pbds::null_type,
                     std::less<std::pair<double, std::uint64_t>>,
                     __gnu_pbds::rb_tree_tag,
                     __gnu_pbds::tree_order_statistics_node_update>;
constexpr std::uint64_t kRankMax = ~std::uint64_t{0};
}  // namespace

struct RankAccumulator::Impl {
  OrderedMultiset tree;
  std::uint64_t next_id = 0;
};

RankAccumulator::RankAccumulator() : impl_(std::make_unique<Impl>()) {}
RankAccumulator::~RankAccumulator() = default;
RankAccumulator::RankAccumulator(RankAccumulator&&) noexcept = default;
RankAccumulator& RankAccumulator::operator=(RankAccumulator&&) noexcept = default;

void RankAccumulator::insert(double x) { impl_->tree.insert({x, impl_->next_id++}); }

std::int64_t RankAccumulator::count_greater(double x) const {
  return static_cast<std::int64_t>(impl_->tree.size()) -
         static_cast<std::int64_t>(impl_->tree.order_of_key({x, kRankMax}));
}

std::int64_t RankAccumulator::count_equal(double x) const {
  return static_cast<std::int64_t>(impl_->tree.order_of_key({x, kRankMax})) -
         static_cast<std::int64_t>(impl_->tree.order_of_key({x, 0}));
}

std::int64_t RankAccumulator::size() const {
  return static_cast<std::int64_t>(impl_->tree.size());
}

SimpleJumper::SimpleJumper(double jump_rate) : rate_(jump_rate) {
  if (!(jump_rate > 0.0) || !(jump_rate < 1.0))
    throw usage_error("jump rate must lie in (0,1)");
}

double SimpleJumper::step(double p) {
  if (!(p > 0.0) || !(p <= 1.0))
    throw numeric_error("conformal p-value outside (0,1]");
  const double total = scaled_[0] + scaled_[1] + scaled_[2];
  for (double& capital : scaled_)
    capital += rate_ * (total / 3.0 - capital);
  const double bet = p - 0.5;
  scaled_[0] *= 1.0 - bet;  // eps = -1, bets on small p
  scaled_[2] *= 1.0 + bet;  // eps = +1, bets on large p
  return value();
}

double SimpleJumper::value() const {
  return (scaled_[0] + scaled_[1] + scaled_[2]) / 3.0;
}

std::array<double, 3> SimpleJumper::capitals() const {
  return {scaled_[0] / 3.0, scaled_[1] / 3.0, scaled_[2] / 3.0};
}

ConformalJumperTester::ConformalJumperTester(double jump_rate, std::uint64_t seed)
    : jumper_(jump_rate), trajectory_(1), theta_(seed) {}

void ConformalJumperTester::observe(double x) {
  if (!std::isfinite(x)) throw numeric_error("non-finite observation");
  ranks_.insert(x);
  ++observed_;
  const double theta = theta_.uniform_open();
  const double p =
      (static_cast<double>(ranks_.count_greater(x)) +
       theta * static_cast<double>(ranks_.count_equal(x))) /
      static_cast<double>(observed_);
  last_pvalue_ = p;
  const double value = jumper_.step(p);
  trajectory_.append_absolute(observed_, std::log(value));
}

}  // namespace pairbet
