#include "pairbet/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <thread>

#include "pairbet/baselines.hpp"
#include "pairbet/rng.hpp"
#include "pairbet/triple_betting.hpp"

namespace pairbet {

namespace {

double parse_number(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw usage_error("cannot parse " + what + " from '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(sep);
    if (pos == std::string_view::npos) {
      parts.push_back(text);
      return parts;
    }
    parts.push_back(text.substr(0, pos));
    text.remove_prefix(pos + 1);
  }
}

// Shortest representation that parses back to the same double; used in
// method and generator names.
std::string format_number(double v) {
  char buffer[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, v);
    if (std::strtod(buffer, nullptr) == v) break;
  }
  return buffer;
}

}  // namespace

bool GeneratorSpec::exchangeable() const {
  switch (kind) {
    case Kind::bernoulli: return true;
    case Kind::ar1: return ar1.a == 0.0;
    case Kind::markov: return false;
  }
  return false;
}

void GeneratorSpec::validate() const {
  if (horizon < 1) throw usage_error("horizon must be positive");
  switch (kind) {
    case Kind::bernoulli:
      if (!(bern_p >= 0.0) || !(bern_p <= 1.0))
        throw usage_error("bernoulli probability must lie in [0,1]");
      break;
    case Kind::markov:
      for (double p : {markov.p10, markov.p11, markov_init_prob_one})
        if (!(p >= 0.0) || !(p <= 1.0))
          throw usage_error("markov probabilities must lie in [0,1]");
      break;
    case Kind::ar1:
      if (!(ar1.sigma2 > 0.0)) throw usage_error("ar1 noise variance must be positive");
      if (ar1.init == AR1Params::Init::stationary && !(std::abs(ar1.a) < 1.0))
        throw usage_error("stationary ar1 initialization requires |a| < 1");
      if (!std::isfinite(ar1.a)) throw usage_error("ar1 coefficient must be finite");
      break;
  }
}

std::string GeneratorSpec::name() const {
  switch (kind) {
    case Kind::bernoulli:
      return "bernoulli:" + format_number(bern_p);
    case Kind::markov: {
      std::string out = "markov:" + format_number(markov.p10) + "," +
                        format_number(markov.p11);
      if (markov_init_prob_one != 0.5)
        out += "," + format_number(markov_init_prob_one);
      return out;
    }
    case Kind::ar1: {
      std::string out = "ar1:" + format_number(ar1.a) + "," + format_number(ar1.sigma2);
      if (ar1.init == AR1Params::Init::standard) out += ",standard";
      return out;
    }
  }
  return {};
}

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  GeneratorSpec spec;
  if (head == "bernoulli") {
    spec.kind = Kind::bernoulli;
    spec.bern_p = parse_number(args, "bernoulli probability");
  } else if (head == "markov") {
    spec.kind = Kind::markov;
    const auto parts = split(args, ',');
    if (parts.size() < 2 || parts.size() > 3)
      throw usage_error("markov generator takes p10,p11[,init_p1]");
    spec.markov.p10 = parse_number(parts[0], "p10");
    spec.markov.p11 = parse_number(parts[1], "p11");
    if (parts.size() == 3)
      spec.markov_init_prob_one = parse_number(parts[2], "init_p1");
  } else if (head == "ar1") {
    spec.kind = Kind::ar1;
    const auto parts = split(args, ',');
    if (parts.size() < 2 || parts.size() > 3)
      throw usage_error("ar1 generator takes a,sigma2[,stationary|standard]");
    spec.ar1.a = parse_number(parts[0], "a");
    spec.ar1.sigma2 = parse_number(parts[1], "sigma2");
    if (parts.size() == 3) {
      if (parts[2] == "stationary")
        spec.ar1.init = AR1Params::Init::stationary;
      else if (parts[2] == "standard")
        spec.ar1.init = AR1Params::Init::standard;
      else
        throw usage_error("ar1 initialization must be 'stationary' or 'standard'");
    }
  } else {
    throw usage_error("unknown generator '" + std::string(head) +
                      "' (expected bernoulli, markov, or ar1)");
  }
  return spec;
}

std::vector<double> generate(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::vector<double> stream;
  stream.reserve(static_cast<std::size_t>(spec.horizon));
  switch (spec.kind) {
    case GeneratorSpec::Kind::bernoulli: {
      rng::Xoshiro256pp gen(seed);
      for (std::int64_t i = 0; i < spec.horizon; ++i)
        stream.push_back(gen.uniform01() < spec.bern_p ? 1.0 : 0.0);
      break;
    }
    case GeneratorSpec::Kind::markov: {
      rng::Xoshiro256pp gen(seed);
      int state = gen.uniform01() < spec.markov_init_prob_one ? 1 : 0;
      stream.push_back(state);
      for (std::int64_t i = 1; i < spec.horizon; ++i) {
        const double p_one = state == 1 ? spec.markov.p11 : spec.markov.p10;
        state = gen.uniform01() < p_one ? 1 : 0;
        stream.push_back(state);
      }
      break;
    }
    case GeneratorSpec::Kind::ar1: {
      rng::NormalSampler normal(seed);
      const double sd = std::sqrt(spec.ar1.sigma2);
      const double sd0 = spec.ar1.init == AR1Params::Init::stationary
                             ? std::sqrt(spec.ar1.sigma2 /
                                         (1.0 - spec.ar1.a * spec.ar1.a))
                             : 1.0;
      double x = sd0 * normal.next();
      stream.push_back(x);
      for (std::int64_t i = 1; i < spec.horizon; ++i) {
        x = spec.ar1.a * x + sd * normal.next();
        stream.push_back(x);
      }
      break;
    }
  }
  return stream;
}

bool MethodSpec::requires_binary() const {
  return kind == Kind::pairwise_binary || kind == Kind::triple_binary ||
         kind == Kind::universal;
}

int MethodSpec::stop_stride() const {
  switch (kind) {
    case Kind::pairwise_binary:
    case Kind::pairwise_continuous: return 2;
    case Kind::triple_binary:
    case Kind::triple_continuous: return 3;
    case Kind::universal:
    case Kind::conformal: return 1;
  }
  return 1;
}

int MethodSpec::phase_offset() const {
  const bool pairwise = kind == Kind::pairwise_binary || kind == Kind::pairwise_continuous;
  return pairwise && phase == PairingPhase::even ? 1 : 0;
}

std::string MethodSpec::name() const {
  switch (kind) {
    case Kind::pairwise_binary:
      return estimator == EstimatorKind::mle ? "pairwise-binary:mle"
                                             : "pairwise-binary";
    case Kind::pairwise_continuous: return "pairwise-continuous";
    case Kind::triple_binary:
      return estimator == EstimatorKind::mle ? "triple-binary:mle" : "triple-binary";
    case Kind::triple_continuous: return "triple-continuous";
    case Kind::universal: return "universal";
    case Kind::conformal: return "conformal:" + format_number(jumper_rate);
  }
  return {};
}

MethodSpec MethodSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view option =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  MethodSpec method;
  const auto parse_estimator = [&](std::string_view opt) {
    if (opt.empty() || opt == "smoothed")
      method.estimator = EstimatorKind::smoothed;
    else if (opt == "mle")
      method.estimator = EstimatorKind::mle;
    else
      throw usage_error("estimator option must be 'smoothed' or 'mle'");
  };
  if (head == "pairwise-binary") {
    method.kind = Kind::pairwise_binary;
    parse_estimator(option);
  } else if (head == "pairwise-continuous") {
    method.kind = Kind::pairwise_continuous;
    if (!option.empty()) throw usage_error("pairwise-continuous takes no option");
  } else if (head == "triple-binary") {
    method.kind = Kind::triple_binary;
    parse_estimator(option);
  } else if (head == "triple-continuous") {
    method.kind = Kind::triple_continuous;
    if (!option.empty()) throw usage_error("triple-continuous takes no option");
  } else if (head == "universal") {
    method.kind = Kind::universal;
    if (!option.empty()) throw usage_error("universal takes no option");
  } else if (head == "conformal") {
    method.kind = Kind::conformal;
    if (!option.empty()) {
      method.jumper_rate = parse_number(option, "jump rate");
      if (!(method.jumper_rate > 0.0) || !(method.jumper_rate < 1.0))
        throw usage_error("jump rate must lie in (0,1)");
    }
  } else {
    throw usage_error("unknown method '" + std::string(head) + "'");
  }
  return method;
}

std::unique_ptr<Tester> make_tester(const MethodSpec& method, std::uint64_t aux_seed) {
  switch (method.kind) {
    case MethodSpec::Kind::pairwise_binary:
      return std::make_unique<BinaryPairwiseTester>(method.estimator, method.phase);
    case MethodSpec::Kind::pairwise_continuous:
      return std::make_unique<ContinuousPairwiseTester>(method.phase);
    case MethodSpec::Kind::triple_binary:
      return std::make_unique<BinaryTripleTester>(method.estimator);
    case MethodSpec::Kind::triple_continuous:
      return std::make_unique<ContinuousTripleTester>();
    case MethodSpec::Kind::universal:
      return std::make_unique<UniversalTester>();
    case MethodSpec::Kind::conformal:
      return std::make_unique<ConformalJumperTester>(method.jumper_rate, aux_seed);
  }
  throw usage_error("unknown method kind");
}

double ols_slope(std::span<const std::int64_t> t, std::span<const double> y) {
  if (t.size() != y.size() || t.size() < 2)
    throw usage_error("slope fit needs at least two matched points");
  const double n = static_cast<double>(t.size());
  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    t_mean += static_cast<double>(t[i]);
    y_mean += y[i];
  }
  t_mean /= n;
  y_mean /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dt = static_cast<double>(t[i]) - t_mean;
    cov += dt * (y[i] - y_mean);
    var += dt * dt;
  }
  if (var == 0.0) throw usage_error("slope fit needs distinct time points");
  return cov / var;
}

namespace {

struct ReplicationOutput {
  std::vector<double> sampled;
  std::optional<std::int64_t> stop_time;
  double final_half_slope = 0.0;
};

void validate_config(const ExperimentConfig& config) {
  config.generator.validate();
  if (config.replications < 1) throw usage_error("at least one replication required");
  if (!(config.alpha > 0.0) || !(config.alpha < 1.0))
    throw usage_error("alpha must lie in (0,1)");
  if (config.grid_points < 2) throw usage_error("grid needs at least two points");
  if (config.method.requires_binary() && !config.generator.binary())
    throw usage_error("method " + config.method.name() +
                      " requires a binary stream but generator " +
                      config.generator.name() + " is continuous");
}

}  // namespace

std::vector<std::size_t> sample_positions(std::size_t n_entries, int grid_points) {
  std::vector<std::size_t> positions;
  if (n_entries == 0) return positions;
  const std::size_t g = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(grid_points, 1)), n_entries);
  positions.reserve(g);
  for (std::size_t j = 0; j < g; ++j) {
    const std::size_t pos = g == 1 ? n_entries - 1
                                   : (j * (n_entries - 1)) / (g - 1);
    if (positions.empty() || pos != positions.back()) positions.push_back(pos);
  }
  return positions;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  const int stride = config.method.stop_stride();
  const int offset = config.method.phase_offset();
  const std::int64_t n_entries_i64 = (config.generator.horizon - offset) / stride;
  if (n_entries_i64 < 2)
    throw usage_error("horizon too short: fewer than two permitted stopping times");
  const auto n_entries = static_cast<std::size_t>(n_entries_i64);
  const auto positions = sample_positions(n_entries, config.grid_points);

  ExperimentResult result;
  result.times.reserve(positions.size());
  for (const auto pos : positions)
    result.times.push_back(offset + stride * static_cast<std::int64_t>(pos + 1));

  const std::size_t half_start = positions.size() / 2;
  const std::span<const std::int64_t> half_times{result.times.data() + half_start,
                                                 result.times.size() - half_start};

  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<ReplicationOutput> outputs(reps);
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  const auto worker = [&]() {
    while (true) {
      const std::size_t rep = next.fetch_add(1);
      if (rep >= reps || failed.load()) return;
      try {
        const std::uint64_t rep_seed = rng::substream_seed(config.seed, rep);
        const auto stream =
            generate(config.generator, rng::substream_seed(rep_seed, 0));
        auto tester = make_tester(config.method, rng::substream_seed(rep_seed, 1));
        for (const double x : stream) tester->observe(x);

        const auto& entries = tester->trajectory().entries();
        ReplicationOutput out;
        out.sampled.reserve(positions.size());
        for (const auto pos : positions) out.sampled.push_back(entries[pos].log_wealth);
        const auto decision = stop_rule(tester->trajectory(), config.alpha);
        out.stop_time = decision.stop_time;
        out.final_half_slope = ols_slope(
            half_times, std::span<const double>{out.sampled.data() + half_start,
                                                out.sampled.size() - half_start});
        outputs[rep] = std::move(out);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, reps);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Aggregation runs in replication order so results do not depend on the
  // thread count.
  result.per_replication.reserve(reps);
  for (auto& out : outputs) result.per_replication.push_back(std::move(out.sampled));

  const auto n_times = positions.size();
  result.mean_log_wealth.assign(n_times, 0.0);
  result.sd_log_wealth.assign(n_times, 0.0);
  for (std::size_t j = 0; j < n_times; ++j) {
    double sum = 0.0;
    for (const auto& row : result.per_replication) sum += row[j];
    const double mean = sum / static_cast<double>(reps);
    result.mean_log_wealth[j] = mean;
    if (reps > 1) {
      double ss = 0.0;
      for (const auto& row : result.per_replication) {
        const double d = row[j] - mean;
        ss += d * d;
      }
      result.sd_log_wealth[j] = std::sqrt(ss / static_cast<double>(reps - 1));
    }
  }

  result.slope = ols_slope(
      half_times, std::span<const double>{result.mean_log_wealth.data() + half_start,
                                          result.mean_log_wealth.size() - half_start});
  if (reps > 1) {
    double mean_slope = 0.0;
    for (const auto& out : outputs) mean_slope += out.final_half_slope;
    mean_slope /= static_cast<double>(reps);
    double ss = 0.0;
    for (const auto& out : outputs) {
      const double d = out.final_half_slope - mean_slope;
      ss += d * d;
    }
    result.slope_std_error =
        std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }

  std::size_t rejected = 0;
  result.stop_times.reserve(reps);
  for (const auto& out : outputs) {
    result.stop_times.push_back(out.stop_time);
    if (out.stop_time) ++rejected;
  }
  result.rejection_fraction = static_cast<double>(rejected) / static_cast<double>(reps);
  return result;
}

double estimate_type1(const ExperimentConfig& config) {
  if (!config.generator.exchangeable())
    throw usage_error("type-1 estimation requires an exchangeable generator "
                      "(bernoulli, or ar1 with a = 0); with " +
                      config.generator.name() + " the estimate would be power, "
                      "not size");
  return run_experiment(config).rejection_fraction;
}

}  // namespace pairbet
