#pragma once
// Data generators and the Monte-Carlo experiment harness: seeded parallel
// replications, trajectory aggregation, slope estimation, and type-1-error
// estimation.
//
// Seed scheme (normative): replication k draws its data stream from
// substream_seed(substream_seed(master, k), 0) and its tester's auxiliary
// randomness from substream_seed(substream_seed(master, k), 1). Results are
// bit-identical for a given master seed regardless of the thread count.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pairbet/binary_pairwise.hpp"
#include "pairbet/continuous_pairwise.hpp"
#include "pairbet/core.hpp"

namespace pairbet {

struct GeneratorSpec {
  enum class Kind { bernoulli, markov, ar1 };

  Kind kind = Kind::bernoulli;
  double bern_p = 0.5;
  MarkovParams markov{};
  double markov_init_prob_one = 0.5;
  AR1Params ar1{};
  std::int64_t horizon = 0;

  bool binary() const { return kind != Kind::ar1; }
  // Exchangeable (null) generators: any Bernoulli, or AR(1) with a == 0.
  bool exchangeable() const;
  void validate() const;

  std::string name() const;
  // Grammar: bernoulli:<p> | markov:<p10>,<p11>[,<init_p1>]
  //        | ar1:<a>,<sigma2>[,stationary|standard]
  static GeneratorSpec parse(std::string_view text);
};

// Deterministic given the seed.
std::vector<double> generate(const GeneratorSpec& spec, std::uint64_t seed);

struct MethodSpec {
  enum class Kind {
    pairwise_binary,
    pairwise_continuous,
    triple_binary,
    triple_continuous,
    universal,
    conformal,
  };

  Kind kind = Kind::pairwise_binary;
  EstimatorKind estimator = EstimatorKind::smoothed;
  PairingPhase phase = PairingPhase::odd;
  double jumper_rate = 0.01;

  bool requires_binary() const;
  int stop_stride() const;
  int phase_offset() const;
  std::string name() const;
  // Grammar: pairwise-binary[:smoothed|:mle] | pairwise-continuous |
  //          triple-binary[:smoothed|:mle] | triple-continuous |
  //          universal | conformal[:<J>]
  static MethodSpec parse(std::string_view text);
};

// aux_seed feeds the method's own randomness (conformal tie-breaking);
// deterministic methods ignore it.
std::unique_ptr<Tester> make_tester(const MethodSpec& method, std::uint64_t aux_seed);

struct ExperimentConfig {
  GeneratorSpec generator{};
  MethodSpec method{};
  int replications = 10;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  int grid_points = 200;  // sampled permitted times per trajectory
  int threads = 0;        // 0 = hardware concurrency
};

struct ExperimentResult {
  std::vector<std::int64_t> times;                   // sampled permitted times
  std::vector<std::vector<double>> per_replication;  // [rep][time index]
  std::vector<double> mean_log_wealth;
  std::vector<double> sd_log_wealth;                 // sample sd (n-1)
  double slope = 0.0;           // OLS of mean log-wealth vs time, final half
  double slope_std_error = 0.0; // from the scatter of per-replication slopes
  double rejection_fraction = 0.0;
  std::vector<std::optional<std::int64_t>> stop_times;
};

// Runs independent replications (in parallel) on streams generated per the
// seed scheme above. Usage error if the method requires binary data but the
// generator is continuous.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Rejection fraction under a null generator; usage error otherwise (the
// estimate would be power, not size).
double estimate_type1(const ExperimentConfig& config);

// Ordinary least squares slope of y against t.
double ols_slope(std::span<const std::int64_t> t, std::span<const double> y);

// Evenly spaced entry positions used to thin a trajectory to at most
// grid_points samples; always keeps the final entry.
std::vector<std::size_t> sample_positions(std::size_t n_entries, int grid_points);

}  // namespace pairbet
