// Command-line front end: run exchangeability tests on delimited files, run
// simulations, evaluate growth rates, and compare methods on shared streams.
// Output is CSV (default) or JSON; the column layout and flag grammar are
// documented in docs/FORMAT.md. Numbers are serialized with 17 significant
// digits so double-precision values round-trip.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pairbet/baselines.hpp"
#include "pairbet/binary_pairwise.hpp"
#include "pairbet/continuous_pairwise.hpp"
#include "pairbet/io.hpp"
#include "pairbet/simulate.hpp"
#include "pairbet/triple_betting.hpp"

namespace {

using nlohmann::json;
using Cell = std::variant<std::int64_t, double, std::string>;

constexpr int kSchemaVersion = 1;

struct OutputTable {
  std::string command;
  std::vector<std::pair<std::string, json>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string format_cell(const Cell& cell) {
  if (std::holds_alternative<std::int64_t>(cell))
    return std::to_string(std::get<std::int64_t>(cell));
  if (std::holds_alternative<double>(cell))
    return format_double(std::get<double>(cell));
  return std::get<std::string>(cell);
}

void write_csv(std::ostream& out, const OutputTable& table) {
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "# command=" << table.command << "\n";
  for (const auto& [key, value] : table.meta) {
    out << "# " << key << "=";
    if (value.is_string())
      out << value.get<std::string>();
    else if (value.is_number_float())
      out << format_double(value.get<double>());
    else
      out << value.dump();
    out << "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_cell(row[i]);
    out << "\n";
  }
}

void write_json(std::ostream& out, const OutputTable& table) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = table.command;
  for (const auto& [key, value] : table.meta) doc[key] = value;
  doc["columns"] = table.columns;
  json rows = json::array();
  for (const auto& row : table.rows) {
    json jrow = json::array();
    for (const auto& cell : row)
      std::visit([&](const auto& v) { jrow.push_back(v); }, cell);
    rows.push_back(std::move(jrow));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";
  double alpha = 0.05;
};

void emit(const GlobalOptions& global, const OutputTable& table) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!global.out_path.empty()) {
    file.open(global.out_path);
    if (!file)
      throw pairbet::usage_error("cannot open output file '" + global.out_path + "'");
    out = &file;
  }
  if (global.format == "json")
    write_json(*out, table);
  else
    write_csv(*out, table);
}

pairbet::MethodSpec resolve_method(const std::string& method_text,
                                   const std::string& phase,
                                   std::optional<double> jumper_rate) {
  auto method = pairbet::MethodSpec::parse(method_text);
  if (jumper_rate) {
    if (method.kind != pairbet::MethodSpec::Kind::conformal)
      throw pairbet::usage_error("--jumper-rate applies to the conformal method only");
    if (!(*jumper_rate > 0.0) || !(*jumper_rate < 1.0))
      throw pairbet::usage_error("jump rate must lie in (0,1)");
    method.jumper_rate = *jumper_rate;
  }
  if (phase == "even") {
    if (method.kind != pairbet::MethodSpec::Kind::pairwise_binary &&
        method.kind != pairbet::MethodSpec::Kind::pairwise_continuous)
      throw pairbet::usage_error("--phase even applies to pairwise methods only");
    method.phase = pairbet::PairingPhase::even;
  }
  return method;
}

void append_experiment_meta(OutputTable& table, const pairbet::ExperimentConfig& config,
                            const pairbet::ExperimentResult& result) {
  table.meta.emplace_back("seed", config.seed);
  table.meta.emplace_back("generator", config.generator.name());
  table.meta.emplace_back("method", config.method.name());
  table.meta.emplace_back("steps", config.generator.horizon);
  table.meta.emplace_back("replications", config.replications);
  table.meta.emplace_back("alpha", config.alpha);
  table.meta.emplace_back("slope", result.slope);
  table.meta.emplace_back("slope_std_error", result.slope_std_error);
  table.meta.emplace_back("rejection_fraction", result.rejection_fraction);
}

int cmd_simulate(const GlobalOptions& global, const std::string& gen_text,
                 const std::string& method_text, const std::string& phase,
                 std::optional<double> jumper_rate, std::int64_t steps, int reps,
                 int grid, int threads, bool per_replication) {
  pairbet::ExperimentConfig config;
  config.generator = pairbet::GeneratorSpec::parse(gen_text);
  config.generator.horizon = steps;
  config.method = resolve_method(method_text, phase, jumper_rate);
  config.replications = reps;
  config.seed = global.seed;
  config.alpha = global.alpha;
  config.grid_points = grid;
  config.threads = threads;

  const auto result = pairbet::run_experiment(config);

  OutputTable table;
  table.command = "simulate";
  append_experiment_meta(table, config, result);
  table.columns = {"time", "mean_log_wealth", "sd_log_wealth"};
  if (per_replication)
    for (int r = 0; r < reps; ++r) table.columns.push_back("rep_" + std::to_string(r));
  for (std::size_t j = 0; j < result.times.size(); ++j) {
    std::vector<Cell> row{result.times[j], result.mean_log_wealth[j],
                          result.sd_log_wealth[j]};
    if (per_replication)
      for (const auto& rep : result.per_replication) row.emplace_back(rep[j]);
    table.rows.push_back(std::move(row));
  }
  emit(global, table);
  return 0;
}

int cmd_compare(const GlobalOptions& global, const std::string& gen_text,
                const std::string& methods_text, const std::string& phase,
                std::optional<double> jumper_rate, std::int64_t steps, int reps,
                int grid, int threads) {
  std::vector<std::string> method_names;
  {
    std::string current;
    for (char c : methods_text) {
      if (c == ',') {
        method_names.push_back(current);
        current.clear();
      } else {
        current += c;
      }
    }
    method_names.push_back(current);
  }

  // Parse (and type-check) every method before running anything: an
  // incompatible method is a usage error, never a silent skip.
  std::vector<pairbet::MethodSpec> methods;
  for (const auto& name : method_names)
    methods.push_back(resolve_method(name, phase, jumper_rate));

  pairbet::ExperimentConfig config;
  config.generator = pairbet::GeneratorSpec::parse(gen_text);
  config.generator.horizon = steps;
  config.replications = reps;
  config.seed = global.seed;
  config.alpha = global.alpha;
  config.grid_points = grid;
  config.threads = threads;
  for (const auto& method : methods) {
    if (method.requires_binary() && !config.generator.binary())
      throw pairbet::usage_error("method " + method.name() +
                                 " requires a binary stream but generator " +
                                 config.generator.name() + " is continuous");
  }

  OutputTable table;
  table.command = "compare";
  table.meta.emplace_back("seed", config.seed);
  table.meta.emplace_back("generator", config.generator.name());
  table.meta.emplace_back("steps", steps);
  table.meta.emplace_back("replications", reps);
  table.meta.emplace_back("alpha", config.alpha);
  table.columns = {"method", "time", "mean_log_wealth", "sd_log_wealth"};

  // The generator substreams depend only on (seed, replication), so every
  // method sees identical data.
  for (const auto& method : methods) {
    config.method = method;
    const auto result = pairbet::run_experiment(config);
    for (std::size_t j = 0; j < result.times.size(); ++j)
      table.rows.push_back({method.name(), result.times[j],
                            result.mean_log_wealth[j], result.sd_log_wealth[j]});
  }
  emit(global, table);
  return 0;
}

int cmd_growth_rate(const GlobalOptions& global, const std::string& method_text,
                    std::optional<double> p10, std::optional<double> p11,
                    std::optional<double> a, double sigma2, std::int64_t samples,
                    const std::vector<double>& limits_values) {
  OutputTable table;
  table.command = "growth-rate";
  table.meta.emplace_back("method", method_text);
  table.columns = {"value", "std_error", "samples"};

  const auto need_markov = [&]() -> pairbet::MarkovParams {
    if (!p10 || !p11)
      throw pairbet::usage_error("binary growth rates need --p10 and --p11");
    table.meta.emplace_back("p10", *p10);
    table.meta.emplace_back("p11", *p11);
    return {*p10, *p11};
  };
  const auto need_ar1 = [&]() -> pairbet::AR1Params {
    if (!a) throw pairbet::usage_error("continuous growth rates need --a");
    table.meta.emplace_back("a", *a);
    table.meta.emplace_back("sigma2", sigma2);
    table.meta.emplace_back("seed", global.seed);
    return {*a, sigma2, pairbet::AR1Params::Init::stationary};
  };

  if (method_text == "pairwise-binary") {
    table.rows.push_back({pairbet::markov_growth_rate(need_markov()), 0.0,
                          std::int64_t{0}});
  } else if (method_text == "triple-binary") {
    table.rows.push_back({pairbet::triple_growth_rate_markov(need_markov()), 0.0,
                          std::int64_t{0}});
  } else if (method_text == "pairwise-continuous") {
    const auto est = pairbet::ar1_growth_rate_mc(need_ar1(), samples, global.seed);
    table.rows.push_back({est.estimate, est.std_error, est.samples});
  } else if (method_text == "triple-continuous") {
    const auto est = pairbet::triple_growth_rate_ar1_mc(need_ar1(), samples, global.seed);
    table.rows.push_back({est.estimate, est.std_error, est.samples});
  } else if (method_text == "general-binary") {
    if (limits_values.size() != 7)
      throw pairbet::usage_error(
          "--limits takes 7 values: alpha,beta,gamma,p110,p010,p101,p001");
    pairbet::GeneralLimits limits;
    limits.alpha = limits_values[0];
    limits.beta = limits_values[1];
    limits.gamma = limits_values[2];
    limits.pattern[1][1] = limits_values[3];
    limits.pattern[0][1] = limits_values[4];
    limits.pattern[1][0] = limits_values[5];
    limits.pattern[0][0] = limits_values[6];
    const auto conditions = pairbet::check_positivity_conditions(limits);
    table.meta.emplace_back("first_sign_holds", conditions.first_sign_holds);
    table.meta.emplace_back("second_sign_holds", conditions.second_sign_holds);
    table.meta.emplace_back("transitions_distinct", conditions.transitions_distinct);
    table.meta.emplace_back("a", conditions.a);
    table.meta.emplace_back("b", conditions.b);
    table.rows.push_back({pairbet::general_growth_rate(limits), 0.0, std::int64_t{0}});
  } else {
    throw pairbet::usage_error(
        "growth-rate methods: pairwise-binary, triple-binary, pairwise-continuous, "
        "triple-continuous, general-binary");
  }
  emit(global, table);
  return 0;
}

int cmd_test(const GlobalOptions& global, const pairbet::InputSpec& input,
             const std::string& method_text, const std::string& phase,
             std::optional<double> jumper_rate, int grid) {
  auto method = resolve_method(method_text, phase, jumper_rate);
  if (method.requires_binary() && input.kind != pairbet::InputSpec::Kind::binary)
    throw pairbet::usage_error("method " + method.name() +
                               " requires --kind binary");

  const auto values = pairbet::read_column(input);
  auto tester =
      pairbet::make_tester(method, pairbet::rng::substream_seed(global.seed, 1));
  for (double x : values) tester->observe(x);
  tester->finish();

  const auto decision = pairbet::stop_rule(tester->trajectory(), global.alpha);
  const auto& entries = tester->trajectory().entries();

  OutputTable table;
  table.command = "test";
  table.meta.emplace_back("seed", global.seed);
  table.meta.emplace_back("input", input.path);
  table.meta.emplace_back("column", input.column);
  table.meta.emplace_back("method", method.name());
  table.meta.emplace_back("alpha", global.alpha);
  table.meta.emplace_back("n_observations", static_cast<std::int64_t>(values.size()));
  table.meta.emplace_back("threshold", decision.threshold);
  table.meta.emplace_back("rejected", decision.rejected);
  if (decision.stop_time)
    table.meta.emplace_back("stop_time", *decision.stop_time);
  table.meta.emplace_back("final_log_wealth",
                          entries.empty() ? 0.0 : entries.back().log_wealth);

  // fitted plug-in parameters, where the method has them
  if (const auto* bp = dynamic_cast<const pairbet::BinaryPairwiseTester*>(tester.get())) {
    const auto est = pairbet::TransitionEstimate::from_counts(bp->state().counts());
    table.meta.emplace_back("p10_hat", est.prob(1, 0));
    table.meta.emplace_back("p11_hat", est.prob(1, 1));
  } else if (const auto* tb = dynamic_cast<const pairbet::BinaryTripleTester*>(tester.get())) {
    const auto est = pairbet::TransitionEstimate::from_counts(tb->state().counts());
    table.meta.emplace_back("p10_hat", est.prob(1, 0));
    table.meta.emplace_back("p11_hat", est.prob(1, 1));
  } else if (const auto* cp =
                 dynamic_cast<const pairbet::ContinuousPairwiseTester*>(tester.get())) {
    table.meta.emplace_back("a_hat", cp->state().fit().a_hat());
    table.meta.emplace_back("sigma2_hat", cp->state().fit().sigma2_hat());
  } else if (const auto* ct =
                 dynamic_cast<const pairbet::ContinuousTripleTester*>(tester.get())) {
    table.meta.emplace_back("a_hat", ct->state().fit().a_hat());
    table.meta.emplace_back("sigma2_hat", ct->state().fit().sigma2_hat());
  }

  table.columns = {"time", "log_wealth"};
  for (const auto pos : pairbet::sample_positions(entries.size(), grid))
    table.rows.push_back({entries[pos].time, entries[pos].log_wealth});
  emit(global, table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential exchangeability testing by pairwise and triple betting"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "master seed echoed in all output");
  app.add_option("--out", global.out_path, "output path (default: stdout)");
  app.add_option("--format", global.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--alpha", global.alpha, "significance level in (0,1)");

  std::string gen_text, method_text, methods_text;
  std::string phase = "odd";
  std::optional<double> jumper_rate;
  std::int64_t steps = 100000;
  int reps = 10, grid = 200, threads = 0;
  bool per_replication = false;

  auto* simulate = app.add_subcommand("simulate", "run seeded replications of a method");
  simulate->add_option("--gen", gen_text, "generator spec, kind:params")->required();
  simulate->add_option("--method", method_text, "method spec")->required();
  simulate->add_option("--steps", steps, "stream length");
  simulate->add_option("--reps", reps, "number of replications");
  simulate->add_option("--grid", grid, "sampled points per trajectory");
  simulate->add_option("--threads", threads, "worker threads (0 = hardware)");
  simulate->add_option("--phase", phase, "pairing phase")
      ->check(CLI::IsMember({"odd", "even"}));
  simulate->add_option("--jumper-rate", jumper_rate, "conformal jump rate");
  simulate->add_flag("--per-replication", per_replication,
                     "emit one column per replication");

  auto* compare = app.add_subcommand("compare", "run several methods on identical streams");
  compare->add_option("--gen", gen_text, "generator spec")->required();
  compare->add_option("--methods", methods_text, "comma-separated method specs")
      ->required();
  compare->add_option("--steps", steps, "stream length");
  compare->add_option("--reps", reps, "number of replications");
  compare->add_option("--grid", grid, "sampled points per trajectory");
  compare->add_option("--threads", threads, "worker threads (0 = hardware)");
  compare->add_option("--phase", phase, "pairing phase")
      ->check(CLI::IsMember({"odd", "even"}));
  compare->add_option("--jumper-rate", jumper_rate, "conformal jump rate");

  std::optional<double> p10, p11, a_coef;
  double sigma2 = 1.0;
  std::int64_t samples = 100000;
  std::vector<double> limits_values;
  auto* growth = app.add_subcommand("growth-rate", "closed-form or Monte-Carlo growth rates");
  growth->add_option("--method", method_text, "rate to evaluate")->required();
  growth->add_option("--p10", p10, "Markov transition probability 1|0");
  growth->add_option("--p11", p11, "Markov transition probability 1|1");
  growth->add_option("--a", a_coef, "AR(1) coefficient");
  growth->add_option("--sigma2", sigma2, "AR(1) noise variance");
  growth->add_option("--samples", samples, "Monte-Carlo sample count");
  growth->add_option("--limits", limits_values,
                     "general-binary limits: alpha,beta,gamma,p110,p010,p101,p001")
      ->delimiter(',');

  pairbet::InputSpec input;
  std::string kind_text = "real";
  std::string delimiter = ",";
  auto* test = app.add_subcommand("test", "run a tester over a file column");
  test->add_option("--input", input.path, "delimited text file")->required();
  test->add_option("--column", input.column, "zero-based index or header name");
  test->add_option("--kind", kind_text, "value kind")
      ->check(CLI::IsMember({"binary", "real"}));
  test->add_option("--delimiter", delimiter, "field delimiter (one character)");
  test->add_flag("--skip-header", input.skip_header, "first row is a header");
  test->add_option("--method", method_text, "method spec")->required();
  test->add_option("--phase", phase, "pairing phase")
      ->check(CLI::IsMember({"odd", "even"}));
  test->add_option("--jumper-rate", jumper_rate, "conformal jump rate");
  test->add_option("--grid", grid, "sampled points in the report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(global, gen_text, method_text, phase, jumper_rate, steps,
                          reps, grid, threads, per_replication);
    if (compare->parsed())
      return cmd_compare(global, gen_text, methods_text, phase, jumper_rate, steps,
                         reps, grid, threads);
    if (growth->parsed())
      return cmd_growth_rate(global, method_text, p10, p11, a_coef, sigma2, samples,
                             limits_values);
    if (test->parsed()) {
      if (delimiter.size() != 1)
        throw pairbet::usage_error("--delimiter must be a single character");
      input.delimiter = delimiter[0];
      input.kind = kind_text == "binary" ? pairbet::InputSpec::Kind::binary
                                         : pairbet::InputSpec::Kind::real;
      return cmd_test(global, input, method_text, phase, jumper_rate, grid);
    }
  } catch (const pairbet::usage_error& error) {
    std::cerr << "usage error: " << error.what() << "\n";
    return 2;
  } catch (const pairbet::parse_error& error) {
    std::cerr << "parse error: " << error.what() << "\n";
    return 3;
  } catch (const pairbet::numeric_error& error) {
    std::cerr << "numeric error: " << error.what() << "\n";
    return 4;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
