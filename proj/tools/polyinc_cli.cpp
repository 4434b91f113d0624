// polyinc command-line harness.
//
//   polyinc verify   [--config FILE] [--suite NAME]... [--seed N] [--out PATH]
//                    [--format jsonl|csv] [--budget-elems N]
//   polyinc describe SUPPORT [--field F]
//   polyinc tau-scan [--field F --support S] [--strategy NAME]... [--size N]...
//   polyinc spectrum --field F --support S
//
// Exit codes: 0 every verdict holds, 2 some bound is violated, 1 bad
// configuration or exhausted budget.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polyinc/errors.hpp"
#include "polyinc/lab.hpp"

namespace {

using namespace polyinc;

struct CommonOptions {
  std::string config;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> budget_elems;
  std::string field;
  std::string support;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_suite) {
  cmd->add_option("--config", o.config, "experiment config (JSON)");
  if (with_suite) cmd->add_option("--suite", o.suites, "suite to run (repeatable)");
  cmd->add_option("--seed", o.seed, "base seed");
  cmd->add_option("--out", o.out, "report path, - for stdout");
  cmd->add_option("--format", o.format, "jsonl or csv");
  cmd->add_option("--budget-elems", o.budget_elems, "largest |V| to enumerate");
  cmd->add_option("--field", o.field, "field, e.g. GF(3) or GF(2^2)");
  cmd->add_option("--support", o.support, "support, e.g. full:1,2");
  cmd->add_option("--workers", o.workers, "worker threads (0: all cores)");
}

nlohmann::json support_arg(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("support JSON does not parse: ") + e.what());
    }
  }
  return text;
}

ExperimentConfig build_config(const CommonOptions& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig::default_config()
                                          : ExperimentConfig::load(o.config);
  if (!o.suites.empty()) cfg.suites = o.suites;
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.output = o.out;
  if (!o.format.empty()) cfg.format = parse_format(o.format);
  if (o.budget_elems) cfg.budget.max_elements = *o.budget_elems;
  if (o.workers) cfg.workers = o.workers;
  if (!o.field.empty() || !o.support.empty()) {
    if (o.field.empty() || o.support.empty()) {
      throw ConfigError("--field and --support must be given together");
    }
    cfg.spaces = {SpaceSpec{o.field, support_arg(o.support)}};
  }
  return cfg;
}

int run_and_report(const ExperimentConfig& cfg) {
  const auto result = run_experiment(cfg, [](const std::string& line) {
    std::cerr << line << '\n';
  });
  write_report(cfg, result);
  std::size_t failed = 0;
  for (const auto& r : result.records) failed += !r.verdict.holds;
  std::cerr << result.records.size() << " verdicts, " << failed << " violated\n";
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial incidence graph verifier"};
  app.require_subcommand(1);

  CommonOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "run suites over a grid and emit verdicts");
  add_common(verify, verify_opts, true);

  std::string describe_support, describe_field = "GF(3)";
  auto* describe = app.add_subcommand("describe", "summarize a polynomial space");
  describe->add_option("support", describe_support, "support descriptor")->required();
  describe->add_option("--field", describe_field, "field, e.g. GF(3)");

  CommonOptions tau_opts;
  std::vector<std::string> strategies;
  std::vector<std::uint64_t> sizes;
  std::uint64_t tau_trials = 0;
  auto* tau = app.add_subcommand("tau-scan", "concentration ratio over sampled families");
  add_common(tau, tau_opts, false);
  tau->add_option("--strategy", strategies, "uniform, linear-subspace, coset, x1-shifted");
  tau->add_option("--size", sizes, "family size (repeatable)");
  tau->add_option("--trials", tau_trials, "trials per size");

  std::string spec_field = "GF(3)", spec_support = "full:1,2";
  std::uint64_t spec_budget = 0;
  bool spec_entries = false;
  auto* spec = app.add_subcommand("spectrum", "print the exact spectrum of Cay(V, N_q)");
  spec->add_option("--field", spec_field, "field");
  spec->add_option("--support", spec_support, "support");
  spec->add_option("--budget-elems", spec_budget, "largest |V| to enumerate");
  spec->add_flag("--entries", spec_entries, "include every character's eigenvalue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return run_and_report(build_config(verify_opts));

    if (tau->parsed()) {
      auto cfg = build_config(tau_opts);
      cfg.suites = {"tau-scan"};
      if (!strategies.empty()) cfg.tau_strategies = strategies;
      if (!sizes.empty()) cfg.tau_sizes = sizes;
      if (tau_trials) cfg.trials.tau = tau_trials;
      return run_and_report(cfg);
    }

    if (describe->parsed()) {
      const SpaceSpec s{describe_field, support_arg(describe_support)};
      std::cout << describe_space(*s.resolve(Budget{}));
      return 0;
    }

    if (spec->parsed()) {
      Budget budget;
      if (spec_budget) budget.max_elements = spec_budget;
      const SpaceSpec s{spec_field, support_arg(spec_support)};
      const IncidenceGraph graph(s.resolve(budget));
      nlohmann::ordered_json j;
      j["space"] = graph.space().describe_name();
      j["property_star"] = graph.space().property_star().holds;
      j["spectrum"] = graph.spectrum().to_json(spec_entries);
      std::cout << j.dump() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
