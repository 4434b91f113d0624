#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyinc/incidence.hpp"

namespace polyinc {

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> names = {
      "spectrum", "key-lemma", "mixing", "bounds", "counterexample", "tau-scan", "alon-boppana"};
  return names;
}

/// Field descriptor: `{"p":3,"s":1}`, "GF(3)", "GF(2^2)", or an order such as "4" or 4.
FieldPtr parse_field(const nlohmann::json& j);

struct SpaceSpec {
  nlohmann::json field;
  nlohmann::json support;

  SpacePtr resolve(const Budget& budget) const;
};

enum class OutputFormat { jsonl, csv };

OutputFormat parse_format(const std::string& name);

struct TrialCounts {
  std::uint64_t mixing = 200;
  std::uint64_t bounds = 200;
  std::uint64_t points = 100;
  std::uint64_t tau = 5;
};

struct ExperimentConfig {
  std::vector<SpaceSpec> spaces;
  std::vector<std::string> suites;
  TrialCounts trials;
  std::optional<std::uint64_t> seed;
  Budget budget;
  std::string output = "-";
  OutputFormat format = OutputFormat::jsonl;
  /// Optional CSV summary written next to a JSON-lines report.
  std::string summary;
  /// (q, m, r) instances for the counterexample suite.
  std::vector<std::array<std::uint32_t, 3>> counterexamples;
  std::vector<std::string> tau_strategies;
  /// Empty: chosen per space.
  std::vector<std::uint64_t> tau_sizes;
  unsigned workers = 0;  // 0: hardware concurrency

  /// q in {2, 3}; V_{1,2} and V_{2,1}; all suites; seed 42.
  static ExperimentConfig default_config();
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::ordered_json to_json() const;

  /// Resolves every space and checks suites and seeds; throws ConfigError.
  void validate() const;
  bool samples_randomly() const;
};

/// One emitted verdict with the grid context it came from.
struct Record {
  std::string field;
  std::string support;
  std::string suite;
  BoundVerdict verdict;

  nlohmann::ordered_json to_json() const;
};

struct RunResult {
  std::vector<Record> records;

  bool all_hold() const;
  /// 0 when every verdict holds, 2 otherwise.
  int exit_code() const { return all_hold() ? 0 : 2; }
};

using ProgressFn = std::function<void(const std::string&)>;

/// Runs the requested suites over the grid on a worker pool. Records come
/// back in grid order (spaces, then counterexample instances) regardless of
/// completion order.
RunResult run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

void write_jsonl(std::ostream& os, const std::vector<Record>& records);
/// Aggregated: one row per (field, support, suite, theorem), keeping the
/// instance with the largest lhs/rhs.
void write_csv(std::ostream& os, const std::vector<Record>& records);

/// Human-readable summary of a space: parameters, property (*), and the
/// predicted spectrum when (*) holds.
std::string describe_space(const PolySpace& space);

/// Writes the config's report to its output path ("-" is stdout).
void write_report(const ExperimentConfig& config, const RunResult& result);

}  // namespace polyinc
