#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gluedtrees {

inline constexpr const char* kArtifactVersion = "0.1.0";

// One experiment, fully determined: kind, sizes, seeds, tolerances. A copy
// travels inside every result record so any output can be regenerated.
struct ExperimentConfig {
  std::string kind;  // walk-curve | trotter-scan | spectrum | scattering |
                     // hitting | classical-traversal | lowerbound-mc | figure-data
  int n = 5;
  int n_max = -1;    // optional range end (inclusive)
  double gamma = 0.7071067811865475244;
  double epsilon = 0.5;
  std::string tau_rule = "lemma";  // lemma | theorem
  long trials = 1000;
  long budget = -1;  // <0: derived from the experiment
  std::uint64_t seed = 1;
  double tolerance = -1;  // <0: experiment default
  std::string variant;    // experiment-specific selector (e.g. trees|hypercube|game4|game5)
  std::string adversary = "all";
  std::string figure;     // transmission-curve | exit-probability-curve | quantization-lhs
  std::string out_path;   // CSV rows destination ("" = none)
  std::string record_path;  // JSON record destination ("" = none)
  int workers = 0;          // 0: GLUEDTREES_WORKERS or hardware

  std::string to_json() const;
  static ExperimentConfig from_json_text(const std::string& text);
  // config file first, then flag overrides on top
  void validate() const;
};

struct BoundCheck {
  std::string name;
  double value = 0;
  double bound = 0;
  std::string relation;  // "<", "<=", ">", ">=", "=="
  bool pass = false;
};

struct ResultRecord {
  int schema_version = 1;
  std::string artifact_version = kArtifactVersion;
  ExperimentConfig config;
  std::vector<std::string> row_header;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> summary;
  std::vector<BoundCheck> checks;
  double wall_ms = 0;  // informational; excluded from the digest

  bool all_passed() const;
  // Byte-deterministic given config and seeds; wall clock lives only in the
  // JSON record, outside the digest.
  std::string rows_csv() const;
  std::uint64_t digest() const;
  std::string to_json() const;
};

ResultRecord run_experiment(const ExperimentConfig& config);

// Plot-ready series for the figures; returns CSV text.
std::string figure_csv(const std::string& kind, int n, double gamma);

// Index-ordered parallel map: results merge by index, never by completion.
void parallel_for_indexed(long count, int workers, const std::function<void(long)>& body);

int worker_count_from_env();

}  // namespace gluedtrees
