// Batch experiments: configuration, trace files and aggregate statistics.
//
// Config files are JSON:
//   {"family": "random-dcop" | "graph-coloring", "n": 70, "domain_size": 10,
//    "p": 0.1, "cost_range": [1, 100], "instances": 10, "repeats": 5,
//    "algo": ["aed", "dsa"], "seed": 1, "stop": {"max_iter": 1000},
//    "output": "out", "aed": {...}, "dsa": {"p": 0.8}}
// "colors" is accepted in place of "domain_size". See README for every key.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aed/aed_engine.hpp"
#include "aed/baselines.hpp"
#include "aed/generators.hpp"
#include "aed/problem.hpp"
#include "aed/sim_net.hpp"

namespace aed {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BenchmarkConfig {
  std::string family = "random-dcop";
  int n = 10;
  int domain_size = 3;
  double p = 0.3;
  CostRange cost_range;
  int instances = 1;
  int repeats = 1;
  std::vector<std::string> algos{"aed"};
  std::uint64_t seed = 1;
  StopCondition stop{1000, std::nullopt};
  std::filesystem::path output = "bench_out";
  AedParams aed;
  DsaParams dsa;
  std::optional<AgentId> root;  // default: max-degree rule
  bool record_elapsed = false;  // wall-clock column; off keeps traces reproducible
  bool parallel_agents = false;
  bool message_log = false;
  std::vector<std::filesystem::path> instance_files;  // used instead of generating

  void validate() const;
};

BenchmarkConfig config_from_json_text(const std::string& text);
BenchmarkConfig load_config(const std::filesystem::path& path);
// Applies BENCH_SEED when it is set.
void apply_env_overrides(BenchmarkConfig& config);

DcopInstance generate_instance(const BenchmarkConfig& config, int index);
std::uint64_t run_seed(std::uint64_t seed, int instance, int repeat);

std::string trace_file_name(const std::string& family, int instance, int repeat,
                            const std::string& algo);

struct TraceKey {
  std::string family;
  int instance = 0;
  int repeat = 0;
  std::string algo;
};
std::optional<TraceKey> parse_trace_file_name(const std::string& file_name);

void write_trace_csv(const RunTrace& trace, bool with_elapsed, const std::filesystem::path& path);
std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

struct RunOutcome {
  int instance = 0;
  int repeat = 0;
  std::string algo;
  std::filesystem::path trace_file;
  std::optional<Cost> final_cost;
  int iterations = 0;
  std::string error;  // empty on success
};

struct AlgoStats {
  std::string algo;
  int runs = 0;
  std::vector<double> mean_by_iteration;  // over the runs that reached each iteration
  double final_mean = 0.0;
  double final_stddev = 0.0;  // sample standard deviation; 0 for a single run
};

struct PairGap {
  std::string base;
  std::string other;
  double percent = 0.0;  // (other - base) / base * 100 on final means
};

struct Summary {
  std::string family;
  std::vector<AlgoStats> algos;  // sorted by name
  std::vector<PairGap> gaps;
};

struct LabeledTrace {
  TraceKey key;
  std::vector<TraceRecord> records;
};

// Throws std::invalid_argument on an empty set or on traces from different
// benchmark families.
Summary summarize(const std::vector<LabeledTrace>& traces);
std::string summary_to_json_text(const Summary& summary,
                                 const std::vector<RunOutcome>& runs = {});

struct ExperimentResult {
  std::vector<RunOutcome> runs;
  std::optional<Summary> summary;
};

// Writes <output>/instances/<family>_<i>.json, one CSV per run and
// <output>/summary.json. A failing run is recorded and the batch continues.
ExperimentResult run_experiment(const BenchmarkConfig& config);

}  // namespace aed
