#include "aed/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "aed/problem_io.hpp"
#include "aed/pseudo_tree.hpp"
#include "json.hpp"

namespace aed {
namespace {

using nlohmann::json;

constexpr std::uint64_t kInstanceStream = 0x696e7374616e6365ULL;
constexpr std::uint64_t kRunStream = 0x72756e7374726561ULL;

const std::set<std::string> kTopLevelKeys{
    "family", "n",    "domain_size", "colors", "p",      "cost_range",
    "instances", "repeats", "algo", "seed",   "stop",   "output",
    "aed",    "dsa",  "root",        "record_elapsed", "parallel_agents",
    "message_log", "instance_files"};

template <typename T>
T get(const json& object, const char* key, const std::string& where) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::vector<AlphaStep> parse_alpha_schedule(const json& value) {
  if (!value.is_array()) throw ConfigError("aed.alpha_schedule must be an array of [through, alpha]");
  std::vector<AlphaStep> steps;
  for (const json& entry : value) {
    if (!entry.is_array() || entry.size() != 2 || !entry[1].is_number()) {
      throw ConfigError("aed.alpha_schedule entries must be [through, alpha]");
    }
    AlphaStep step;
    step.alpha = entry[1].get<double>();
    if (entry[0].is_string() && entry[0].get<std::string>() == "inf") {
      step.through_iteration = std::nullopt;
    } else if (entry[0].is_number_integer()) {
      step.through_iteration = entry[0].get<int>();
    } else {
      throw ConfigError("aed.alpha_schedule threshold must be an integer or \"inf\"");
    }
    steps.push_back(step);
  }
  return steps;
}

AedParams parse_aed(const json& object) {
  if (!object.is_object()) throw ConfigError("aed must be an object");
  AedParams params;
  for (const auto& [key, value] : object.items()) {
    if (key == "in") params.initial_population = get<int>(object, "in", "aed");
    else if (key == "er") params.exchange_rate = get<int>(object, "er", "aed");
    else if (key == "r_max") params.rank_max = get<double>(object, "r_max", "aed");
    else if (key == "o_max") params.weight_max = get<double>(object, "o_max", "aed");
    else if (key == "beta") params.beta = get<double>(object, "beta", "aed");
    else if (key == "mi") params.migration_interval = get<int>(object, "mi", "aed");
    else if (key == "alpha_schedule") params.alpha_schedule = parse_alpha_schedule(value);
    else throw ConfigError("unknown key aed." + key);
  }
  return params;
}

std::string format_elapsed(double ms) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3f", ms);
  return buffer;
}

double mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

void BenchmarkConfig::validate() const {
  if (family != "random-dcop" && family != "graph-coloring") {
    throw ConfigError("family must be random-dcop or graph-coloring, got " + family);
  }
  if (instance_files.empty()) {
    if (n < 2) throw ConfigError("n must be >= 2");
    if (family == "graph-coloring" ? domain_size < 2 : domain_size < 1) {
      throw ConfigError("domain_size/colors too small");
    }
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
    if (cost_range.lo < 0 || cost_range.lo > cost_range.hi) {
      throw ConfigError("cost_range must satisfy 0 <= lo <= hi");
    }
    if (instances < 1) throw ConfigError("instances must be >= 1");
  }
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  if (algos.empty()) throw ConfigError("algo must name at least one algorithm");
  for (const std::string& algo : algos) {
    if (algo != "aed" && algo != "dsa") throw ConfigError("unknown algo " + algo);
  }
  if (!stop.max_iterations && !stop.max_time_ms) {
    throw ConfigError("stop needs max_iter or max_time_ms");
  }
  if (stop.max_iterations && *stop.max_iterations < 0) throw ConfigError("stop.max_iter < 0");
  if (stop.max_time_ms && !(*stop.max_time_ms > 0.0)) throw ConfigError("stop.max_time_ms <= 0");
  try {
    aed.validate();
    dsa.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

BenchmarkConfig config_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kTopLevelKeys.count(key)) throw ConfigError("unknown config key " + key);
  }

  BenchmarkConfig config;
  const std::string top = "config";
  if (doc.contains("family")) config.family = get<std::string>(doc, "family", top);
  if (doc.contains("n")) config.n = get<int>(doc, "n", top);
  if (doc.contains("domain_size") && doc.contains("colors")) {
    throw ConfigError("give either domain_size or colors, not both");
  }
  if (doc.contains("domain_size")) config.domain_size = get<int>(doc, "domain_size", top);
  if (doc.contains("colors")) config.domain_size = get<int>(doc, "colors", top);
  if (doc.contains("p")) config.p = get<double>(doc, "p", top);
  if (doc.contains("cost_range")) {
    auto range = get<std::vector<Cost>>(doc, "cost_range", top);
    if (range.size() != 2) throw ConfigError("cost_range must be [lo, hi]");
    config.cost_range = {range[0], range[1]};
  }
  if (doc.contains("instances")) config.instances = get<int>(doc, "instances", top);
  if (doc.contains("repeats")) config.repeats = get<int>(doc, "repeats", top);
  if (doc.contains("algo")) {
    const json& algo = doc["algo"];
    if (algo.is_string()) config.algos = {algo.get<std::string>()};
    else config.algos = get<std::vector<std::string>>(doc, "algo", top);
  }
  if (doc.contains("seed")) config.seed = get<std::uint64_t>(doc, "seed", top);
  if (doc.contains("stop")) {
    const json& stop = doc["stop"];
    if (!stop.is_object()) throw ConfigError("stop must be an object");
    config.stop = {};
    for (const auto& [key, value] : stop.items()) {
      if (key == "max_iter") config.stop.max_iterations = get<int>(stop, "max_iter", "stop");
      else if (key == "max_time_ms") config.stop.max_time_ms = get<double>(stop, "max_time_ms", "stop");
      else throw ConfigError("unknown key stop." + key);
    }
  }
  if (doc.contains("output")) config.output = get<std::string>(doc, "output", top);
  if (doc.contains("aed")) config.aed = parse_aed(doc["aed"]);
  if (doc.contains("dsa")) {
    const json& dsa = doc["dsa"];
    if (!dsa.is_object()) throw ConfigError("dsa must be an object");
    for (const auto& [key, value] : dsa.items()) {
      if (key != "p") throw ConfigError("unknown key dsa." + key);
      config.dsa.activation = get<double>(dsa, "p", "dsa");
    }
  }
  if (doc.contains("root") && !doc["root"].is_null()) config.root = get<AgentId>(doc, "root", top);
  if (doc.contains("record_elapsed")) config.record_elapsed = get<bool>(doc, "record_elapsed", top);
  if (doc.contains("parallel_agents")) {
    config.parallel_agents = get<bool>(doc, "parallel_agents", top);
  }
  if (doc.contains("message_log")) config.message_log = get<bool>(doc, "message_log", top);
  if (doc.contains("instance_files")) {
    for (const auto& file : get<std::vector<std::string>>(doc, "instance_files", top)) {
      config.instance_files.emplace_back(file);
    }
  }
  config.validate();
  return config;
}

BenchmarkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return config_from_json_text(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void apply_env_overrides(BenchmarkConfig& config) {
  const char* value = std::getenv("BENCH_SEED");
  if (value == nullptr || *value == '\0') return;
  char* end = nullptr;
  errno = 0;
  const unsigned long long seed = std::strtoull(value, &end, 10);
  if (errno != 0 || *end != '\0' || *value == '-') {
    throw ConfigError(std::string("BENCH_SEED is not an unsigned integer: ") + value);
  }
  config.seed = seed;
}

DcopInstance generate_instance(const BenchmarkConfig& config, int index) {
  Rng rng = make_rng(derive_seed(config.seed, kInstanceStream), static_cast<std::uint64_t>(index));
  if (config.family == "graph-coloring") {
    return gen_weighted_graph_coloring(config.n, config.domain_size, config.p, config.cost_range,
                                       rng);
  }
  return gen_random_dcop(config.n, config.domain_size, config.p, config.cost_range, rng);
}

std::uint64_t run_seed(std::uint64_t seed, int instance, int repeat) {
  return derive_seed(derive_seed(derive_seed(seed, kRunStream), static_cast<std::uint64_t>(instance)),
                     static_cast<std::uint64_t>(repeat));
}

std::string trace_file_name(const std::string& family, int instance, int repeat,
                            const std::string& algo) {
  return family + "_" + std::to_string(instance) + "_" + std::to_string(repeat) + "_" + algo +
         ".csv";
}

std::optional<TraceKey> parse_trace_file_name(const std::string& file_name) {
  const std::string suffix = ".csv";
  if (file_name.size() <= suffix.size() ||
      file_name.compare(file_name.size() - suffix.size(), suffix.size(), suffix) != 0) {
    return std::nullopt;
  }
  std::string stem = file_name.substr(0, file_name.size() - suffix.size());
  // The family may itself contain underscores, so peel fields off the right.
  std::vector<std::string> tail;
  for (int k = 0; k < 3; ++k) {
    const auto cut = stem.rfind('_');
    if (cut == std::string::npos) return std::nullopt;
    tail.push_back(stem.substr(cut + 1));
    stem.resize(cut);
  }
  if (stem.empty() || tail[0].empty()) return std::nullopt;
  TraceKey key;
  key.family = stem;
  key.algo = tail[0];
  try {
    std::size_t used = 0;
    key.repeat = std::stoi(tail[1], &used);
    if (used != tail[1].size()) return std::nullopt;
    key.instance = std::stoi(tail[2], &used);
    if (used != tail[2].size()) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return key;
}

void write_trace_csv(const RunTrace& trace, bool with_elapsed, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace " + path.string());
  out << "iteration,cost,elapsed_ms,messages\n";
  for (const TraceRecord& r : trace.records) {
    out << r.iteration << ',' << r.cost << ',' << (with_elapsed ? format_elapsed(r.elapsed_ms) : "")
        << ',' << r.messages << '\n';
  }
  if (!out) throw std::runtime_error("failed writing trace " + path.string());
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "iteration,cost,elapsed_ms,messages") {
    throw std::runtime_error(path.string() + ": missing trace header");
  }
  std::vector<TraceRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 4 fields");
    }
    try {
      TraceRecord r;
      r.iteration = std::stoi(fields[0]);
      r.cost = std::stoll(fields[1]);
      r.elapsed_ms = fields[2].empty() ? 0.0 : std::stod(fields[2]);
      r.messages = std::stoll(fields[3]);
      records.push_back(r);
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad number");
    }
  }
  return records;
}

Summary summarize(const std::vector<LabeledTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("summarize needs at least one trace");
  Summary summary;
  summary.family = traces.front().key.family;
  std::map<std::string, std::vector<const LabeledTrace*>> by_algo;
  for (const LabeledTrace& trace : traces) {
    if (trace.key.family != summary.family) {
      throw std::invalid_argument("cannot aggregate traces from families " + summary.family +
                                  " and " + trace.key.family);
    }
    if (trace.records.empty()) {
      throw std::invalid_argument("empty trace for " +
                                  trace_file_name(trace.key.family, trace.key.instance,
                                                  trace.key.repeat, trace.key.algo));
    }
    by_algo[trace.key.algo].push_back(&trace);
  }

  for (const auto& [algo, runs] : by_algo) {
    AlgoStats stats;
    stats.algo = algo;
    stats.runs = static_cast<int>(runs.size());
    std::vector<double> sums;
    std::vector<int> counts;
    std::vector<double> finals;
    for (const LabeledTrace* run : runs) {
      for (std::size_t t = 0; t < run->records.size(); ++t) {
        if (sums.size() <= t) {
          sums.push_back(0.0);
          counts.push_back(0);
        }
        sums[t] += static_cast<double>(run->records[t].cost);
        ++counts[t];
      }
      finals.push_back(static_cast<double>(run->records.back().cost));
    }
    for (std::size_t t = 0; t < sums.size(); ++t) stats.mean_by_iteration.push_back(sums[t] / counts[t]);
    stats.final_mean = mean(finals);
    if (finals.size() > 1) {
      double ss = 0.0;
      for (double x : finals) ss += (x - stats.final_mean) * (x - stats.final_mean);
      stats.final_stddev = std::sqrt(ss / static_cast<double>(finals.size() - 1));
    }
    summary.algos.push_back(std::move(stats));
  }

  for (std::size_t a = 0; a < summary.algos.size(); ++a) {
    for (std::size_t b = a + 1; b < summary.algos.size(); ++b) {
      const AlgoStats& base = summary.algos[a];
      const AlgoStats& other = summary.algos[b];
      const double percent = base.final_mean == 0.0
                                 ? (other.final_mean == 0.0 ? 0.0 : INFINITY)
                                 : (other.final_mean - base.final_mean) / base.final_mean * 100.0;
      summary.gaps.push_back({base.algo, other.algo, percent});
    }
  }
  return summary;
}

std::string summary_to_json_text(const Summary& summary, const std::vector<RunOutcome>& runs) {
  json doc;
  doc["family"] = summary.family;
  doc["algos"] = json::array();
  for (const AlgoStats& stats : summary.algos) {
    doc["algos"].push_back({{"algo", stats.algo},
                            {"runs", stats.runs},
                            {"final_mean", stats.final_mean},
                            {"final_stddev", stats.final_stddev},
                            {"mean_by_iteration", stats.mean_by_iteration}});
  }
  doc["gaps"] = json::array();
  for (const PairGap& gap : summary.gaps) {
    json percent = std::isfinite(gap.percent) ? json(gap.percent) : json(nullptr);
    doc["gaps"].push_back({{"base", gap.base}, {"other", gap.other}, {"percent", percent}});
  }
  if (!runs.empty()) {
    doc["runs"] = json::array();
    for (const RunOutcome& run : runs) {
      json entry{{"instance", run.instance},
                 {"repeat", run.repeat},
                 {"algo", run.algo},
                 {"trace", run.trace_file.filename().string()},
                 {"iterations", run.iterations}};
      entry["final_cost"] = run.final_cost ? json(*run.final_cost) : json(nullptr);
      entry["error"] = run.error.empty() ? json(nullptr) : json(run.error);
      doc["runs"].push_back(entry);
    }
  }
  return doc.dump(2) + "\n";
}

ExperimentResult run_experiment(const BenchmarkConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  const fs::path instance_dir = config.output / "instances";
  fs::create_directories(instance_dir);

  const int instance_count =
      config.instance_files.empty() ? config.instances : static_cast<int>(config.instance_files.size());
  ExperimentResult result;
  std::vector<LabeledTrace> traces;

  for (int i = 0; i < instance_count; ++i) {
    std::optional<DcopInstance> instance;
    std::optional<PseudoTree> tree;
    std::string setup_error;
    try {
      instance = config.instance_files.empty() ? generate_instance(config, i)
                                               : load_instance(config.instance_files[i]);
      save_instance(*instance, instance_dir / (config.family + "_" + std::to_string(i) + ".json"));
      tree = build_bfs_pseudo_tree(*instance, config.root ? RootRule::fixed(*config.root)
                                                          : RootRule::max_degree());
    } catch (const std::exception& e) {
      setup_error = e.what();
    }

    for (int r = 0; r < config.repeats; ++r) {
      for (const std::string& algo : config.algos) {
        RunOutcome outcome;
        outcome.instance = i;
        outcome.repeat = r;
        outcome.algo = algo;
        outcome.trace_file = config.output / trace_file_name(config.family, i, r, algo);
        if (!setup_error.empty()) {
          outcome.error = setup_error;
          result.runs.push_back(std::move(outcome));
          continue;
        }
        try {
          const std::uint64_t seed = run_seed(config.seed, i, r);
          std::ofstream log;
          if (config.message_log) {
            fs::path log_path = outcome.trace_file;
            log.open(log_path.replace_extension(".msglog"), std::ios::binary);
          }
          std::unique_ptr<SynchronousAlgorithm> engine;
          if (algo == "aed") {
            AedEngine::Options options;
            options.parallel = config.parallel_agents;
            options.message_log = config.message_log ? &log : nullptr;
            engine = std::make_unique<AedEngine>(*instance, *tree, config.aed, seed, options);
          } else {
            engine = std::make_unique<DsaEngine>(*instance, config.dsa, seed, config.parallel_agents);
          }
          const RunTrace trace = run_synchronous(*engine, config.stop);
          write_trace_csv(trace, config.record_elapsed, outcome.trace_file);
          outcome.final_cost = trace.records.back().cost;
          outcome.iterations = trace.iterations;
          traces.push_back({{config.family, i, r, algo}, trace.records});
        } catch (const std::exception& e) {
          outcome.error = e.what();
        }
        result.runs.push_back(std::move(outcome));
      }
    }
  }

  if (!traces.empty()) result.summary = summarize(traces);
  const fs::path summary_path = config.output / "summary.json";
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + summary_path.string());
  if (result.summary) {
    out << summary_to_json_text(*result.summary, result.runs);
  } else {
    out << summary_to_json_text(Summary{config.family, {}, {}}, result.runs);
  }
  return result;
}

}  // namespace aed
