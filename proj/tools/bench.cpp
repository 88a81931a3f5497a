// bench: generate instances, run AED / DSA batches, solve small instances
// exactly and aggregate trace files.

#include <glob.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aed/baselines.hpp"
#include "aed/experiment.hpp"
#include "aed/generators.hpp"
#include "aed/problem_io.hpp"
#include "aed/pseudo_tree.hpp"

namespace {

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t matches{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &matches);
  std::vector<std::string> paths;
  if (rc == 0) {
    for (std::size_t k = 0; k < matches.gl_pathc; ++k) paths.emplace_back(matches.gl_pathv[k]);
  }
  globfree(&matches);
  if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed for " + pattern);
  return paths;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& algos,
            const std::string& out) {
  aed::BenchmarkConfig config = aed::load_config(config_path);
  aed::apply_env_overrides(config);
  if (!algos.empty()) config.algos = algos;
  if (!out.empty()) config.output = out;
  config.validate();

  const aed::ExperimentResult result = aed::run_experiment(config);
  int failures = 0;
  for (const aed::RunOutcome& run : result.runs) {
    if (run.error.empty()) {
      std::cout << run.trace_file.string() << " final=" << *run.final_cost
                << " iterations=" << run.iterations << '\n';
    } else {
      ++failures;
      std::cerr << run.trace_file.string() << " FAILED: " << run.error << '\n';
    }
  }
  if (result.summary) {
    for (const aed::AlgoStats& stats : result.summary->algos) {
      std::printf("%-4s runs=%d mean=%.2f sd=%.2f\n", stats.algo.c_str(), stats.runs,
                  stats.final_mean, stats.final_stddev);
    }
    for (const aed::PairGap& gap : result.summary->gaps) {
      std::printf("gap %s vs %s: %.2f%%\n", gap.other.c_str(), gap.base.c_str(), gap.percent);
    }
  }
  std::cout << "summary: " << (config.output / "summary.json").string() << '\n';
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AED benchmark driver"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a benchmark configuration");
  std::string config_path;
  std::vector<std::string> run_algos;
  std::string run_out;
  run->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--algo", run_algos, "override the configured algorithms (aed, dsa)");
  run->add_option("--out", run_out, "override the output directory");

  auto* gen = app.add_subcommand("gen", "generate one instance");
  std::string family = "random-dcop";
  int n = 10;
  int domain = 3;
  double p = 0.3;
  aed::Cost lo = 1;
  aed::Cost hi = 100;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--family", family, "random-dcop or graph-coloring")
      ->check(CLI::IsMember({"random-dcop", "graph-coloring"}));
  gen->add_option("--n", n, "agents");
  gen->add_option("--domain,--colors", domain, "domain size / colors");
  gen->add_option("--p", p, "edge probability");
  gen->add_option("--lo", lo, "lowest cost");
  gen->add_option("--hi", hi, "highest cost");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output JSON file")->required();

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum of a small instance");
  std::string oracle_instance;
  std::uint64_t cap = aed::kDefaultSearchCap;
  oracle->add_option("--instance", oracle_instance)->required()->check(CLI::ExistingFile);
  oracle->add_option("--cap", cap, "maximum search-space size");

  auto* summarize = app.add_subcommand("summarize", "aggregate trace CSVs");
  std::string pattern;
  std::string summary_out;
  summarize->add_option("--glob", pattern, "trace file pattern, e.g. 'out/*.csv'")->required();
  summarize->add_option("--out", summary_out, "write JSON here instead of stdout");

  auto* tree = app.add_subcommand("tree", "print the BFS pseudo-tree of an instance");
  std::string tree_instance;
  int root = -1;
  tree->add_option("--instance", tree_instance)->required()->check(CLI::ExistingFile);
  tree->add_option("--root", root, "root agent (default: max degree)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, run_algos, run_out);

    if (*gen) {
      if (const char* env = std::getenv("BENCH_SEED"); env != nullptr && *env != '\0') {
        gen_seed = std::stoull(env);
      }
      aed::Rng rng = aed::make_rng(gen_seed, 0);
      const aed::DcopInstance instance =
          family == "graph-coloring"
              ? aed::gen_weighted_graph_coloring(n, domain, p, {lo, hi}, rng)
              : aed::gen_random_dcop(n, domain, p, {lo, hi}, rng);
      aed::save_instance(instance, gen_out);
      std::cout << gen_out << ": " << instance.agent_count() << " agents, "
                << instance.constraints().size() << " constraints\n";
      return 0;
    }

    if (*oracle) {
      const aed::DcopInstance instance = aed::load_instance(oracle_instance);
      const aed::OptimumResult best = aed::brute_force_optimum(instance, cap);
      std::cout << "cost " << best.cost << "\nassignment " << aed::to_string(best.assignment)
                << '\n';
      return 0;
    }

    if (*summarize) {
      std::vector<aed::LabeledTrace> traces;
      for (const std::string& path : expand_glob(pattern)) {
        const std::string name = std::filesystem::path(path).filename().string();
        auto key = aed::parse_trace_file_name(name);
        if (!key) {
          std::cerr << "skipping " << path << ": not a {family}_{instance}_{repeat}_{algo}.csv file\n";
          continue;
        }
        traces.push_back({*key, aed::read_trace_csv(path)});
      }
      if (traces.empty()) {
        std::cerr << "no trace files match " << pattern << '\n';
        return 1;
      }
      const std::string text = aed::summary_to_json_text(aed::summarize(traces));
      if (summary_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(summary_out, std::ios::binary);
        if (!(out << text)) throw std::runtime_error("cannot write " + summary_out);
      }
      return 0;
    }

    if (*tree) {
      const aed::DcopInstance instance = aed::load_instance(tree_instance);
      const auto rule = root >= 0 ? aed::RootRule::fixed(root) : aed::RootRule::max_degree();
      const aed::PseudoTree t = aed::build_bfs_pseudo_tree(instance, rule);
      std::cout << "height " << t.height() << '\n' << t.render();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
