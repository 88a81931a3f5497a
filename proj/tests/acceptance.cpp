// Acceptance checks, one PASS/FAIL line per criterion.
//
//   aed_acceptance            run everything
//   aed_acceptance 1 4 7      run a subset
//
// Tolerances and workload sizes are fixed here on purpose; the exit status is
// non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aed/aed_engine.hpp"
#include "aed/baselines.hpp"
#include "aed/experiment.hpp"
#include "aed/generators.hpp"
#include "aed/pseudo_tree.hpp"
#include "aed/reproduction.hpp"
#include "aed/selection.hpp"
#include "fixtures.hpp"

using namespace aed;
namespace fs = std::filesystem;

namespace {

constexpr double kSelectionTolAlpha1 = 1e-3;
constexpr double kSelectionTolAlpha3 = 1e-4;
constexpr double kReproductionTol = 1e-3;
constexpr double kScaleTol = 1e-12;
constexpr double kAnytimeBudgetSeconds = 120.0;
constexpr int kFigure1Runs = 100;
constexpr int kFigure1Needed = 95;
constexpr double kOracleGapPercent = 5.0;
constexpr double kBenchmarkGapPercent = 5.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failures without stopping at the first one.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  int failures() const { return failures_; }
  const std::string& first() const { return first_; }

 private:
  int failures_ = 0;
  std::string first_;
};

std::string fmt(const char* pattern, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, pattern, value);
  return buffer;
}

Outcome worked_examples() {
  Checker check;
  Population pop;
  for (Cost f : {16, 30, 40}) pop.push_back({Assignment(1), f});
  const auto ranks = rank_population(pop, 5.0);
  const auto p1 = selection_probabilities(ranks, 1.0);
  const auto p3 = selection_probabilities(ranks, 3.0);
  const double want1[] = {0.676, 0.297, 0.027};
  const double want3[] = {0.92153, 0.07842, 0.00005};
  for (int k = 0; k < 3; ++k) {
    check.expect(std::abs(p1[k] - want1[k]) <= kSelectionTolAlpha1, "alpha=1 selection probability");
    check.expect(std::abs(p3[k] - want3[k]) <= kSelectionTolAlpha3, "alpha=3 selection probability");
  }

  const DcopInstance inst = testing::figure1();
  const Individual start{testing::values({0, 1, 1, 1}), 49};
  check.expect(evaluate_fitness(inst, start.assignment) == 49, "starting individual fitness 49");
  const auto dist = reproduction_distribution(inst, 2, 1, start.assignment, 1.0, 5.0);
  check.expect(std::abs(dist[0] - 0.909) <= kReproductionTol && std::abs(dist[1] - 0.091) <= kReproductionTol,
               "reproduction distribution (0.909, 0.091)");

  // Draw until the initiator takes the likely branch (x3 moves to its first value).
  Rng rng(1);
  Individual child = start;
  for (int attempt = 0; attempt < 100 && child.assignment[2] != 0; ++attempt) {
    child = reproduce_initiator(inst, 2, 1, start, 1.0, 5.0, rng);
  }
  check.expect(child.assignment[2] == 0, "initiator never moved x3");
  check.expect(child.fitness - start.fitness == -11, "delta_i = -11");
  check.expect(best_response(inst, 1, child.assignment) == 0, "partner argmin is x2's first value");
  const Individual done = reproduce_partner(inst, 1, child);
  check.expect(done.fitness - child.fitness == -16, "delta_j = -16");
  check.expect(done.fitness == 22 && evaluate_fitness(inst, done.assignment) == 22, "final fitness 22");

  std::ostringstream detail;
  detail << "alpha=1 (" << fmt("%.4f", p1[0]) << ", " << fmt("%.4f", p1[1]) << ", " << fmt("%.4f", p1[2])
         << "), alpha=3 (" << fmt("%.5f", p3[0]) << ", " << fmt("%.5f", p3[1]) << ", " << fmt("%.5f", p3[2])
         << "), P=(" << fmt("%.4f", dist[0]) << ", " << fmt("%.4f", dist[1]) << "), final fitness " << done.fitness;
  if (check.failures() > 0) detail << "; first failure: " << check.first();
  return {check.failures() == 0, detail.str()};
}

struct AnytimeStats {
  Checker anytime;
  Checker budgets;
  long long iterations = 0;
  long long agent_iterations = 0;
  double seconds = 0.0;
};

AnytimeStats& anytime_stats() {
  static AnytimeStats stats;
  static bool ran = false;
  if (ran) return stats;
  ran = true;

  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240601);
  const AedParams params;
  const int er = params.exchange_rate;
  for (int instance = 0; instance < 50; ++instance) {
    const DcopInstance inst = testing::random_small_instance(rng, 5, 12, 2, 5, 0.2, 0.6);
    const PseudoTree tree = build_bfs_pseudo_tree(inst);
    const int H = tree.height();
    for (int seed = 0; seed < 3; ++seed) {
      AedEngine engine(inst, tree, params, derive_seed(instance, seed));
      Cost previous = kInfiniteCost;
      for (int t = 1; t <= 500; ++t) {
        engine.iterate();
        ++stats.iterations;
        const Cost cost = engine.anytime_cost();
        stats.anytime.expect(cost == evaluate_fitness(inst, engine.joint_assignment()),
                             "recorded cost differs from recomputed cost");
        if (t >= 2 * H - 1) {
          stats.anytime.expect(cost <= previous, "anytime cost increased");
          previous = cost;
          const Individual& agreed = engine.agents()[0].global_best.at_or_before(t - H + 1);
          for (const AgentState& a : engine.agents()) {
            stats.anytime.expect(a.global_best.at_or_before(t - H + 1) == agreed,
                                 "agents disagree on GB^(t-H+1)");
          }
        }
        for (const AgentState& a : engine.agents()) {
          ++stats.agent_iterations;
          const int degree = inst.degree(a.id);
          const std::size_t base = static_cast<std::size_t>(degree * er);
          stats.budgets.expect(engine.message_stats().sent[a.id] <= 4 * degree, "message budget");
          stats.budgets.expect(a.peak_population <= 3 * base, "population peak budget");
          stats.budgets.expect(a.population.size() == (a.last_migration == t ? 2 * base : base),
                               "population size after reinsertion / migration");
        }
      }
    }
  }
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

Outcome anytime_property() {
  const AnytimeStats& stats = anytime_stats();
  const bool fast = stats.seconds < kAnytimeBudgetSeconds;
  std::ostringstream detail;
  detail << "150 runs x 500 iterations, " << stats.anytime.failures() << " violations, "
         << fmt("%.1f", stats.seconds) << " s (limit " << kAnytimeBudgetSeconds << " s)";
  if (stats.anytime.failures() > 0) detail << "; first: " << stats.anytime.first();
  return {stats.anytime.failures() == 0 && fast, detail.str()};
}

Outcome fitness_integrity() {
  Checker check;
  Rng rng(777);
  long long individuals = 0;
  for (int instance = 0; instance < 20; ++instance) {
    const DcopInstance inst = testing::random_small_instance(rng, 5, 12, 2, 5, 0.2, 0.6);
    const PseudoTree tree = build_bfs_pseudo_tree(inst);
    AedEngine engine(inst, tree, AedParams{}, rng());
    auto audit = [&](const char* phase) {
      for (const AgentState& a : engine.agents()) {
        for (const Individual& ind : a.population) {
          ++individuals;
          check.expect(ind.assignment.is_complete() && ind.fitness == evaluate_fitness(inst, ind.assignment),
                       phase);
        }
      }
    };
    audit("INIT population fitness");
    const Population& reference = engine.agents()[0].population;
    for (const AgentState& a : engine.agents()) {
      check.expect(a.population == reference, "INIT populations differ between agents");
    }
    for (int t = 1; t <= 200; ++t) {
      engine.iterate();
      audit("population fitness after an iteration");
    }
  }
  std::ostringstream detail;
  detail << individuals << " individuals audited over 20 instances x 200 iterations, "
         << check.failures() << " mismatches";
  if (check.failures() > 0) detail << "; first: " << check.first();
  return {check.failures() == 0, detail.str()};
}

Outcome oracle_convergence() {
  const DcopInstance fig = testing::figure1();
  const Cost optimum = brute_force_optimum(fig).cost;
  const PseudoTree tree = build_bfs_pseudo_tree(fig);
  int reached = 0;
  for (int run = 0; run < kFigure1Runs; ++run) {
    AedEngine engine(fig, tree, AedParams{}, derive_seed(4242, run));
    bool hit = engine.anytime_cost() == optimum;
    for (int t = 1; t <= 100 && !hit; ++t) {
      engine.iterate();
      hit = engine.anytime_cost() == optimum;
    }
    reached += hit;
  }

  Rng rng(8080);
  std::vector<double> gaps;
  for (int instance = 0; instance < 20; ++instance) {
    const DcopInstance inst = gen_random_dcop(8, 3, 0.4, {1, 100}, rng);
    const Cost best = brute_force_optimum(inst).cost;
    AedEngine engine(inst, build_bfs_pseudo_tree(inst), AedParams{}, rng());
    for (int t = 0; t < 500; ++t) engine.iterate();
    gaps.push_back(best == 0 ? (engine.anytime_cost() == 0 ? 0.0 : 1e9)
                             : 100.0 * static_cast<double>(engine.anytime_cost() - best) / best);
  }
  std::sort(gaps.begin(), gaps.end());
  const double median = (gaps[9] + gaps[10]) / 2.0;
  std::ostringstream detail;
  detail << "example optimum " << optimum << " reached in " << reached << "/" << kFigure1Runs
         << " runs (need " << kFigure1Needed << "); n=8 |D|=3 median gap " << fmt("%.2f", median)
         << "% (limit " << kOracleGapPercent << "%)";
  return {optimum == 19 && reached >= kFigure1Needed && median <= kOracleGapPercent, detail.str()};
}

Outcome benchmark_direction() {
  BenchmarkConfig config;
  config.family = "random-dcop";
  config.n = 70;
  config.domain_size = 10;
  config.p = 0.1;
  config.cost_range = {1, 100};
  config.instances = 10;
  config.repeats = 5;
  config.algos = {"aed", "dsa"};
  config.seed = 2021;
  config.stop = {1000, std::nullopt};
  config.dsa.activation = 0.8;
  config.output = fs::temp_directory_path() / "aed_acceptance_benchmark1";
  fs::remove_all(config.output);
  const ExperimentResult result = run_experiment(config);
  int errors = 0;
  for (const RunOutcome& run : result.runs) errors += !run.error.empty();
  if (errors > 0 || !result.summary || result.summary->algos.size() != 2) {
    return {false, std::to_string(errors) + " runs failed"};
  }
  const AlgoStats& aed = result.summary->algos[0];
  const AlgoStats& dsa = result.summary->algos[1];
  const double gap = result.summary->gaps.at(0).percent;
  std::ostringstream detail;
  detail << "mean final cost AED " << fmt("%.1f", aed.final_mean) << " vs DSA-C " << fmt("%.1f", dsa.final_mean)
         << " over " << aed.runs << " runs each, gap " << fmt("%.2f", gap) << "% (need >= "
         << kBenchmarkGapPercent << "%)";
  return {aed.algo == "aed" && aed.final_mean < dsa.final_mean && gap >= kBenchmarkGapPercent, detail.str()};
}

Outcome complexity_budgets() {
  const AnytimeStats& stats = anytime_stats();
  std::ostringstream detail;
  detail << stats.agent_iterations << " agent-iterations checked, " << stats.budgets.failures()
         << " budget violations";
  if (stats.budgets.failures() > 0) detail << "; first: " << stats.budgets.first();
  return {stats.budgets.failures() == 0, detail.str()};
}

Outcome scale_invariance() {
  Checker check;
  Rng rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    Population pop;
    const int size = 2 + static_cast<int>(rng() % 60);
    for (int k = 0; k < size; ++k) pop.push_back({Assignment(1), static_cast<Cost>(rng() % 5000)});
    for (double alpha : {1.0, 2.0, 3.0}) {
      const auto base = selection_probabilities(rank_population(pop, 5.0), alpha);
      for (double r_max : {1.0, 100.0}) {
        const auto other = selection_probabilities(rank_population(pop, r_max), alpha);
        for (std::size_t k = 0; k < base.size(); ++k) worst = std::max(worst, std::abs(base[k] - other[k]));
      }
    }
  }
  for (int trial = 0; trial < 200; ++trial) {
    const DcopInstance inst = testing::random_small_instance(rng, 3, 10, 2, 8, 0.3, 0.8);
    const Assignment a = testing::random_assignment(inst, rng);
    const AgentId i = static_cast<AgentId>(rng() % inst.agent_count());
    const AgentId j = inst.neighbors(i)[rng() % inst.neighbors(i).size()];
    for (double beta : {1.0, 5.0}) {
      const auto base = reproduction_distribution(inst, i, j, a, beta, 5.0);
      for (double o_max : {1.0, 0.001, 1000.0}) {
        const auto other = reproduction_distribution(inst, i, j, a, beta, o_max);
        for (std::size_t d = 0; d < base.size(); ++d) worst = std::max(worst, std::abs(base[d] - other[d]));
      }
    }
  }
  check.expect(worst <= kScaleTol, "probability moved under rescaling");
  return {check.failures() == 0, "largest deviation " + fmt("%.3g", worst) + " (limit 1e-12)"};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "aed_acceptance_determinism";
  fs::remove_all(root);
  int compared = 0;
  int differing = 0;
  for (const std::string family : {"random-dcop", "graph-coloring"}) {
    BenchmarkConfig config;
    config.family = family;
    config.n = 25;
    config.domain_size = family == "graph-coloring" ? 3 : 5;
    config.p = 0.2;
    config.instances = 2;
    config.repeats = 2;
    config.algos = {"aed", "dsa"};
    config.seed = 5;
    config.stop = {150, std::nullopt};
    std::vector<fs::path> dirs;
    for (const bool parallel : {false, false, true}) {
      config.parallel_agents = parallel;
      config.output = root / (family + "_" + std::to_string(dirs.size()));
      run_experiment(config);
      dirs.push_back(config.output);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      std::ifstream a(entry.path(), std::ios::binary);
      std::stringstream sa;
      sa << a.rdbuf();
      for (std::size_t k = 1; k < dirs.size(); ++k) {
        std::ifstream b(dirs[k] / entry.path().filename(), std::ios::binary);
        std::stringstream sb;
        sb << b.rdbuf();
        ++compared;
        differing += sa.str() != sb.str() || sa.str().empty();
      }
    }
  }
  std::ostringstream detail;
  detail << compared << " trace comparisons (sequential rerun and parallel agents), " << differing << " differ";
  return {compared == 32 && differing == 0, detail.str()};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "worked-example fidelity", worked_examples},
      {2, "anytime property", anytime_property},
      {3, "fitness integrity", fitness_integrity},
      {4, "oracle convergence", oracle_convergence},
      {5, "benchmark-1 direction vs DSA-C", benchmark_direction},
      {6, "complexity budgets", complexity_budgets},
      {7, "scale invariance", scale_invariance},
      {8, "determinism", determinism},
  };
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !outcome.pass;
    std::printf("%s  criterion %d  %-32s %s  [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
