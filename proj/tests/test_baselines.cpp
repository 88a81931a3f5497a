#include "aed/aed_engine.hpp"
#include "aed/baselines.hpp"
#include "aed/pseudo_tree.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace aed;
using aed::testing::figure1;
using aed::testing::values;

TEST_CASE("DSA step") {
  const DcopInstance inst = figure1();
  Rng rng(1);
  CHECK(dsa_step(inst, values({0, 1, 1, 1}), 1, 1.0, rng) == 0);
  // Already at its best response with no equal alternative: never moves.
  for (int k = 0; k < 100; ++k) CHECK(dsa_step(inst, values({0, 0, 1, 1}), 1, 0.8, rng) == 0);

  int moved = 0;
  for (int k = 0; k < 10000; ++k) moved += dsa_step(inst, values({0, 1, 1, 1}), 1, 0.8, rng) == 0;
  CHECK(std::abs(moved / 10000.0 - 0.8) < 0.02);

  // Lateral moves are allowed and split evenly.
  const DcopInstance flat({3, 1}, {{0, 1, CostTable::from_rows({{5}, {5}, {5}})}});
  std::vector<int> hits(3, 0);
  for (int k = 0; k < 9000; ++k) ++hits[dsa_step(flat, values({0, 0}), 0, 1.0, rng)];
  CHECK(hits[0] == 0);
  CHECK(std::abs(hits[1] - 4500) < 300);

  CHECK_THROWS_AS(dsa_step(inst, values({0, 1, kUnbound, 1}), 1, 1.0, rng), MissingBindingError);
  CHECK_THROWS_AS(DsaParams{0.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(DsaParams{1.5}.validate(), std::invalid_argument);
}

TEST_CASE("DSA engine") {
  Rng rng(17);
  const DcopInstance inst = testing::random_small_instance(rng);
  DsaEngine a(inst, {}, 5);
  DsaEngine b(inst, {}, 5, true);
  Cost best = a.anytime_cost();
  std::int64_t directed = 0;
  for (AgentId i = 0; i < inst.agent_count(); ++i) directed += inst.degree(i);
  for (int t = 0; t < 50; ++t) {
    a.iterate();
    b.iterate();
    CHECK(a.assignment() == b.assignment());
    CHECK(a.current_cost() == evaluate_fitness(inst, a.assignment()));
    CHECK(a.anytime_cost() <= best);
    CHECK(a.anytime_cost() <= a.current_cost());
    CHECK(a.messages_last_iteration() == directed);
    best = a.anytime_cost();
  }
}

TEST_CASE("exhaustive optimum") {
  const OptimumResult fig = brute_force_optimum(figure1());
  CHECK(fig.cost == 19);
  CHECK(fig.assignment == values({1, 0, 1, 1}));

  CHECK(brute_force_optimum(DcopInstance({4}, {})).cost == 0);
  const auto zero = CostTable::from_rows({{0, 0}, {0, 0}});
  const OptimumResult flat = brute_force_optimum(DcopInstance({2, 2, 2}, {{0, 1, zero}, {1, 2, zero}}));
  CHECK(flat.cost == 0);
  CHECK(flat.assignment == values({0, 0, 0}));

  CHECK_THROWS_AS(brute_force_optimum(DcopInstance(std::vector<int>(30, 2), {}), 1'000'000),
                  std::length_error);
}

TEST_CASE("the optimum bounds every anytime cost") {
  Rng rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    const DcopInstance inst = testing::random_small_instance(rng, 4, 8, 2, 3);
    const Cost optimum = brute_force_optimum(inst).cost;
    AedEngine aed(inst, build_bfs_pseudo_tree(inst), AedParams{}, rng());
    DsaEngine dsa(inst, {}, rng());
    for (int t = 0; t < 60; ++t) {
      aed.iterate();
      dsa.iterate();
      CHECK(aed.anytime_cost() >= optimum);
      CHECK(dsa.anytime_cost() >= optimum);
      for (const AgentState& a : aed.agents()) CHECK(a.population_min >= optimum);
    }
  }
}
