// Shared instances for the unit and acceptance tests.

#pragma once

#include <random>
#include <vector>

#include "aed/generators.hpp"
#include "aed/problem.hpp"
#include "aed/rng.hpp"

namespace aed::testing {

// The four-agent, two-value example: x1..x4 are agents 0..3 and the paper's
// values 1/2 are 0/1 here. Edges x1-x2, x2-x3, x2-x4, x1-x3.
inline DcopInstance figure1() {
  return DcopInstance({2, 2, 2, 2},
                      {{0, 1, CostTable::from_rows({{7, 12}, {3, 15}})},
                       {1, 2, CostTable::from_rows({{2, 7}, {11, 18}})},
                       {1, 3, CostTable::from_rows({{8, 4}, {15, 6}})},
                       {0, 2, CostTable::from_rows({{9, 13}, {12, 5}})}});
}

inline Assignment values(std::vector<Value> v) { return Assignment(std::move(v)); }

// Connected random instance with n in [lo_n, hi_n], |D| in [lo_d, hi_d], p in [lo_p, hi_p].
inline DcopInstance random_small_instance(Rng& rng, int lo_n = 5, int hi_n = 12, int lo_d = 2,
                                          int hi_d = 5, double lo_p = 0.2, double hi_p = 0.6) {
  const int n = std::uniform_int_distribution<int>(lo_n, hi_n)(rng);
  const int d = std::uniform_int_distribution<int>(lo_d, hi_d)(rng);
  const double p = std::uniform_real_distribution<double>(lo_p, hi_p)(rng);
  return gen_random_dcop(n, d, p, {1, 100}, rng);
}

inline Assignment random_assignment(const DcopInstance& instance, Rng& rng) {
  Assignment a(instance.agent_count());
  for (AgentId i = 0; i < instance.agent_count(); ++i) {
    a.bind(i, std::uniform_int_distribution<Value>(0, instance.domain_size(i) - 1)(rng));
  }
  return a;
}

}  // namespace aed::testing
