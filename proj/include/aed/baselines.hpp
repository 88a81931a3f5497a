// Reference points for AED: the DSA-C local search and an exhaustive oracle.

#pragma once

#include <cstdint>
#include <vector>

#include "aed/problem.hpp"
#include "aed/rng.hpp"
#include "aed/sim_net.hpp"

namespace aed {

struct DsaParams {
  double activation = 0.8;  // p in (0, 1]

  void validate() const;
};

// DSA variant C. The agent's best-response candidates are the values other
// than its current one whose local cost is minimal and not worse than the
// current cost (lateral moves included); one is picked uniformly and adopted
// with probability p. `view` must bind the agent and all of its neighbors.
Value dsa_step(const DcopInstance& instance, const Assignment& view, AgentId agent,
               double activation, Rng& rng);

// DSA on the synchronous substrate: every round each agent sends its value to
// each neighbor, then decides from what it received. anytime_cost() is the
// best joint cost seen so far, since DSA itself is not anytime.
class DsaEngine final : public SynchronousAlgorithm {
 public:
  DsaEngine(const DcopInstance& instance, DsaParams params, std::uint64_t seed,
            bool parallel = false);

  void iterate() override;
  int iteration() const override { return iteration_; }
  Cost anytime_cost() const override { return best_cost_; }
  std::int64_t messages_last_iteration() const override { return last_messages_; }

  Cost current_cost() const { return current_cost_; }
  const Assignment& assignment() const { return assignment_; }

 private:
  const DcopInstance* instance_;
  DsaParams params_;
  bool parallel_;
  MessageBus bus_;
  Assignment assignment_;
  std::vector<Rng> rngs_;
  int iteration_ = 0;
  Cost current_cost_ = 0;
  Cost best_cost_ = 0;
  std::int64_t last_messages_ = 0;
};

struct OptimumResult {
  Assignment assignment;
  Cost cost = 0;
};

inline constexpr std::uint64_t kDefaultSearchCap = 10'000'000;

// Exhaustive minimum of the total cost. Ties go to the lexicographically
// smallest value vector. Throws std::length_error when the product of domain
// sizes exceeds `cap`.
OptimumResult brute_force_optimum(const DcopInstance& instance,
                                  std::uint64_t cap = kDefaultSearchCap);

}  // namespace aed
