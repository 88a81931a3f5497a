// Anytime Evolutionary DCOP: population initialization over the pseudo-tree,
// then iterated selection, pairwise reproduction, anytime best tracking,
// reinsertion and periodic migration.
//
// Every agent owns an AgentState; agents interact only through a MessageBus.
// One optimization iteration is five barrier-separated send-slots:
//
//   1. reproduction-request   initiator resamples x_i, ships ER individuals
//                             to each neighbor
//   2. reproduction-reply     partner applies its best response, ships back
//   3. found + update         LB/GB bookkeeping; Found goes to the parent,
//                             Update to the children
//   4. migration              Found/Update messages are absorbed, x_i is
//                             reassigned from GB^(Itr-H+1), the population is
//                             trimmed to |N_i|*ER; every MI iterations ER
//                             migrants go to each neighbor
//   5. (receive only)         migrants join the population
//
// A Found or Update posted in iteration t is consumed by its recipient in the
// same iteration t; a relayed Update leaves again at iteration t + 1.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "aed/gb_store.hpp"
#include "aed/problem.hpp"
#include "aed/pseudo_tree.hpp"
#include "aed/rng.hpp"
#include "aed/sim_net.hpp"

namespace aed {

class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// alpha applies to iterations up to and including `through_iteration`;
// nullopt means "every later iteration".
struct AlphaStep {
  std::optional<int> through_iteration;
  double alpha = 1.0;

  friend bool operator==(const AlphaStep&, const AlphaStep&) = default;
};

std::vector<AlphaStep> default_alpha_schedule();

struct AedParams {
  int initial_population = 50;  // IN
  int exchange_rate = 40;       // ER
  double rank_max = 5.0;        // R_max
  double weight_max = 5.0;      // O_max; cancels in the reproduction distribution
  std::vector<AlphaStep> alpha_schedule = default_alpha_schedule();
  double beta = 5.0;
  int migration_interval = 5;   // MI

  // Throws std::invalid_argument on the first violated constraint.
  void validate() const;
  double alpha_at(int iteration) const;

  friend bool operator==(const AedParams&, const AedParams&) = default;
};

struct AgentState {
  AgentId id = 0;
  Value value = 0;
  Population population;
  Individual local_best;                      // LB
  GbStore global_best;                        // GB versions
  std::optional<Individual> found_message;    // FM
  std::optional<UpdateMessage> update_message;  // UM
  int iteration = 0;
  int last_migration = 0;
  Rng rng;

  // Instrumentation, refreshed every iteration.
  std::size_t peak_population = 0;
  Cost population_min = kInfiniteCost;  // best fitness after P_new joined

  AgentState(AgentId agent, int agent_count)
      : id(agent),
        local_best(Individual::sentinel(agent_count)),
        global_best(agent_count) {}
};

// Overrides INIT's random draws: values[i] is x_i and individuals[i][k] is the
// value agent i binds in the k-th initial individual.
struct InitialDraws {
  std::vector<Value> values;
  std::vector<std::vector<Value>> individuals;
};

struct InitReport {
  std::vector<Cost> root_fitness_before_halving;
  int up_tree_rounds = 0;
  int down_tree_rounds = 0;
};

// Population construction over the bus. On return every agent holds the same
// IN complete individuals with exact fitness.
std::vector<AgentState> init_phase(const DcopInstance& instance, const PseudoTree& tree,
                                   const AedParams& params, std::uint64_t seed, MessageBus& bus,
                                   const InitialDraws* forced = nullptr,
                                   InitReport* report = nullptr);

// Procedure ANYTIME-UPDATE, first half: fold `best` into LB, build FM / UM,
// post them (slots kFound / kUpdate must be open) and clear both.
void anytime_update_send(AgentState& agent, const Individual& best, const PseudoTree& tree,
                         int iteration, MessageBus& bus);

// Second half, after the barrier: absorb Update and Found messages, then
// reassign x_i from GB^(Itr-H+1) once Itr >= H and a real version exists.
void anytime_update_receive(AgentState& agent, MessageBus& bus, const PseudoTree& tree,
                            int iteration);

class AedEngine final : public SynchronousAlgorithm {
 public:
  struct Options {
    bool parallel = false;
    std::ostream* message_log = nullptr;
    const InitialDraws* forced_draws = nullptr;
  };

  // `instance` must outlive the engine.
  AedEngine(const DcopInstance& instance, PseudoTree tree, AedParams params, std::uint64_t seed,
            Options options);
  AedEngine(const DcopInstance& instance, PseudoTree tree, AedParams params, std::uint64_t seed)
      : AedEngine(instance, std::move(tree), std::move(params), seed, Options{}) {}

  void iterate() override;
  int iteration() const override { return iteration_; }
  Cost anytime_cost() const override;
  std::int64_t messages_last_iteration() const override { return last_messages_; }

  std::span<const AgentState> agents() const { return agents_; }
  Assignment joint_assignment() const;
  const PseudoTree& tree() const { return tree_; }
  const AedParams& params() const { return params_; }
  const MessageStats& message_stats() const { return bus_.stats(); }
  const DcopInstance& instance() const { return *instance_; }

 private:
  void send_reproduction_requests(AgentState& agent, double alpha);
  void answer_reproduction_requests(AgentState& agent);
  void collect_offspring(AgentState& agent);
  void reinsert_and_migrate(AgentState& agent, double alpha);
  void absorb_migrants(AgentState& agent);

  const DcopInstance* instance_;
  PseudoTree tree_;
  AedParams params_;
  Options options_;
  MessageBus bus_;
  std::vector<AgentState> agents_;
  int iteration_ = 0;
  std::int64_t last_messages_ = 0;
};

}  // namespace aed
