#include "aed/aed_engine.hpp"

#include <algorithm>
#include <string>

#include "aed/reproduction.hpp"
#include "aed/selection.hpp"

namespace aed {

std::vector<AlphaStep> default_alpha_schedule() {
  return {{150, 3.0}, {300, 2.0}, {std::nullopt, 1.0}};
}

void AedParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("AED parameter " + what); };
  if (initial_population < 1) fail("IN must be >= 1");
  if (exchange_rate < 1) fail("ER must be >= 1");
  if (migration_interval < 1) fail("MI must be >= 1");
  if (!(rank_max > 0.0)) fail("R_max must be positive");
  if (!(weight_max > 0.0)) fail("O_max must be positive");
  if (!(beta > 0.0)) fail("beta must be positive");
  if (alpha_schedule.empty()) fail("alpha schedule must not be empty");
  std::optional<int> previous;
  for (std::size_t k = 0; k < alpha_schedule.size(); ++k) {
    const AlphaStep& step = alpha_schedule[k];
    if (!(step.alpha > 0.0)) fail("alpha values must be positive");
    if (!step.through_iteration) {
      if (k + 1 != alpha_schedule.size()) fail("only the last alpha step may be open-ended");
      continue;
    }
    if (previous && *step.through_iteration <= *previous) {
      fail("alpha schedule thresholds must be strictly increasing");
    }
    previous = step.through_iteration;
  }
}

double AedParams::alpha_at(int iteration) const {
  for (const AlphaStep& step : alpha_schedule) {
    if (!step.through_iteration || iteration <= *step.through_iteration) return step.alpha;
  }
  return alpha_schedule.back().alpha;
}

namespace {

Value uniform_value(Rng& rng, int domain_size) {
  return std::uniform_int_distribution<Value>(0, domain_size - 1)(rng);
}

void check_forced_draws(const DcopInstance& instance, const AedParams& params,
                        const InitialDraws& draws) {
  const int n = instance.agent_count();
  if (static_cast<int>(draws.values.size()) != n ||
      static_cast<int>(draws.individuals.size()) != n) {
    throw std::invalid_argument("forced INIT draws must cover every agent");
  }
  for (AgentId i = 0; i < n; ++i) {
    if (!instance.in_domain(i, draws.values[i])) {
      throw std::invalid_argument("forced value outside the domain of agent " + std::to_string(i));
    }
    if (static_cast<int>(draws.individuals[i].size()) != params.initial_population) {
      throw std::invalid_argument("forced INIT draws must hold IN values per agent");
    }
    for (Value v : draws.individuals[i]) {
      if (!instance.in_domain(i, v)) {
        throw std::invalid_argument("forced individual value outside the domain of agent " +
                                    std::to_string(i));
      }
    }
  }
}

Population& population_payload(Envelope& envelope) {
  auto* population = std::get_if<Population>(&envelope.payload);
  if (population == nullptr) {
    throw ProtocolError("agent " + std::to_string(envelope.src) + " sent a non-population " +
                        std::string(slot_name(envelope.slot)) + " message");
  }
  return *population;
}

}  // namespace

std::vector<AgentState> init_phase(const DcopInstance& instance, const PseudoTree& tree,
                                   const AedParams& params, std::uint64_t seed, MessageBus& bus,
                                   const InitialDraws* forced, InitReport* report) {
  params.validate();
  const int n = instance.agent_count();
  if (tree.size() != n) throw std::invalid_argument("pseudo-tree does not match the instance");
  if (forced != nullptr) check_forced_draws(instance, params, *forced);

  std::vector<AgentState> agents;
  agents.reserve(n);
  for (AgentId i = 0; i < n; ++i) {
    AgentState& agent = agents.emplace_back(i, n);
    agent.rng = make_rng(seed, static_cast<std::uint64_t>(i));
    const int domain = instance.domain_size(i);
    agent.value = forced ? forced->values[i] : uniform_value(agent.rng, domain);
    agent.population.assign(params.initial_population, Individual::empty(n));
    for (int k = 0; k < params.initial_population; ++k) {
      agent.population[k].assignment.bind(
          i, forced ? forced->individuals[i][k] : uniform_value(agent.rng, domain));
    }
  }

  bus.begin_iteration(0);

  // Neighbor exchange, then local costs.
  bus.open(Slot::kInitNeighborExchange);
  for (const AgentState& agent : agents) {
    for (AgentId neighbor : instance.neighbors(agent.id)) {
      bus.post({agent.id, neighbor, 0, Slot::kInitNeighborExchange, 0, agent.population});
    }
  }
  bus.deliver();
  for (AgentState& agent : agents) {
    for (Envelope& envelope : bus.take(agent.id, Slot::kInitNeighborExchange)) {
      agent.population = merge_populations(agent.population, population_payload(envelope));
    }
    for (Individual& individual : agent.population) {
      individual.fitness = local_cost(instance, agent.id, individual.assignment);
    }
  }

  // Leaf-to-root waves: an agent reports once every child has reported.
  std::vector<int> waiting(n);
  std::vector<bool> reported(n, false);
  for (AgentId i = 0; i < n; ++i) waiting[i] = static_cast<int>(tree.children(i).size());
  const AgentId root = tree.root();
  while (waiting[root] > 0) {
    if (report != nullptr) ++report->up_tree_rounds;
    bus.open(Slot::kInitUpTree);
    bool progress = false;
    for (AgentState& agent : agents) {
      if (agent.id == root || reported[agent.id] || waiting[agent.id] > 0) continue;
      bus.post({agent.id, *tree.parent(agent.id), 0, Slot::kInitUpTree, 0,
                std::move(agent.population)});
      agent.population.clear();
      reported[agent.id] = true;
      progress = true;
    }
    bus.deliver();
    if (!progress) {
      for (AgentId i = 0; i < n; ++i) {
        if (i != root && !reported[i]) {
          throw ProtocolError("INIT stalled: agent " + std::to_string(i) +
                              " never reported to its parent");
        }
      }
    }
    for (AgentState& agent : agents) {
      for (Envelope& envelope : bus.take(agent.id, Slot::kInitUpTree)) {
        const auto children = tree.children(agent.id);
        if (std::find(children.begin(), children.end(), envelope.src) == children.end()) {
          throw ProtocolError("INIT: agent " + std::to_string(agent.id) +
                              " got a subtree report from non-child " +
                              std::to_string(envelope.src));
        }
        agent.population = merge_populations(agent.population, population_payload(envelope));
        --waiting[agent.id];
      }
    }
  }

  // Every constraint was counted from both endpoints.
  if (report != nullptr) {
    for (const Individual& individual : agents[root].population) {
      report->root_fitness_before_halving.push_back(individual.fitness);
    }
  }
  for (Individual& individual : agents[root].population) {
    if (!individual.assignment.is_complete()) {
      throw ProtocolError("INIT: root population is incomplete after the up-tree merge");
    }
    if (individual.fitness % 2 != 0) {
      throw ProtocolError("INIT: doubled fitness " + std::to_string(individual.fitness) +
                          " is odd");
    }
    individual.fitness /= 2;
  }

  // Root-to-leaf distribution.
  std::vector<AgentId> frontier{root};
  while (!frontier.empty()) {
    if (report != nullptr && !tree.children(frontier.front()).empty()) ++report->down_tree_rounds;
    bus.open(Slot::kInitDownTree);
    for (AgentId sender : frontier) {
      for (AgentId child : tree.children(sender)) {
        bus.post({sender, child, 0, Slot::kInitDownTree, 0, agents[sender].population});
      }
    }
    bus.deliver();
    std::vector<AgentId> next;
    for (AgentId sender : frontier) {
      for (AgentId child : tree.children(sender)) {
        auto received = bus.take(child, Slot::kInitDownTree);
        if (received.size() != 1 || received.front().src != sender) {
          throw ProtocolError("INIT: agent " + std::to_string(child) +
                              " did not receive its parent's population");
        }
        agents[child].population = std::move(population_payload(received.front()));
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }

  return agents;
}

void anytime_update_send(AgentState& agent, const Individual& best, const PseudoTree& tree,
                         int iteration, MessageBus& bus) {
  if (best.fitness < agent.local_best.fitness) agent.local_best = best;
  if (agent.local_best.fitness < agent.global_best.at_or_before(iteration).fitness) {
    if (tree.is_root(agent.id)) {
      agent.global_best.install(iteration, agent.local_best);
      agent.update_message = UpdateMessage{iteration, agent.local_best};
    } else {
      agent.found_message = agent.local_best;
    }
  }
  if (agent.update_message) {
    for (AgentId child : tree.children(agent.id)) {
      bus.post({agent.id, child, iteration, Slot::kUpdate, 0, *agent.update_message});
    }
  }
  if (agent.found_message) {
    bus.post({agent.id, *tree.parent(agent.id), iteration, Slot::kFound, 0,
              std::move(*agent.found_message)});
  }
  agent.found_message.reset();
  agent.update_message.reset();
}

void anytime_update_receive(AgentState& agent, MessageBus& bus, const PseudoTree& tree,
                            int iteration) {
  for (Envelope& envelope : bus.take(agent.id, Slot::kUpdate)) {
    if (tree.is_root(agent.id)) {
      throw ProtocolError("root received an Update message from agent " +
                          std::to_string(envelope.src));
    }
    if (envelope.src != *tree.parent(agent.id)) {
      throw ProtocolError("agent " + std::to_string(agent.id) +
                          " received an Update from non-parent " + std::to_string(envelope.src));
    }
    auto* message = std::get_if<UpdateMessage>(&envelope.payload);
    if (message == nullptr) throw ProtocolError("malformed Update message");
    agent.global_best.install(message->version, message->individual);
    if (message->individual.fitness < agent.local_best.fitness) {
      agent.local_best = message->individual;
    }
    agent.update_message = std::move(*message);
  }

  const auto children = tree.children(agent.id);
  for (Envelope& envelope : bus.take(agent.id, Slot::kFound)) {
    if (std::find(children.begin(), children.end(), envelope.src) == children.end()) {
      throw ProtocolError("agent " + std::to_string(agent.id) +
                          " received a Found message from non-child " +
                          std::to_string(envelope.src));
    }
    auto* individual = std::get_if<Individual>(&envelope.payload);
    if (individual == nullptr) throw ProtocolError("malformed Found message");
    if (individual->fitness < agent.local_best.fitness) agent.local_best = std::move(*individual);
  }

  const int window_start = iteration - tree.height() + 1;
  if (iteration >= tree.height()) {
    const Individual& agreed = agent.global_best.at_or_before(window_start);
    if (!agreed.is_sentinel()) agent.value = agreed.assignment[agent.id];
  }
  agent.global_best.retain_from(window_start);
}

AedEngine::AedEngine(const DcopInstance& instance, PseudoTree tree, AedParams params,
                     std::uint64_t seed, Options options)
    : instance_(&instance),
      tree_(std::move(tree)),
      params_(std::move(params)),
      options_(options),
      bus_(instance) {
  bus_.set_log(options_.message_log);
  agents_ = init_phase(instance, tree_, params_, seed, bus_, options_.forced_draws);
  last_messages_ = bus_.stats().total_sent();
}

Assignment AedEngine::joint_assignment() const {
  Assignment joint(instance_->agent_count());
  for (const AgentState& agent : agents_) joint.bind(agent.id, agent.value);
  return joint;
}

Cost AedEngine::anytime_cost() const { return evaluate_fitness(*instance_, joint_assignment()); }

void AedEngine::send_reproduction_requests(AgentState& agent, double alpha) {
  const auto neighbors = instance_->neighbors(agent.id);
  const std::size_t er = static_cast<std::size_t>(params_.exchange_rate);
  const auto weights = selection_weights(agent.population, params_.rank_max, alpha);
  auto picks = sample_with_replacement(weights, neighbors.size() * er, agent.rng);
  std::shuffle(picks.begin(), picks.end(), agent.rng);
  std::vector<AgentId> partners(neighbors.begin(), neighbors.end());
  std::shuffle(partners.begin(), partners.end(), agent.rng);

  for (std::size_t k = 0; k < partners.size(); ++k) {
    Population batch;
    batch.reserve(er);
    for (std::size_t e = 0; e < er; ++e) {
      batch.push_back(reproduce_initiator(*instance_, agent.id, partners[k],
                                          agent.population[picks[k * er + e]], params_.beta,
                                          params_.weight_max, agent.rng));
    }
    bus_.post({agent.id, partners[k], iteration_, Slot::kReproductionRequest, 0, std::move(batch)});
  }
}

void AedEngine::answer_reproduction_requests(AgentState& agent) {
  for (Envelope& envelope : bus_.take(agent.id, Slot::kReproductionRequest)) {
    Population& batch = population_payload(envelope);
    for (Individual& individual : batch) {
      individual = reproduce_partner(*instance_, agent.id, std::move(individual));
    }
    bus_.post({agent.id, envelope.src, iteration_, Slot::kReproductionReply, 0, std::move(batch)});
  }
}

void AedEngine::collect_offspring(AgentState& agent) {
  for (Envelope& envelope : bus_.take(agent.id, Slot::kReproductionReply)) {
    Population& batch = population_payload(envelope);
    std::move(batch.begin(), batch.end(), std::back_inserter(agent.population));
  }
  agent.peak_population = agent.population.size();
  const auto best = std::min_element(
      agent.population.begin(), agent.population.end(),
      [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
  agent.population_min = best->fitness;
  anytime_update_send(agent, *best, tree_, iteration_, bus_);
}

void AedEngine::reinsert_and_migrate(AgentState& agent, double alpha) {
  anytime_update_receive(agent, bus_, tree_, iteration_);

  const auto neighbors = instance_->neighbors(agent.id);
  const std::size_t er = static_cast<std::size_t>(params_.exchange_rate);
  {
    const auto weights = selection_weights(agent.population, params_.rank_max, alpha);
    const auto keep = sample_without_replacement(weights, neighbors.size() * er, agent.rng);
    Population survivors;
    survivors.reserve(keep.size());
    for (std::size_t index : keep) survivors.push_back(std::move(agent.population[index]));
    agent.population = std::move(survivors);
  }

  if (iteration_ == agent.last_migration + params_.migration_interval) {
    const auto weights = selection_weights(agent.population, params_.rank_max, alpha);
    for (AgentId neighbor : neighbors) {
      Population migrants;
      migrants.reserve(er);
      for (std::size_t index : sample_without_replacement(weights, er, agent.rng)) {
        migrants.push_back(agent.population[index]);
      }
      bus_.post({agent.id, neighbor, iteration_, Slot::kMigration, 0, std::move(migrants)});
    }
    agent.last_migration = iteration_;
  }
}

void AedEngine::absorb_migrants(AgentState& agent) {
  for (Envelope& envelope : bus_.take(agent.id, Slot::kMigration)) {
    Population& migrants = population_payload(envelope);
    std::move(migrants.begin(), migrants.end(), std::back_inserter(agent.population));
  }
  agent.iteration = iteration_;
}

void AedEngine::iterate() {
  ++iteration_;
  bus_.begin_iteration(iteration_);
  const double alpha = params_.alpha_at(iteration_);
  const int n = instance_->agent_count();
  auto each = [this, n](auto&& fn) {
    for_each_agent(n, options_.parallel, [this, &fn](AgentId i) { fn(agents_[i]); });
  };

  bus_.open(Slot::kReproductionRequest);
  each([this, alpha](AgentState& a) { send_reproduction_requests(a, alpha); });
  bus_.deliver();

  bus_.open(Slot::kReproductionReply);
  each([this](AgentState& a) { answer_reproduction_requests(a); });
  bus_.deliver();

  bus_.open({Slot::kFound, Slot::kUpdate});
  each([this](AgentState& a) { collect_offspring(a); });
  bus_.deliver();

  bus_.open(Slot::kMigration);
  each([this, alpha](AgentState& a) { reinsert_and_migrate(a, alpha); });
  bus_.deliver();

  each([this](AgentState& a) { absorb_migrants(a); });
  last_messages_ = bus_.stats().total_sent();
}

}  // namespace aed
