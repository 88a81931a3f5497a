#include "aed/baselines.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace aed {

void DsaParams::validate() const {
  if (!(activation > 0.0 && activation <= 1.0)) {
    throw std::invalid_argument("DSA activation probability must lie in (0, 1]");
  }
}

Value dsa_step(const DcopInstance& instance, const Assignment& view, AgentId agent,
               double activation, Rng& rng) {
  const Value current = view[agent];
  if (current == kUnbound) throw MissingBindingError(agent, "dsa_step");
  const int domain = instance.domain_size(agent);

  std::vector<Cost> costs(domain, 0);
  for (const NeighborLink& link : instance.links(agent)) {
    const Value other = view[link.neighbor];
    if (other == kUnbound) throw MissingBindingError(link.neighbor, "dsa_step");
    const auto row = instance.costs_against(link, other);
    for (Value d = 0; d < domain; ++d) costs[d] += row[d];
  }

  Cost best = kInfiniteCost;
  for (Value d = 0; d < domain; ++d) {
    if (d != current) best = std::min(best, costs[d]);
  }
  if (best == kInfiniteCost || best > costs[current]) return current;

  std::vector<Value> candidates;
  for (Value d = 0; d < domain; ++d) {
    if (d != current && costs[d] == best) candidates.push_back(d);
  }
  const Value pick =
      candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
  return std::bernoulli_distribution(activation)(rng) ? pick : current;
}

DsaEngine::DsaEngine(const DcopInstance& instance, DsaParams params, std::uint64_t seed,
                     bool parallel)
    : instance_(&instance),
      params_(params),
      parallel_(parallel),
      bus_(instance),
      assignment_(instance.agent_count()) {
  params_.validate();
  rngs_.reserve(instance.agent_count());
  for (AgentId i = 0; i < instance.agent_count(); ++i) {
    rngs_.push_back(make_rng(seed, static_cast<std::uint64_t>(i)));
    assignment_.bind(
        i, std::uniform_int_distribution<Value>(0, instance.domain_size(i) - 1)(rngs_.back()));
  }
  current_cost_ = evaluate_fitness(instance, assignment_);
  best_cost_ = current_cost_;
}

void DsaEngine::iterate() {
  ++iteration_;
  bus_.begin_iteration(iteration_);
  const int n = instance_->agent_count();

  bus_.open(Slot::kValueExchange);
  for_each_agent(n, parallel_, [this](AgentId i) {
    for (AgentId neighbor : instance_->neighbors(i)) {
      bus_.post({i, neighbor, iteration_, Slot::kValueExchange, 0, assignment_[i]});
    }
  });
  bus_.deliver();

  std::vector<Value> next(n);
  for_each_agent(n, parallel_, [this, &next](AgentId i) {
    Assignment view(instance_->agent_count());
    view.bind(i, assignment_[i]);
    for (const Envelope& envelope : bus_.take(i, Slot::kValueExchange)) {
      view.bind(envelope.src, std::get<Value>(envelope.payload));
    }
    next[i] = dsa_step(*instance_, view, i, params_.activation, rngs_[i]);
  });
  for (AgentId i = 0; i < n; ++i) assignment_.bind(i, next[i]);

  current_cost_ = evaluate_fitness(*instance_, assignment_);
  best_cost_ = std::min(best_cost_, current_cost_);
  last_messages_ = bus_.stats().total_sent();
}

OptimumResult brute_force_optimum(const DcopInstance& instance, std::uint64_t cap) {
  const int n = instance.agent_count();
  std::uint64_t space = 1;
  for (int size : instance.domain_sizes()) {
    if (space > cap / static_cast<std::uint64_t>(size)) {
      throw std::length_error("search space exceeds the brute-force cap of " +
                              std::to_string(cap));
    }
    space *= static_cast<std::uint64_t>(size);
  }

  std::vector<Value> values(n, 0);
  OptimumResult best{Assignment(values), kInfiniteCost};
  while (true) {
    const Assignment candidate(values);
    const Cost cost = evaluate_fitness(instance, candidate);
    if (cost < best.cost) best = {candidate, cost};

    // Odometer with agent 0 as the most significant digit.
    int position = n - 1;
    while (position >= 0 && values[position] + 1 == instance.domain_size(position)) {
      values[position] = 0;
      --position;
    }
    if (position < 0) break;
    ++values[position];
  }
  return best;
}

}  // namespace aed
