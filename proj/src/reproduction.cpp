#include "aed/reproduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kernels.hpp"

namespace aed {

namespace {

void fill_optimistic_costs(const DcopInstance& instance, AgentId initiator, AgentId partner,
                           const Assignment& assignment, std::span<Cost> scores) {
  const NeighborLink* link = detail::accumulate_link_costs(instance, initiator, assignment, partner,
                                                           scores, "optimistic_costs");
  if (link == nullptr) {
    throw std::invalid_argument("agent " + std::to_string(partner) + " is not a neighbor of " +
                                std::to_string(initiator));
  }
  for (Value d = 0; d < static_cast<Value>(scores.size()); ++d) {
    scores[d] += instance.cheapest_cost(*link, d);
  }
}

// Unnormalized P(d); returns the total.
double fill_reproduction_weights(std::span<const Cost> scores, double beta, double o_max,
                                 std::span<double> weights) {
  const auto [best_it, worst_it] = std::minmax_element(scores.begin(), scores.end());
  const Cost worst = *worst_it;
  const double inverse_spread = 1.0 / (static_cast<double>(worst - *best_it) + 1.0);
  double total = 0.0;
  // W_d / o_max lies in (0, 1]; dividing out o_max keeps W^beta finite.
  for (std::size_t d = 0; d < scores.size(); ++d) {
    const double weight = o_max * (static_cast<double>(worst - scores[d]) + 1.0) * inverse_spread;
    weights[d] = detail::power(weight / o_max, beta);
    total += weights[d];
  }
  return total;
}

void check_shape(double beta, double o_max) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(o_max > 0.0)) throw std::invalid_argument("o_max must be positive");
}

}  // namespace

std::vector<Cost> optimistic_costs(const DcopInstance& instance, AgentId initiator,
                                   AgentId partner, const Assignment& assignment) {
  std::vector<Cost> scores(instance.domain_size(initiator), 0);
  fill_optimistic_costs(instance, initiator, partner, assignment, scores);
  return scores;
}

std::vector<double> reproduction_distribution(const DcopInstance& instance, AgentId initiator,
                                              AgentId partner, const Assignment& assignment,
                                              double beta, double o_max) {
  check_shape(beta, o_max);
  const auto scores = optimistic_costs(instance, initiator, partner, assignment);
  std::vector<double> p(scores.size());
  const double total = fill_reproduction_weights(scores, beta, o_max, p);
  for (double& x : p) x /= total;
  return p;
}

Individual reproduce_initiator(const DcopInstance& instance, AgentId initiator, AgentId partner,
                               Individual individual, double beta, double o_max, Rng& rng) {
  const int domain = instance.domain_size(initiator);
  if (domain == 1) return individual;
  check_shape(beta, o_max);
  detail::Scratch<Cost> score_buffer(domain);
  detail::Scratch<double> weight_buffer(domain);
  const auto scores = score_buffer.span();
  const auto weights = weight_buffer.span();
  fill_optimistic_costs(instance, initiator, partner, individual.assignment, scores);
  const double total = fill_reproduction_weights(scores, beta, o_max, weights);

  // Inverse-CDF draw; the last value absorbs rounding at the top end.
  double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  Value new_value = static_cast<Value>(domain - 1);
  for (Value d = 0; d < domain; ++d) {
    if (u < weights[d]) {
      new_value = d;
      break;
    }
    u -= weights[d];
  }

  const Value old_value = individual.assignment[initiator];
  if (new_value != old_value) {
    individual.fitness += delta_local(instance, initiator, individual.assignment, old_value, new_value);
    individual.assignment.bind(initiator, new_value);
  }
  return individual;
}

Value best_response(const DcopInstance& instance, AgentId agent, const Assignment& assignment) {
  const int domain = instance.domain_size(agent);
  detail::Scratch<Cost> buffer(domain);
  const auto totals = buffer.span();
  detail::accumulate_link_costs(instance, agent, assignment, kUnbound, totals, "best_response");
  return static_cast<Value>(std::min_element(totals.begin(), totals.end()) - totals.begin());
}

Individual reproduce_partner(const DcopInstance& instance, AgentId partner, Individual individual) {
  const Value old_value = individual.assignment[partner];
  if (old_value == kUnbound) throw MissingBindingError(partner, "reproduce_partner");
  const Value new_value = best_response(instance, partner, individual.assignment);
  if (new_value != old_value) {
    individual.fitness += delta_local(instance, partner, individual.assignment, old_value, new_value);
    individual.assignment.bind(partner, new_value);
  }
  return individual;
}

}  // namespace aed
