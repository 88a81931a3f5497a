#include "aed/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "kernels.hpp"

namespace aed {

std::vector<double> rank_population(std::span<const Individual> population, double r_max) {
  if (population.empty()) throw std::invalid_argument("rank_population: empty population");
  if (!(r_max > 0.0)) throw std::invalid_argument("rank_population: r_max must be positive");
  const auto [best_it, worst_it] = std::minmax_element(
      population.begin(), population.end(),
      [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
  const Cost worst = worst_it->fitness;
  const double spread = static_cast<double>(worst - best_it->fitness) + 1.0;

  std::vector<double> ranks;
  ranks.reserve(population.size());
  for (const Individual& individual : population) {
    const double gap = static_cast<double>(worst - individual.fitness) + 1.0;
    ranks.push_back(r_max * gap / spread);
  }
  return ranks;
}

std::vector<double> selection_probabilities(std::span<const double> ranks, double alpha) {
  if (ranks.empty()) return {};
  if (!(alpha > 0.0)) throw std::invalid_argument("selection_probabilities: alpha must be positive");
  const double top = *std::max_element(ranks.begin(), ranks.end());
  std::vector<double> p;
  p.reserve(ranks.size());
  for (double r : ranks) {
    if (!(r > 0.0)) throw std::invalid_argument("selection_probabilities: ranks must be positive");
    p.push_back(detail::power(r / top, alpha));
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> selection_weights(std::span<const Individual> population, double r_max,
                                      double alpha) {
  const auto ranks = rank_population(population, r_max);
  if (!(alpha > 0.0)) throw std::invalid_argument("selection_weights: alpha must be positive");
  std::vector<double> weights;
  weights.reserve(ranks.size());
  // The best individual always has rank r_max.
  for (double r : ranks) weights.push_back(detail::power(r / r_max, alpha));
  return weights;
}

std::vector<std::size_t> sample_with_replacement(std::span<const double> weights,
                                                 std::size_t count, Rng& rng) {
  if (weights.empty()) {
    if (count == 0) return {};
    throw std::invalid_argument("sample_with_replacement: nothing to sample from");
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<std::size_t> out(count);
  for (auto& index : out) index = pick(rng);
  return out;
}

std::vector<std::size_t> sample_without_replacement(std::span<const double> weights,
                                                    std::size_t count, Rng& rng) {
  if (count > weights.size()) {
    throw std::invalid_argument("sample_without_replacement: sample of " + std::to_string(count) +
                                " from " + std::to_string(weights.size()) + " items");
  }
  std::uniform_real_distribution<double> unit(std::numeric_limits<double>::min(), 1.0);
  // log(u) / w orders items exactly like u^(1/w) without underflow.
  std::vector<std::pair<double, std::size_t>> keyed(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    keyed[k] = {std::log(unit(rng)) / weights[k], k};
  }
  auto later_draw = [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  };
  const auto cut = keyed.begin() + static_cast<std::ptrdiff_t>(count);
  if (count < keyed.size()) std::nth_element(keyed.begin(), cut, keyed.end(), later_draw);
  std::sort(keyed.begin(), cut, later_draw);
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(keyed[k].second);
  return out;
}

Population select_rp(std::span<const Individual> population, std::size_t count, double r_max,
                     double alpha, Rng& rng) {
  const auto weights = selection_weights(population, r_max, alpha);
  Population out;
  out.reserve(count);
  for (std::size_t index : sample_with_replacement(weights, count, rng)) {
    out.push_back(population[index]);
  }
  return out;
}

Population select_wrp(std::span<const Individual> population, std::size_t count, double r_max,
                      double alpha, Rng& rng) {
  if (count > population.size()) {
    throw std::invalid_argument("select_wrp: sample larger than the population");
  }
  if (count == 0) return {};
  const auto weights = selection_weights(population, r_max, alpha);
  Population out;
  out.reserve(count);
  for (std::size_t index : sample_without_replacement(weights, count, rng)) {
    out.push_back(population[index]);
  }
  return out;
}

}  // namespace aed
