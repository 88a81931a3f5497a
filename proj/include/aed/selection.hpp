// Rank-proportional selection over a local population.
//
//   rank(I_j) = r_max * (|f_worst - f_j| + 1) / (|f_worst - f_best| + 1)
//   P(I_j)    = rank_j^alpha / sum_k rank_k^alpha
//
// The +1 terms keep a population of equal fitness well-defined (every rank is
// r_max). r_max cancels in P, so the probabilities do not depend on it.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aed/problem.hpp"
#include "aed/rng.hpp"

namespace aed {

// Ranks in (0, r_max]. Throws std::invalid_argument on an empty population.
std::vector<double> rank_population(std::span<const Individual> population, double r_max);

std::vector<double> selection_probabilities(std::span<const double> ranks, double alpha);

// Index draws; `weights` need not be normalized but must be positive.
std::vector<std::size_t> sample_with_replacement(std::span<const double> weights,
                                                 std::size_t count, Rng& rng);

// Successive normalized draws without replacement, realized as
// Efraimidis-Spirakis weighted reservoir keys u^(1/w). Indices are returned in
// draw order. Throws std::invalid_argument if count > weights.size().
std::vector<std::size_t> sample_without_replacement(std::span<const double> weights,
                                                    std::size_t count, Rng& rng);

// Select_rp: `count` draws with replacement, weighted by rank^alpha.
Population select_rp(std::span<const Individual> population, std::size_t count, double r_max,
                     double alpha, Rng& rng);

// Select_wrp: `count` distinct positions, weighted by rank^alpha.
Population select_wrp(std::span<const Individual> population, std::size_t count, double r_max,
                      double alpha, Rng& rng);

// rank^alpha weights scaled so the best individual weighs 1; the
// normalization keeps large alpha from overflowing.
std::vector<double> selection_weights(std::span<const Individual> population, double r_max,
                                      double alpha);

}  // namespace aed
