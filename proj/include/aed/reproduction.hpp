// Pairwise reproduction between an initiator agent i and a partner neighbor j.
//
// The initiator scores each candidate value d of x_i by its optimistic local
// cost: the cost against every neighbor except j at the individual's current
// values, plus the cheapest cost the (i, j) constraint can offer for d. Scores
// become weights
//     W_d = o_max * (|O_worst - O_d| + 1) / (|O_worst - O_best| + 1)
// and x_i is resampled with P(d) proportional to W_d^beta. The partner then
// sets x_j to its best response against the updated individual. Both sides
// patch the stored fitness incrementally with delta_local.

#pragma once

#include <vector>

#include "aed/problem.hpp"
#include "aed/rng.hpp"

namespace aed {

// O_d for every d in D_i. The individual must bind all of N_i.
std::vector<Cost> optimistic_costs(const DcopInstance& instance, AgentId initiator,
                                   AgentId partner, const Assignment& assignment);

// Sampling distribution over D_i.
std::vector<double> reproduction_distribution(const DcopInstance& instance, AgentId initiator,
                                              AgentId partner, const Assignment& assignment,
                                              double beta, double o_max);

Individual reproduce_initiator(const DcopInstance& instance, AgentId initiator, AgentId partner,
                               Individual individual, double beta, double o_max, Rng& rng);

// x_j <- argmin over D_j of j's local cost; ties go to the smallest value.
Value best_response(const DcopInstance& instance, AgentId agent, const Assignment& assignment);

Individual reproduce_partner(const DcopInstance& instance, AgentId partner, Individual individual);

}  // namespace aed
