// Erdős–Rényi instance generators for the benchmark families.

#pragma once

#include <stdexcept>

#include "aed/problem.hpp"
#include "aed/rng.hpp"

namespace aed {

struct CostRange {
  Cost lo = 1;
  Cost hi = 100;

  friend bool operator==(const CostRange&, const CostRange&) = default;
};

inline constexpr int kConnectivityRetries = 100;

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every unordered pair becomes a constraint with probability p and every table
// cell is uniform in [lo, hi]. Disconnected samples are redrawn; after
// kConnectivityRetries failures a GenerationError is thrown.
DcopInstance gen_random_dcop(int n, int domain_size, double p, CostRange costs, Rng& rng);

// One violation weight w per edge: cell (a, b) = w when a == b, else 0.
DcopInstance gen_weighted_graph_coloring(int n, int colors, double p, CostRange costs, Rng& rng);

bool is_connected(const DcopInstance& instance);

}  // namespace aed
