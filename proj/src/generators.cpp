#include "aed/generators.hpp"

#include <random>
#include <string>
#include <vector>

namespace aed {
namespace {

void check_common(int n, double p, CostRange costs) {
  if (n < 2) throw std::invalid_argument("generator needs at least 2 agents");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in (0, 1]");
  if (costs.lo < 0 || costs.lo > costs.hi) {
    throw std::invalid_argument("cost range must satisfy 0 <= lo <= hi");
  }
}

template <typename MakeTable>
DcopInstance sample_connected(int n, int domain, double p, Rng& rng, MakeTable make_table) {
  std::bernoulli_distribution edge(p);
  for (int attempt = 0; attempt < kConnectivityRetries; ++attempt) {
    std::vector<Constraint> constraints;
    for (AgentId i = 0; i < n; ++i) {
      for (AgentId j = i + 1; j < n; ++j) {
        if (edge(rng)) constraints.push_back({i, j, make_table()});
      }
    }
    DcopInstance instance(std::vector<int>(n, domain), std::move(constraints));
    if (is_connected(instance)) return instance;
  }
  throw GenerationError("no connected graph after " + std::to_string(kConnectivityRetries) +
                        " samples (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
}

}  // namespace

bool is_connected(const DcopInstance& instance) {
  const int n = instance.agent_count();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<AgentId> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const AgentId agent = stack.back();
    stack.pop_back();
    for (AgentId neighbor : instance.neighbors(agent)) {
      if (!seen[neighbor]) {
        seen[neighbor] = 1;
        ++reached;
        stack.push_back(neighbor);
      }
    }
  }
  return reached == n;
}

DcopInstance gen_random_dcop(int n, int domain_size, double p, CostRange costs, Rng& rng) {
  check_common(n, p, costs);
  if (domain_size < 1) throw std::invalid_argument("domain size must be positive");
  std::uniform_int_distribution<Cost> cell(costs.lo, costs.hi);
  return sample_connected(n, domain_size, p, rng, [&] {
    std::vector<Cost> cells(static_cast<std::size_t>(domain_size) * domain_size);
    for (Cost& c : cells) c = cell(rng);
    return CostTable(domain_size, domain_size, std::move(cells));
  });
}

DcopInstance gen_weighted_graph_coloring(int n, int colors, double p, CostRange costs, Rng& rng) {
  check_common(n, p, costs);
  if (colors < 2) throw std::invalid_argument("graph coloring needs at least 2 colors");
  std::uniform_int_distribution<Cost> weight(costs.lo, costs.hi);
  return sample_connected(n, colors, p, rng, [&] {
    const Cost w = weight(rng);
    std::vector<Cost> cells(static_cast<std::size_t>(colors) * colors, 0);
    for (int a = 0; a < colors; ++a) cells[static_cast<std::size_t>(a) * colors + a] = w;
    return CostTable(colors, colors, std::move(cells));
  });
}

}  // namespace aed
