#include "aed/problem.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace aed {

MissingBindingError::MissingBindingError(AgentId agent, const std::string& context)
    : std::invalid_argument(context + ": agent " + std::to_string(agent) + " is unbound"),
      agent_(agent) {}

BindingConflictError::BindingConflictError(AgentId agent, Value left, Value right)
    : std::invalid_argument("merge conflict on agent " + std::to_string(agent) + ": " +
                            std::to_string(left) + " vs " + std::to_string(right)),
      agent_(agent) {}

CostTable::CostTable(int rows, int cols, std::vector<Cost> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("cost table must be non-empty");
  if (cells_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("cost table cell count does not match its shape");
  }
  if (std::any_of(cells_.begin(), cells_.end(), [](Cost c) { return c < 0; })) {
    throw std::invalid_argument("cost table contains a negative cost");
  }
}

CostTable CostTable::from_rows(const std::vector<std::vector<Cost>>& rows) {
  if (rows.empty()) throw std::invalid_argument("cost table must be non-empty");
  const std::size_t cols = rows.front().size();
  std::vector<Cost> cells;
  cells.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw std::invalid_argument("cost table rows have unequal length");
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return CostTable(static_cast<int>(rows.size()), static_cast<int>(cols), std::move(cells));
}

Cost CostTable::max_cell() const { return *std::max_element(cells_.begin(), cells_.end()); }

DcopInstance::DcopInstance(std::vector<int> domain_sizes, std::vector<Constraint> constraints)
    : domain_sizes_(std::move(domain_sizes)), constraints_(std::move(constraints)) {
  const int n = agent_count();
  if (n <= 0) throw std::invalid_argument("instance needs at least one agent");
  for (int i = 0; i < n; ++i) {
    if (domain_sizes_[i] <= 0) {
      throw std::invalid_argument("agent " + std::to_string(i) + " has an empty domain");
    }
  }

  links_.resize(n);
  neighbors_.resize(n);
  std::set<std::pair<AgentId, AgentId>> seen;
  // Headroom for the doubled sums INIT produces before halving.
  const Cost budget = std::numeric_limits<Cost>::max() / 4;
  Cost worst_total = 0;
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    const Constraint& c = constraints_[k];
    if (c.first < 0 || c.first >= n || c.second < 0 || c.second >= n) {
      throw std::invalid_argument("constraint " + std::to_string(k) + " names an unknown agent");
    }
    if (c.first == c.second) {
      throw std::invalid_argument("constraint " + std::to_string(k) + " is unary");
    }
    if (!seen.insert(std::minmax(c.first, c.second)).second) {
      throw std::invalid_argument("duplicate constraint between agents " +
                                  std::to_string(c.first) + " and " + std::to_string(c.second));
    }
    if (c.table.rows() != domain_sizes_[c.first] || c.table.cols() != domain_sizes_[c.second]) {
      throw std::invalid_argument("constraint " + std::to_string(k) +
                                  " table shape does not match the domains");
    }
    const Cost worst = c.table.max_cell();
    if (worst > budget - worst_total) throw std::overflow_error("instance costs are too large");
    worst_total += worst;

    const std::size_t first_min = cheapest_.size();
    for (int r = 0; r < c.table.rows(); ++r) {
      Cost best = kInfiniteCost;
      for (int col = 0; col < c.table.cols(); ++col) best = std::min(best, c.table(r, col));
      cheapest_.push_back(best);
    }
    const std::size_t second_min = cheapest_.size();
    for (int col = 0; col < c.table.cols(); ++col) {
      Cost best = kInfiniteCost;
      for (int r = 0; r < c.table.rows(); ++r) best = std::min(best, c.table(r, col));
      cheapest_.push_back(best);
    }
    links_[c.first].push_back({c.second, k, 0, 1, c.table.rows(), first_min});
    links_[c.second].push_back({c.first, k, 0, 1, c.table.cols(), second_min});
  }

  for (int i = 0; i < n; ++i) {
    std::sort(links_[i].begin(), links_[i].end(),
              [](const NeighborLink& a, const NeighborLink& b) { return a.neighbor < b.neighbor; });
    neighbors_[i].reserve(links_[i].size());
    for (const auto& link : links_[i]) neighbors_[i].push_back(link.neighbor);
  }

  // Every agent gets its own copy of its tables, stored consecutively and laid
  // out other-major: the costs of all own values against one neighbor value
  // are contiguous, and one agent's whole working set stays close together.
  for (int i = 0; i < n; ++i) {
    for (NeighborLink& link : links_[i]) {
      const Constraint& c = constraints_[link.constraint];
      link.offset = pool_.size();
      if (c.first == i) {
        for (int col = 0; col < c.table.cols(); ++col) {
          for (int r = 0; r < c.table.rows(); ++r) pool_.push_back(c.table(r, col));
        }
      } else {
        pool_.insert(pool_.end(), c.table.cells().begin(), c.table.cells().end());
      }
    }
  }
}

const NeighborLink* DcopInstance::find_link(AgentId i, AgentId j) const {
  const auto& links = links_[i];
  auto it = std::lower_bound(links.begin(), links.end(), j,
                             [](const NeighborLink& l, AgentId id) { return l.neighbor < id; });
  return it != links.end() && it->neighbor == j ? &*it : nullptr;
}

bool DcopInstance::are_neighbors(AgentId a, AgentId b) const {
  return a >= 0 && a < agent_count() && find_link(a, b) != nullptr;
}

Cost DcopInstance::cost(AgentId i, AgentId j, Value a, Value b) const {
  const NeighborLink* link = find_link(i, j);
  if (link == nullptr) {
    throw std::invalid_argument("agents " + std::to_string(i) + " and " + std::to_string(j) +
                                " share no constraint");
  }
  if (!in_domain(i, a) || !in_domain(j, b)) throw std::out_of_range("value outside domain");
  return link_cost(*link, a, b);
}

bool Assignment::is_complete() const {
  return std::none_of(values_.begin(), values_.end(), [](Value v) { return v == kUnbound; });
}

int Assignment::bound_count() const {
  return static_cast<int>(
      std::count_if(values_.begin(), values_.end(), [](Value v) { return v != kUnbound; }));
}

Cost evaluate_fitness(const DcopInstance& instance, const Assignment& assignment) {
  if (assignment.size() != instance.agent_count()) {
    throw std::invalid_argument("assignment size does not match the instance");
  }
  for (AgentId i = 0; i < assignment.size(); ++i) {
    if (!assignment.is_bound(i)) throw MissingBindingError(i, "evaluate_fitness");
  }
  Cost total = 0;
  for (const Constraint& c : instance.constraints()) {
    total += c.table(assignment[c.first], assignment[c.second]);
  }
  return total;
}

Cost local_cost(const DcopInstance& instance, AgentId agent, const Assignment& assignment) {
  if (!assignment.is_bound(agent)) throw MissingBindingError(agent, "local_cost");
  const Value own = assignment[agent];
  Cost total = 0;
  for (const NeighborLink& link : instance.links(agent)) {
    const Value other = assignment[link.neighbor];
    if (other == kUnbound) throw MissingBindingError(link.neighbor, "local_cost");
    total += instance.link_cost(link, own, other);
  }
  return total;
}

Cost delta_local(const DcopInstance& instance, AgentId agent, const Assignment& assignment,
                 Value old_value, Value new_value) {
  if (!instance.in_domain(agent, old_value) || !instance.in_domain(agent, new_value)) {
    throw std::out_of_range("delta_local: value outside the domain of agent " +
                            std::to_string(agent));
  }
  Cost delta = 0;
  for (const NeighborLink& link : instance.links(agent)) {
    const Value other = assignment[link.neighbor];
    if (other == kUnbound) throw MissingBindingError(link.neighbor, "delta_local");
    delta += instance.link_cost(link, new_value, other) - instance.link_cost(link, old_value, other);
  }
  return delta;
}

Individual merge(const Individual& left, const Individual& right) {
  if (left.assignment.size() != right.assignment.size()) {
    throw std::invalid_argument("merge: individuals cover different agent sets");
  }
  Individual out = left;
  for (AgentId i = 0; i < right.assignment.size(); ++i) {
    const Value v = right.assignment[i];
    if (v == kUnbound) continue;
    const Value mine = out.assignment[i];
    if (mine != kUnbound && mine != v) throw BindingConflictError(i, mine, v);
    out.assignment.bind(i, v);
  }
  out.fitness = left.fitness + right.fitness;
  return out;
}

Population merge_populations(std::span<const Individual> left, std::span<const Individual> right) {
  if (left.size() != right.size()) {
    throw std::invalid_argument("merge_populations: sizes " + std::to_string(left.size()) +
                                " and " + std::to_string(right.size()) + " differ");
  }
  Population out;
  out.reserve(left.size());
  for (std::size_t k = 0; k < left.size(); ++k) out.push_back(merge(left[k], right[k]));
  return out;
}

std::string to_string(const Assignment& assignment) {
  std::ostringstream os;
  os << '{';
  for (AgentId i = 0; i < assignment.size(); ++i) {
    if (i > 0) os << ',';
    if (assignment.is_bound(i)) {
      os << assignment[i];
    } else {
      os << '_';
    }
  }
  os << '}';
  return os.str();
}

}  // namespace aed
