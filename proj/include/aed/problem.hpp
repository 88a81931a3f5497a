// DCOP instances, assignments, individuals and the fitness arithmetic shared by
// every solver in the project.
//
// Domain values are 0-based indices into an agent's domain. Costs are exact
// non-negative integers; nothing in this layer uses floating point.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aed {

using AgentId = std::int32_t;
using Value = std::int32_t;
using Cost = std::int64_t;

inline constexpr Value kUnbound = -1;

// Strictly greater than any aggregated cost an instance can produce (the
// instance constructor rejects tables whose worst-case total would reach it).
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

// Raised when an operation needs a binding that the assignment lacks.
class MissingBindingError : public std::invalid_argument {
 public:
  MissingBindingError(AgentId agent, const std::string& context);
  AgentId agent() const { return agent_; }

 private:
  AgentId agent_;
};

// Raised by merge() when both individuals bind an agent to different values.
class BindingConflictError : public std::invalid_argument {
 public:
  BindingConflictError(AgentId agent, Value left, Value right);
  AgentId agent() const { return agent_; }

 private:
  AgentId agent_;
};

// Dense row-major |D_i| x |D_j| table of constraint costs.
class CostTable {
 public:
  CostTable() = default;
  CostTable(int rows, int cols, std::vector<Cost> cells);
  static CostTable from_rows(const std::vector<std::vector<Cost>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Cost operator()(Value row, Value col) const {
    return cells_[static_cast<std::size_t>(row) * cols_ + col];
  }
  std::span<const Cost> cells() const { return cells_; }
  Cost max_cell() const;

  friend bool operator==(const CostTable&, const CostTable&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Cost> cells_;
};

// A binary constraint. Rows of `table` index the value of `first`, columns the
// value of `second`.
struct Constraint {
  AgentId first = 0;
  AgentId second = 0;
  CostTable table;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// One endpoint's view of a constraint. Lookups go straight into the
// instance's flattened cost pool.
struct NeighborLink {
  AgentId neighbor = 0;
  std::size_t constraint = 0;
  std::size_t offset = 0;
  int own_stride = 0;
  int other_stride = 0;
  std::size_t cheapest_offset = 0;
};

class DcopInstance {
 public:
  DcopInstance(std::vector<int> domain_sizes, std::vector<Constraint> constraints);

  int agent_count() const { return static_cast<int>(domain_sizes_.size()); }
  int domain_size(AgentId agent) const { return domain_sizes_[agent]; }
  std::span<const int> domain_sizes() const { return domain_sizes_; }
  std::span<const Constraint> constraints() const { return constraints_; }

  // Links sorted by ascending neighbor id.
  std::span<const NeighborLink> links(AgentId agent) const { return links_[agent]; }
  std::span<const AgentId> neighbors(AgentId agent) const { return neighbors_[agent]; }
  int degree(AgentId agent) const { return static_cast<int>(links_[agent].size()); }
  bool are_neighbors(AgentId a, AgentId b) const;

  Cost link_cost(const NeighborLink& link, Value own, Value other) const {
    return pool_[link.offset + static_cast<std::size_t>(own) * link.own_stride +
                 static_cast<std::size_t>(other) * link.other_stride];
  }

  // link_cost(link, d, other) for every own value d, contiguous.
  std::span<const Cost> costs_against(const NeighborLink& link, Value other) const {
    return {pool_.data() + link.offset + static_cast<std::size_t>(other) * link.other_stride,
            static_cast<std::size_t>(link.other_stride)};
  }

  // min over the neighbor's domain of link_cost(link, own, *).
  Cost cheapest_cost(const NeighborLink& link, Value own) const {
    return cheapest_[link.cheapest_offset + static_cast<std::size_t>(own)];
  }

  // Cost(i, j, a, b), symmetric in the sense Cost(i,j,a,b) == Cost(j,i,b,a).
  // Throws std::invalid_argument when i and j share no constraint.
  Cost cost(AgentId i, AgentId j, Value a, Value b) const;

  bool in_domain(AgentId agent, Value value) const {
    return value >= 0 && value < domain_sizes_[agent];
  }

  friend bool operator==(const DcopInstance& a, const DcopInstance& b) {
    return a.domain_sizes_ == b.domain_sizes_ && a.constraints_ == b.constraints_;
  }

 private:
  const NeighborLink* find_link(AgentId i, AgentId j) const;

  std::vector<int> domain_sizes_;
  std::vector<Constraint> constraints_;
  std::vector<Cost> pool_;
  std::vector<Cost> cheapest_;
  std::vector<std::vector<NeighborLink>> links_;
  std::vector<std::vector<AgentId>> neighbors_;
};

// Partial map agent -> value, stored densely with kUnbound for gaps.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int agent_count) : values_(agent_count, kUnbound) {}
  explicit Assignment(std::vector<Value> values) : values_(std::move(values)) {}

  int size() const { return static_cast<int>(values_.size()); }
  bool is_bound(AgentId agent) const { return values_[agent] != kUnbound; }
  bool is_complete() const;
  int bound_count() const;

  Value operator[](AgentId agent) const { return values_[agent]; }
  void bind(AgentId agent, Value value) { values_[agent] = value; }
  void unbind(AgentId agent) { values_[agent] = kUnbound; }

  std::span<const Value> values() const { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<Value> values_;
};

struct Individual {
  Assignment assignment;
  Cost fitness = 0;

  // No bindings, fitness 0: the seed of INIT's population construction.
  static Individual empty(int agent_count) { return {Assignment(agent_count), 0}; }
  // No bindings, infinite fitness: initial LB / GB.
  static Individual sentinel(int agent_count) {
    return {Assignment(agent_count), kInfiniteCost};
  }
  bool is_sentinel() const { return fitness == kInfiniteCost; }

  friend bool operator==(const Individual&, const Individual&) = default;
};

using Population = std::vector<Individual>;

// Sum of every constraint's cost, each constraint counted once.
Cost evaluate_fitness(const DcopInstance& instance, const Assignment& assignment);

// Sum over N_i of Cost(i, j, x_i, x_j).
Cost local_cost(const DcopInstance& instance, AgentId agent, const Assignment& assignment);

// Change in agent's local cost when its value moves from old_value to
// new_value with every neighbor held fixed.
Cost delta_local(const DcopInstance& instance, AgentId agent, const Assignment& assignment,
                 Value old_value, Value new_value);

Individual merge(const Individual& left, const Individual& right);
Population merge_populations(std::span<const Individual> left, std::span<const Individual> right);

std::string to_string(const Assignment& assignment);

}  // namespace aed
