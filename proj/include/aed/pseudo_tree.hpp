// BFS pseudo-tree over the constraint graph.
//
// Height is the number of edges on the longest root-to-leaf path, i.e. the
// maximum level. Non-tree constraint edges stay visible only through the
// instance's neighbor sets.

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aed/problem.hpp"

namespace aed {

class DisconnectedGraphError : public std::invalid_argument {
 public:
  explicit DisconnectedGraphError(AgentId unreachable);
  AgentId unreachable_agent() const { return agent_; }

 private:
  AgentId agent_;
};

// Default: maximum-degree agent, ties to the smallest index.
class RootRule {
 public:
  static RootRule max_degree() { return RootRule(std::nullopt); }
  static RootRule fixed(AgentId root) { return RootRule(root); }

  AgentId choose(const DcopInstance& instance) const;
  std::optional<AgentId> fixed_root() const { return fixed_; }

 private:
  explicit RootRule(std::optional<AgentId> fixed) : fixed_(fixed) {}
  std::optional<AgentId> fixed_;
};

class PseudoTree {
 public:
  AgentId root() const { return root_; }
  int size() const { return static_cast<int>(level_.size()); }
  std::optional<AgentId> parent(AgentId agent) const;
  std::span<const AgentId> children(AgentId agent) const { return children_[agent]; }
  int level(AgentId agent) const { return level_[agent]; }
  int height() const { return height_; }
  bool is_root(AgentId agent) const { return agent == root_; }
  bool is_leaf(AgentId agent) const { return children_[agent].empty(); }

  // "agent level parent [children]" per line; the root's parent prints as -.
  std::string render() const;

 private:
  friend PseudoTree build_bfs_pseudo_tree(const DcopInstance&, const RootRule&);

  AgentId root_ = 0;
  std::vector<AgentId> parent_;  // kNoParent for the root
  std::vector<std::vector<AgentId>> children_;
  std::vector<int> level_;
  int height_ = 0;
};

// Requires at least two agents and a connected constraint graph. Children are
// discovered in ascending agent order.
PseudoTree build_bfs_pseudo_tree(const DcopInstance& instance,
                                 const RootRule& rule = RootRule::max_degree());

inline int height(const PseudoTree& tree) { return tree.height(); }

}  // namespace aed
