#include "aed/pseudo_tree.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace aed {

namespace {
constexpr AgentId kNoParent = -1;
}  // namespace

DisconnectedGraphError::DisconnectedGraphError(AgentId unreachable)
    : std::invalid_argument("constraint graph is disconnected: agent " +
                            std::to_string(unreachable) + " is unreachable from the root"),
      agent_(unreachable) {}

AgentId RootRule::choose(const DcopInstance& instance) const {
  if (fixed_) {
    if (*fixed_ < 0 || *fixed_ >= instance.agent_count()) {
      throw std::invalid_argument("root " + std::to_string(*fixed_) + " is not an agent");
    }
    return *fixed_;
  }
  AgentId best = 0;
  for (AgentId i = 1; i < instance.agent_count(); ++i) {
    if (instance.degree(i) > instance.degree(best)) best = i;
  }
  return best;
}

std::optional<AgentId> PseudoTree::parent(AgentId agent) const {
  if (parent_[agent] == kNoParent) return std::nullopt;
  return parent_[agent];
}

std::string PseudoTree::render() const {
  std::ostringstream os;
  for (AgentId i = 0; i < size(); ++i) {
    os << i << ' ' << level_[i] << ' ';
    if (parent_[i] == kNoParent) {
      os << '-';
    } else {
      os << parent_[i];
    }
    os << " [";
    for (std::size_t k = 0; k < children_[i].size(); ++k) {
      if (k > 0) os << ' ';
      os << children_[i][k];
    }
    os << "]\n";
  }
  return os.str();
}

PseudoTree build_bfs_pseudo_tree(const DcopInstance& instance, const RootRule& rule) {
  const int n = instance.agent_count();
  if (n < 2) {
    throw std::invalid_argument("pseudo-tree needs at least two connected agents, got " +
                                std::to_string(n));
  }

  PseudoTree tree;
  tree.root_ = rule.choose(instance);
  tree.parent_.assign(n, kNoParent);
  tree.children_.assign(n, {});
  tree.level_.assign(n, -1);

  std::queue<AgentId> frontier;
  frontier.push(tree.root_);
  tree.level_[tree.root_] = 0;
  while (!frontier.empty()) {
    const AgentId current = frontier.front();
    frontier.pop();
    for (AgentId next : instance.neighbors(current)) {
      if (tree.level_[next] >= 0) continue;
      tree.level_[next] = tree.level_[current] + 1;
      tree.parent_[next] = current;
      tree.children_[current].push_back(next);
      frontier.push(next);
    }
  }

  for (AgentId i = 0; i < n; ++i) {
    if (tree.level_[i] < 0) throw DisconnectedGraphError(i);
  }
  tree.height_ = *std::max_element(tree.level_.begin(), tree.level_.end());
  return tree;
}

}  // namespace aed
