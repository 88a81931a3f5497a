#pragma once

#include <cstddef>
#include <map>
#include <optional>

#include "aed/problem.hpp"

namespace aed {

// Versioned global-best store. at_or_before(j) is GB^j: the entry with the
// largest version <= j, or the infinite-fitness sentinel.
class GbStore {
 public:
  explicit GbStore(int agent_count) : sentinel_(Individual::sentinel(agent_count)) {}

  void install(int version, Individual individual);
  const Individual& at_or_before(int version) const;

  // Drops versions older than `oldest`, except the newest of those, which
  // still answers at_or_before(oldest).
  void retain_from(int oldest);

  std::size_t version_count() const { return versions_.size(); }
  std::optional<int> latest_version() const;
  std::optional<int> earliest_version() const;

 private:
  std::map<int, Individual> versions_;
  Individual sentinel_;
};

}  // namespace aed
