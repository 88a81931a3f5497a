#include "aed/gb_store.hpp"

namespace aed {

void GbStore::install(int version, Individual individual) {
  versions_.insert_or_assign(version, std::move(individual));
}

const Individual& GbStore::at_or_before(int version) const {
  auto it = versions_.upper_bound(version);
  if (it == versions_.begin()) return sentinel_;
  return std::prev(it)->second;
}

void GbStore::retain_from(int oldest) {
  auto floor = versions_.upper_bound(oldest);
  if (floor == versions_.begin()) return;
  --floor;  // newest version <= oldest
  versions_.erase(versions_.begin(), floor);
}

std::optional<int> GbStore::latest_version() const {
  if (versions_.empty()) return std::nullopt;
  return versions_.rbegin()->first;
}

std::optional<int> GbStore::earliest_version() const {
  if (versions_.empty()) return std::nullopt;
  return versions_.begin()->first;
}

}  // namespace aed
