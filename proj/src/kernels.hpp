// Small private helpers for the inner loops.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "aed/problem.hpp"

namespace aed::detail {

// x^e with a multiply loop for the small integral exponents the defaults use.
inline double power(double x, double e) {
  if (e >= 1.0 && e <= 16.0 && e == std::floor(e)) {
    double out = x;
    for (int k = 1; k < static_cast<int>(e); ++k) out *= x;
    return out;
  }
  return std::pow(x, e);
}

// Stack storage for per-domain arrays, falling back to the heap for large domains.
template <typename T, std::size_t N = 64>
class Scratch {
 public:
  explicit Scratch(std::size_t size) : size_(size) {
    if (size > N) heap_.resize(size);
    else std::fill(small_.begin(), small_.begin() + size, T{});
  }
  std::span<T> span() { return size_ > N ? std::span<T>(heap_) : std::span<T>(small_.data(), size_); }

 private:
  std::size_t size_;
  std::array<T, N> small_;
  std::vector<T> heap_;
};

namespace kernel {

template <int D>
const NeighborLink* accumulate(const DcopInstance& instance, AgentId agent,
                               const Assignment& assignment, AgentId skip, Cost* out,
                               int domain, const char* context) {
  const int size = D > 0 ? D : domain;
  const NeighborLink* skipped = nullptr;
  for (const NeighborLink& link : instance.links(agent)) {
    if (link.neighbor == skip) {
      skipped = &link;
      continue;
    }
    const Value other = assignment[link.neighbor];
    if (other == kUnbound) throw MissingBindingError(link.neighbor, context);
    const Cost* row = instance.costs_against(link, other).data();
    for (int d = 0; d < size; ++d) out[d] += row[d];
  }
  return skipped;
}

}  // namespace kernel

// Adds link_cost(link, d, x_neighbor) over every link of `agent` except the
// one to `skip` into out[d]; returns the skipped link, if any. Small domains
// get a compile-time trip count.
inline const NeighborLink* accumulate_link_costs(const DcopInstance& instance, AgentId agent,
                                                 const Assignment& assignment, AgentId skip,
                                                 std::span<Cost> out, const char* context) {
  const int domain = static_cast<int>(out.size());
  auto run = [&]<int D>() {
    return kernel::accumulate<D>(instance, agent, assignment, skip, out.data(), domain, context);
  };
  switch (domain) {
    case 2: return run.template operator()<2>();
    case 3: return run.template operator()<3>();
    case 4: return run.template operator()<4>();
    case 5: return run.template operator()<5>();
    case 10: return run.template operator()<10>();
    default: return run.template operator()<0>();
  }
}

}  // namespace aed::detail
