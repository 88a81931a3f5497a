// Synchronous, barrier-separated message substrate.
//
// An iteration is a sequence of send-slots. During a slot, agents post
// envelopes; deliver() is the barrier that moves every posted envelope to its
// recipient's inbox, ordered by (src, sequence). Agents only touch their own
// outbox while posting, so posting is safe from parallel workers as long as
// each worker owns distinct source agents.

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aed/problem.hpp"

namespace aed {

enum class Slot {
  kInitNeighborExchange,
  kInitUpTree,
  kInitDownTree,
  kReproductionRequest,
  kReproductionReply,
  kFound,
  kUpdate,
  kMigration,
  kValueExchange,  // DSA neighbor value broadcast
};

std::string_view slot_name(Slot slot);

struct UpdateMessage {
  int version = 0;
  Individual individual;
};

using Payload = std::variant<Population, Individual, UpdateMessage, Value>;

struct Envelope {
  AgentId src = 0;
  AgentId dst = 0;
  int iteration = 0;
  Slot slot = Slot::kInitNeighborExchange;
  std::uint64_t sequence = 0;  // assigned by the bus
  Payload payload;
};

std::size_t payload_bytes(const Payload& payload);

class IllegalMessageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Sent-envelope counters for the current iteration, reset by begin_iteration.
struct MessageStats {
  std::vector<std::int64_t> sent;
  std::vector<std::int64_t> bytes;

  std::int64_t total_sent() const;
  std::int64_t total_bytes() const;
};

class MessageBus {
 public:
  explicit MessageBus(const DcopInstance& instance);

  void begin_iteration(int iteration);
  int iteration() const { return iteration_; }

  // Opens send-slots. Posting outside an open slot, or with a mismatched
  // slot/iteration, or to a non-neighbor, throws IllegalMessageError.
  void open(Slot slot) { open({slot}); }
  void open(std::initializer_list<Slot> slots);
  void post(Envelope envelope);
  // Barrier: closes the slot and hands posted envelopes to their recipients.
  void deliver();

  // Removes and returns dst's delivered envelopes for `slot` in (src, seq) order.
  std::vector<Envelope> take(AgentId dst, Slot slot);
  bool has_undelivered() const;

  const MessageStats& stats() const { return stats_; }

  // One line per delivered envelope: "iter slot src dst payload_size".
  void set_log(std::ostream* log) { log_ = log; }

 private:
  const DcopInstance* instance_;
  int iteration_ = 0;
  std::vector<Slot> open_slots_;
  std::vector<std::vector<Envelope>> outbox_;
  std::vector<std::vector<Envelope>> inbox_;
  std::vector<std::uint64_t> next_sequence_;
  MessageStats stats_;
  std::ostream* log_ = nullptr;
};

// Runs fn(agent) for every agent, optionally on a worker pool. The first
// exception thrown by any agent propagates.
void for_each_agent(int agent_count, bool parallel, const std::function<void(AgentId)>& fn);

struct TraceRecord {
  int iteration = 0;
  Cost cost = 0;
  double elapsed_ms = 0.0;
  std::int64_t messages = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct RunTrace {
  std::vector<TraceRecord> records;  // records[0] is the post-initialization state
  Cost best_cost = kInfiniteCost;
  int iterations = 0;
  double wall_ms = 0.0;
};

struct StopCondition {
  std::optional<int> max_iterations;
  std::optional<double> max_time_ms;
};

// A synchronous multi-agent algorithm driven one iteration at a time.
class SynchronousAlgorithm {
 public:
  virtual ~SynchronousAlgorithm() = default;
  virtual void iterate() = 0;
  virtual int iteration() const = 0;
  virtual Cost anytime_cost() const = 0;
  virtual std::int64_t messages_last_iteration() const = 0;
};

class RunAbortedError : public std::runtime_error {
 public:
  RunAbortedError(int iteration, const std::string& what);
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

using IterationObserver = std::function<void(const SynchronousAlgorithm&, const TraceRecord&)>;

// Iterates until the stop condition holds; at least one of its limits must be
// set. Time is measured with a monotonic clock around whole iterations.
RunTrace run_synchronous(SynchronousAlgorithm& algorithm, const StopCondition& stop,
                         const IterationObserver& observer = {});

}  // namespace aed
