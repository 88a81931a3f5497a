#include "aed/sim_net.hpp"

#include <tbb/parallel_for.h>

#include <algorithm>
#include <numeric>
#include <ostream>

namespace aed {

std::string_view slot_name(Slot slot) {
  switch (slot) {
    case Slot::kInitNeighborExchange: return "init-neighbor-exchange";
    case Slot::kInitUpTree: return "init-up-tree";
    case Slot::kInitDownTree: return "init-down-tree";
    case Slot::kReproductionRequest: return "reproduction-request";
    case Slot::kReproductionReply: return "reproduction-reply";
    case Slot::kFound: return "found";
    case Slot::kUpdate: return "update";
    case Slot::kMigration: return "migration";
    case Slot::kValueExchange: return "value-exchange";
  }
  return "unknown";
}

namespace {

std::size_t individual_bytes(const Individual& individual) {
  return static_cast<std::size_t>(individual.assignment.size()) * sizeof(Value) + sizeof(Cost);
}

}  // namespace

std::size_t payload_bytes(const Payload& payload) {
  struct Sizer {
    std::size_t operator()(const Population& p) const {
      std::size_t total = 0;
      for (const auto& individual : p) total += individual_bytes(individual);
      return total;
    }
    std::size_t operator()(const Individual& i) const { return individual_bytes(i); }
    std::size_t operator()(const UpdateMessage& m) const {
      return sizeof(int) + individual_bytes(m.individual);
    }
    std::size_t operator()(const Value&) const { return sizeof(Value); }
  };
  return std::visit(Sizer{}, payload);
}

std::int64_t MessageStats::total_sent() const {
  return std::accumulate(sent.begin(), sent.end(), std::int64_t{0});
}

std::int64_t MessageStats::total_bytes() const {
  return std::accumulate(bytes.begin(), bytes.end(), std::int64_t{0});
}

MessageBus::MessageBus(const DcopInstance& instance)
    : instance_(&instance),
      outbox_(instance.agent_count()),
      inbox_(instance.agent_count()),
      next_sequence_(instance.agent_count(), 0) {
  stats_.sent.assign(instance.agent_count(), 0);
  stats_.bytes.assign(instance.agent_count(), 0);
}

void MessageBus::begin_iteration(int iteration) {
  iteration_ = iteration;
  std::fill(stats_.sent.begin(), stats_.sent.end(), 0);
  std::fill(stats_.bytes.begin(), stats_.bytes.end(), 0);
}

void MessageBus::open(std::initializer_list<Slot> slots) {
  if (!open_slots_.empty()) {
    throw IllegalMessageError("slot " + std::string(slot_name(open_slots_.front())) +
                              " is still open");
  }
  open_slots_.assign(slots.begin(), slots.end());
}

void MessageBus::post(Envelope envelope) {
  if (std::find(open_slots_.begin(), open_slots_.end(), envelope.slot) == open_slots_.end()) {
    throw IllegalMessageError("post to slot " + std::string(slot_name(envelope.slot)) +
                              " outside its send-slot");
  }
  if (envelope.iteration != iteration_) {
    throw IllegalMessageError("envelope stamped for iteration " +
                              std::to_string(envelope.iteration) + " during iteration " +
                              std::to_string(iteration_));
  }
  const AgentId src = envelope.src;
  if (src < 0 || src >= instance_->agent_count() ||
      !instance_->are_neighbors(src, envelope.dst)) {
    throw IllegalMessageError("agent " + std::to_string(src) + " may not message agent " +
                              std::to_string(envelope.dst));
  }
  envelope.sequence = next_sequence_[src]++;
  stats_.sent[src] += 1;
  stats_.bytes[src] += static_cast<std::int64_t>(payload_bytes(envelope.payload));
  outbox_[src].push_back(std::move(envelope));
}

void MessageBus::deliver() {
  if (open_slots_.empty()) throw IllegalMessageError("deliver() without an open slot");
  // Walking sources in ascending order keeps every inbox sorted by (src, seq).
  for (auto& outbox : outbox_) {
    for (auto& envelope : outbox) {
      if (log_ != nullptr) {
        *log_ << envelope.iteration << ' ' << slot_name(envelope.slot) << ' ' << envelope.src
              << ' ' << envelope.dst << ' ' << payload_bytes(envelope.payload) << '\n';
      }
      inbox_[envelope.dst].push_back(std::move(envelope));
    }
    outbox.clear();
  }
  open_slots_.clear();
}

std::vector<Envelope> MessageBus::take(AgentId dst, Slot slot) {
  auto& inbox = inbox_[dst];
  std::vector<Envelope> taken;
  auto keep = std::stable_partition(inbox.begin(), inbox.end(),
                                    [slot](const Envelope& e) { return e.slot != slot; });
  taken.reserve(static_cast<std::size_t>(inbox.end() - keep));
  std::move(keep, inbox.end(), std::back_inserter(taken));
  inbox.erase(keep, inbox.end());
  return taken;
}

bool MessageBus::has_undelivered() const {
  auto nonempty = [](const auto& box) { return !box.empty(); };
  return std::any_of(outbox_.begin(), outbox_.end(), nonempty) ||
         std::any_of(inbox_.begin(), inbox_.end(), nonempty);
}

void for_each_agent(int agent_count, bool parallel, const std::function<void(AgentId)>& fn) {
  if (!parallel) {
    for (AgentId i = 0; i < agent_count; ++i) fn(i);
    return;
  }
  tbb::parallel_for(0, agent_count, [&fn](int i) { fn(static_cast<AgentId>(i)); });
}

RunAbortedError::RunAbortedError(int iteration, const std::string& what)
    : std::runtime_error("run aborted at iteration " + std::to_string(iteration) + ": " + what),
      iteration_(iteration) {}

RunTrace run_synchronous(SynchronousAlgorithm& algorithm, const StopCondition& stop,
                         const IterationObserver& observer) {
  if (!stop.max_iterations && !stop.max_time_ms) {
    throw std::invalid_argument("stop condition needs max_iterations or max_time_ms");
  }
  if (stop.max_iterations && *stop.max_iterations < 0) {
    throw std::invalid_argument("max_iterations must be non-negative");
  }

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_ms = [&start] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  RunTrace trace;
  auto record = [&](double elapsed) {
    TraceRecord r{algorithm.iteration(), algorithm.anytime_cost(), elapsed,
                  algorithm.messages_last_iteration()};
    trace.records.push_back(r);
    trace.best_cost = std::min(trace.best_cost, r.cost);
    if (observer) observer(algorithm, r);
  };

  record(0.0);
  while (true) {
    if (stop.max_iterations && algorithm.iteration() >= *stop.max_iterations) break;
    if (stop.max_time_ms && elapsed_ms() >= *stop.max_time_ms) break;
    try {
      algorithm.iterate();
    } catch (const std::exception& e) {
      throw RunAbortedError(algorithm.iteration() + 1, e.what());
    }
    record(elapsed_ms());
  }
  trace.iterations = algorithm.iteration();
  trace.wall_ms = elapsed_ms();
  return trace;
}

}  // namespace aed
