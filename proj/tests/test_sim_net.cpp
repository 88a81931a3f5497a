#include <sstream>

#include "aed/sim_net.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace aed;

TEST_CASE("posting rules") {
  const DcopInstance inst = testing::figure1();
  MessageBus bus(inst);
  bus.begin_iteration(1);
  CHECK_THROWS_AS(bus.post({0, 1, 1, Slot::kMigration, 0, Value{0}}), IllegalMessageError);
  bus.open(Slot::kMigration);
  CHECK_THROWS_AS(bus.post({0, 3, 1, Slot::kMigration, 0, Value{0}}), IllegalMessageError);
  CHECK_THROWS_AS(bus.post({0, 1, 2, Slot::kMigration, 0, Value{0}}), IllegalMessageError);
  CHECK_THROWS_AS(bus.post({0, 1, 1, Slot::kFound, 0, Value{0}}), IllegalMessageError);
  CHECK_THROWS_AS(bus.open(Slot::kFound), IllegalMessageError);
  bus.post({0, 1, 1, Slot::kMigration, 0, Value{0}});
  bus.deliver();
  CHECK_THROWS_AS(bus.deliver(), IllegalMessageError);
}

TEST_CASE("a message posted in iteration t is readable in iteration t") {
  const DcopInstance inst = testing::figure1();
  MessageBus bus(inst);
  bus.begin_iteration(4);
  bus.open({Slot::kFound, Slot::kUpdate});
  bus.post({0, 1, 4, Slot::kFound, 0, Individual::empty(4)});
  bus.post({3, 1, 4, Slot::kUpdate, 0, UpdateMessage{4, Individual::empty(4)}});
  CHECK(bus.take(1, Slot::kFound).empty());  // nothing before the barrier
  bus.deliver();
  const auto found = bus.take(1, Slot::kFound);
  REQUIRE(found.size() == 1);
  CHECK(found[0].iteration == 4);
  const auto update = bus.take(1, Slot::kUpdate);
  REQUIRE(update.size() == 1);
  CHECK(std::get<UpdateMessage>(update[0].payload).version == 4);
  CHECK_FALSE(bus.has_undelivered());
}

TEST_CASE("delivery order, stats and log") {
  const DcopInstance inst = testing::figure1();
  MessageBus bus(inst);
  std::ostringstream log;
  bus.set_log(&log);
  bus.begin_iteration(1);
  bus.open(Slot::kValueExchange);
  bus.post({3, 1, 1, Slot::kValueExchange, 0, Value{7}});
  bus.post({2, 1, 1, Slot::kValueExchange, 0, Value{5}});
  bus.post({2, 1, 1, Slot::kValueExchange, 0, Value{6}});
  bus.post({0, 1, 1, Slot::kValueExchange, 0, Value{4}});
  CHECK(bus.stats().total_sent() == 4);
  CHECK(bus.stats().sent[2] == 2);
  CHECK(bus.stats().total_bytes() == 4 * static_cast<std::int64_t>(sizeof(Value)));
  bus.deliver();
  std::vector<Value> got;
  for (const Envelope& e : bus.take(1, Slot::kValueExchange)) got.push_back(std::get<Value>(e.payload));
  CHECK(got == std::vector<Value>{4, 5, 6, 7});
  CHECK(log.str() ==
        "1 value-exchange 0 1 4\n1 value-exchange 2 1 4\n1 value-exchange 2 1 4\n"
        "1 value-exchange 3 1 4\n");
  bus.begin_iteration(2);
  CHECK(bus.stats().total_sent() == 0);
}

TEST_CASE("payload sizes") {
  const Individual i = Individual::empty(4);
  CHECK(payload_bytes(i) == 4 * sizeof(Value) + sizeof(Cost));
  CHECK(payload_bytes(Population{i, i}) == 2 * payload_bytes(i));
  CHECK(payload_bytes(UpdateMessage{1, i}) == sizeof(int) + payload_bytes(i));
}

TEST_CASE("parallel agent loop visits every agent once") {
  std::vector<int> hits(100, 0);
  for_each_agent(100, true, [&hits](AgentId i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(for_each_agent(10, true, [](AgentId i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

namespace {

class Countdown final : public SynchronousAlgorithm {
 public:
  explicit Countdown(int fail_at = -1) : fail_at_(fail_at) {}
  void iterate() override {
    if (iteration_ + 1 == fail_at_) throw std::runtime_error("broken");
    ++iteration_;
  }
  int iteration() const override { return iteration_; }
  Cost anytime_cost() const override { return 100 - iteration_; }
  std::int64_t messages_last_iteration() const override { return iteration_ * 2; }

 private:
  int iteration_ = 0;
  int fail_at_;
};

}  // namespace

TEST_CASE("run_synchronous") {
  Countdown algo;
  CHECK_THROWS_AS(run_synchronous(algo, {}), std::invalid_argument);
  int seen = 0;
  const RunTrace trace =
      run_synchronous(algo, {5, std::nullopt}, [&seen](const auto&, const TraceRecord&) { ++seen; });
  CHECK(trace.records.size() == 6);
  CHECK(seen == 6);
  CHECK(trace.records[0].iteration == 0);
  CHECK(trace.records[0].elapsed_ms == 0.0);
  CHECK(trace.records[5].cost == 95);
  CHECK(trace.records[5].messages == 10);
  CHECK(trace.best_cost == 95);
  CHECK(trace.iterations == 5);

  Countdown timed;
  const RunTrace t = run_synchronous(timed, {std::nullopt, 5.0});
  CHECK(t.wall_ms >= 5.0);
  CHECK(t.iterations > 0);

  Countdown broken(3);
  try {
    run_synchronous(broken, {10, std::nullopt});
    FAIL("expected an abort");
  } catch (const RunAbortedError& e) {
    CHECK(e.iteration() == 3);
  }
}
