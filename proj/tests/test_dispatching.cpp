#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "jobshop/rules.hpp"

using namespace jobshop;
using fixtures::furniture;
using fixtures::two_job;

namespace {

std::vector<int> ids(const std::vector<Operation>& ops) {
    std::vector<int> out;
    for (const auto& op : ops) out.push_back(op.operation_id);
    return out;
}

std::shared_ptr<const Instance> make(std::vector<std::vector<Time>> d, std::vector<std::vector<int>> m) {
    return std::make_shared<const Instance>("t", d, m);
}

struct Recorder : DispatcherObserver {
    std::vector<std::string>* log;
    std::string tag;
    const Dispatcher* dispatcher = nullptr;
    Recorder(std::vector<std::string>& l, std::string t) : log(&l), tag(std::move(t)) {}
    void update(const ScheduledOperation& s) override {
        // The schedule already contains the operation when observers run.
        CHECK(dispatcher->is_dispatched(s.operation));
        log->push_back(tag + std::to_string(s.operation.operation_id));
    }
    void reset() override { log->push_back(tag + "reset"); }
};

}  // namespace

TEST_CASE("dispatch starts at the later of job and machine frontiers") {
    Dispatcher d(furniture());
    const auto a = d.dispatch(d.instance().operation(2, 0));
    CHECK(a.start_time == 0);
    CHECK(a.machine_id == 0);
    const auto b = d.dispatch(d.instance().operation(0, 0));
    CHECK(b.start_time == 2);
    CHECK(d.num_dispatched() == 2);
}

TEST_CASE("dispatch errors") {
    Dispatcher d(furniture());
    CHECK_THROWS_AS(d.dispatch(d.instance().operation(0, 1)), NotReadyError);
    for (const auto& op : d.instance().operations()) d.dispatch(op);
    CHECK(d.is_complete());
    CHECK_THROWS_AS(d.dispatch(d.instance().operation(0, 0)), CompleteError);
}

TEST_CASE("raw ready operations are the next operation of each job") {
    Dispatcher d(furniture());
    CHECK(ids(d.raw_ready_operations()) == std::vector<int>{0, 3, 6});
    for (int k = 0; k < 3; ++k) d.dispatch(d.instance().operation(1, k));
    CHECK(ids(d.raw_ready_operations()) == std::vector<int>{0, 6});

    Dispatcher t(two_job());
    t.dispatch(t.instance().operation(1, 0));
    t.dispatch(t.instance().operation(0, 0));
    CHECK(ids(t.raw_ready_operations()) == std::vector<int>{1, 4});
}

TEST_CASE("earliest start and current time") {
    Dispatcher d(two_job());
    CHECK(d.current_time() == 0);
    d.dispatch(d.instance().operation(1, 0));
    d.dispatch(d.instance().operation(1, 1));
    d.dispatch(d.instance().operation(0, 0));
    CHECK(d.earliest_start(d.instance().operation(0, 1)) == 7);
    while (!d.is_complete()) d.dispatch(d.raw_ready_operations().front());
    CHECK(d.current_time() == d.schedule().makespan());
}

TEST_CASE("two-job state: dominance and immediacy") {
    Dispatcher d(two_job());
    d.dispatch(d.instance().operation(1, 0));
    d.dispatch(d.instance().operation(0, 0));
    const auto ready = d.raw_ready_operations();
    CHECK(d.earliest_start(ready[0]) == 3);
    CHECK(d.earliest_start(ready[1]) == 2);
    CHECK(ids(filter_dominated_operations(d, ready)) == std::vector<int>{1, 4});
    CHECK(ids(filter_non_immediate_operations(d, ready)) == std::vector<int>{4});
}

TEST_CASE("dominated operation is dropped") {
    // A: est 0, duration 2 on machine 0. B: est 5 on machine 0.
    Dispatcher d(make({{2}, {5, 1}}, {{0}, {1, 0}}));
    d.dispatch(d.instance().operation(1, 0));
    const auto ready = d.raw_ready_operations();
    CHECK(ids(filter_dominated_operations(d, ready)) == std::vector<int>{0});
    CHECK(ids(filter_non_immediate_operations(d, ready)) == std::vector<int>{0});
}

TEST_CASE("filters are identity on distinct machines and single operations") {
    Dispatcher d(make({{1}, {2}, {3}}, {{0}, {1}, {2}}));
    const auto ready = d.raw_ready_operations();
    CHECK(filter_dominated_operations(d, ready) == ready);
    CHECK(filter_non_immediate_machines(d, ready) == ready);
    const std::vector<Operation> one{ready[1]};
    CHECK(filter_non_immediate_operations(d, one) == one);
}

TEST_CASE("non-immediate operations keeps every minimum") {
    Dispatcher d(make({{4}, {1}, {1}}, {{0}, {1}, {0}}));
    d.dispatch(d.instance().operation(0, 0));
    auto ready = d.raw_ready_operations();
    CHECK(ids(ready) == std::vector<int>{1, 2});
    Dispatcher e(make({{1}, {1}, {1, 1}}, {{0}, {1}, {2, 0}}));
    CHECK(ids(filter_non_immediate_operations(e, e.raw_ready_operations())) == std::vector<int>{0, 1, 2});
    e.dispatch(e.instance().operation(0, 0));
    // Ests: job 1 at 0, job 2 at 0.
    CHECK(ids(filter_non_immediate_operations(e, e.raw_ready_operations())) == std::vector<int>{1, 2});
}

TEST_CASE("busy machines are dropped by non-idle and non-immediate machine filters") {
    Dispatcher d(make({{5}, {3}, {1}}, {{0}, {1}, {0}}));
    d.dispatch(d.instance().operation(0, 0));
    const auto ready = d.raw_ready_operations();
    CHECK(ids(ready) == std::vector<int>{1, 2});
    CHECK(ids(filter_non_idle_machines(d, ready)) == std::vector<int>{1});
    CHECK(ids(filter_non_immediate_machines(d, ready)) == std::vector<int>{1});
}

TEST_CASE("non-immediate machines is identity on a fresh instance") {
    Dispatcher d(furniture());
    const auto ready = d.raw_ready_operations();
    CHECK(filter_non_immediate_machines(d, ready) == ready);
    CHECK(filter_non_idle_machines(d, ready) == ready);
}

TEST_CASE("filter names") {
    CHECK(filter_label(std::vector<std::string>{"do", "nim"}) == "do+nim");
    CHECK_THROWS_AS(make_filter(std::string("bogus")), ConfigError);
    CHECK_THROWS_AS(make_filter(std::vector<std::string>{"none", "do"}), ConfigError);
    CHECK_NOTHROW(make_filter(std::string("do+nidm")));
}

TEST_CASE("composition applies filters in order") {
    Dispatcher d(two_job());
    d.dispatch(d.instance().operation(1, 0));
    d.dispatch(d.instance().operation(0, 0));
    const auto composed = compose_filters({filter_dominated_operations, filter_non_immediate_operations});
    CHECK(ids(composed(d, d.raw_ready_operations())) == std::vector<int>{4});
}

TEST_CASE("time is monotone and NIO is within DO under every filter") {
    const std::vector<std::string> names{"none", "do", "nio", "nim", "nidm", "do+nim", "do+nidm"};
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto inst = fixtures::random_instance(6, 5, seed);
        for (const auto& name : names) {
            Dispatcher d(inst, make_filter(name));
            const auto rule = make_rule("random", seed);
            Time previous = 0;
            while (!d.is_complete()) {
                const auto raw = d.raw_ready_operations();
                const auto dominated = filter_dominated_operations(d, raw);
                const auto immediate = filter_non_immediate_operations(d, raw);
                for (const auto& op : immediate)
                    CHECK(std::find(dominated.begin(), dominated.end(), op) != dominated.end());
                CHECK(d.current_time() >= previous);
                previous = d.current_time();
                d.dispatch(rule(d));
            }
            const auto report = verify_schedule(*inst, d.schedule());
            CHECK(report.valid);
            CHECK(report.complete);
            CHECK(report.semi_active);
            if (name == "nio") CHECK(report.non_delay);
        }
    }
}

TEST_CASE("observers are notified in subscription order after the mutation") {
    Dispatcher d(furniture());
    std::vector<std::string> log;
    Recorder a(log, "a"), b(log, "b");
    a.dispatcher = b.dispatcher = &d;
    d.subscribe(a);
    d.subscribe(b);
    d.dispatch(d.instance().operation(2, 0));
    d.reset();
    CHECK(log == std::vector<std::string>{"a6", "b6", "areset", "breset"});
    CHECK(d.num_dispatched() == 0);
    d.unsubscribe(a);
    d.dispatch(d.instance().operation(0, 0));
    CHECK(log.back() == "b0");
}

TEST_CASE("completion and ongoing status follow the current time") {
    Dispatcher d(fixtures::two_job());
    const auto& first = d.instance().operation(1, 0);
    d.dispatch(first);
    CHECK(d.current_time() == 0);
    CHECK(d.is_ongoing(first));
    CHECK_FALSE(d.is_completed(first));
    d.dispatch(d.instance().operation(0, 0));
    // Ready: job 0 on machine 1 at 3, job 1 on machine 1 at 2.
    CHECK(d.current_time() == 2);
    CHECK(d.is_completed(first));
    CHECK_FALSE(d.is_ongoing(first));
    CHECK(d.is_ongoing(d.instance().operation(0, 0)));
    CHECK(d.start_time(first.operation_id) == 0);
    CHECK_FALSE(d.start_time(1).has_value());
}
