#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "jobshop/formats.hpp"
#include "jobshop/rules.hpp"

using namespace jobshop;

namespace {

Time run(std::shared_ptr<const Instance> inst, const std::string& rule, const std::string& filter) {
    return RuleSolver(make_rule(rule), make_filter(filter)).solve(std::move(inst)).makespan();
}

std::shared_ptr<const Instance> bench(const std::string& name) {
    return std::make_shared<const Instance>(load_benchmark(name));
}

}  // namespace

TEST_CASE("known rule makespans under NIO") {
    const auto ft06 = bench("ft06");
    CHECK(run(ft06, "spt", "nio") == 88);
    CHECK(run(ft06, "fcfs", "nio") == 59);
    CHECK(run(ft06, "mwkr", "nio") == 61);
    CHECK(run(ft06, "mor", "nio") == 59);
    const auto la05 = bench("la05");
    for (const auto* r : {"fcfs", "mwkr", "mor"}) CHECK(run(la05, r, "nio") == 593);
    CHECK(run(bench("ft20"), "mwkr", "nio") == 1501);
}

TEST_CASE("every rule returns the only available operation") {
    auto inst = std::make_shared<const Instance>("one", std::vector<std::vector<Time>>{{3, 1}}, std::vector<std::vector<int>>{{0, 1}});
    Dispatcher d(inst);
    for (const auto& name : rule_names()) CHECK(make_rule(name, 1)(d).operation_id == 0);
}

TEST_CASE("rules on an empty action set") {
    auto inst = fixtures::furniture();
    Dispatcher d(inst);
    for (const auto& op : inst->operations()) d.dispatch(op);
    CHECK_THROWS_AS(spt(d), EmptyActionSetError);
    CHECK_THROWS_AS(make_rule("mor")(d), EmptyActionSetError);
}

TEST_CASE("furniture and two-job rule outcomes") {
    CHECK(run(fixtures::furniture(), "spt", "nio") == 13);
    CHECK(run(fixtures::two_job(), "spt", "nio") == 11);
    CHECK(run(fixtures::two_job(), "spt", "do") == 9);
    CHECK(fixtures::brute_force_optimum(fixtures::two_job()) == 9);
}

TEST_CASE("score-based rules") {
    const auto inst = fixtures::furniture();
    Dispatcher d(inst);
    d.dispatch(inst->operation(2, 0));
    const auto constant = score_based_rule([](const Dispatcher& x) { return std::vector<double>(static_cast<std::size_t>(x.instance().num_jobs()), 1.0); });
    CHECK(constant(d).operation_id == d.available_operations().front().operation_id);

    const auto mor_like = score_based_rule(most_operations_remaining_score);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = fixtures::random_instance(10, 10, seed);
        const Schedule a = RuleSolver(make_rule("mwkr"), make_filter(std::string("nio"))).solve(r);
        const Schedule b = RuleSolver(score_based_rule(most_work_remaining_score), make_filter(std::string("nio"))).solve(r);
        CHECK(a.machine_sequences() == b.machine_sequences());
        const Schedule c = RuleSolver(make_rule("mor"), make_filter(std::string("do"))).solve(r);
        const Schedule e = RuleSolver(mor_like, make_filter(std::string("do"))).solve(r);
        CHECK(c.machine_sequences() == e.machine_sequences());
    }
}

TEST_CASE("FCFS equals MOR on instances with equal job lengths") {
    for (const auto& name : list_benchmarks()) {
        const auto inst = bench(name);
        const Schedule a = RuleSolver(make_rule("fcfs"), make_filter(std::string("nio"))).solve(inst);
        const Schedule b = RuleSolver(make_rule("mor"), make_filter(std::string("nio"))).solve(inst);
        CHECK_MESSAGE(a.machine_sequences() == b.machine_sequences(), name);
    }
}

TEST_CASE("random rule is reproducible and bounded") {
    const auto inst = bench("ft06");
    Time total = 0;
    for (const auto& op : inst->operations()) total += op.duration;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Time a = RuleSolver(make_rule("random", seed), make_filter(std::string("nio"))).solve(inst).makespan();
        const Time b = RuleSolver(make_rule("random", seed), make_filter(std::string("nio"))).solve(inst).makespan();
        CHECK(a == b);
        CHECK(a >= 55);
        CHECK(a <= total);
    }
}

TEST_CASE("solve records metadata") {
    const std::vector<std::string> filters{"do", "nim"};
    const Schedule s = solve(fixtures::furniture(), "mwkr", filters, 4);
    CHECK(std::get<std::string>(s.metadata().at("rule")) == "mwkr");
    CHECK(std::get<std::string>(s.metadata().at("filter")) == "do+nim");
    CHECK(std::get<std::int64_t>(s.metadata().at("seed")) == 4);
    CHECK(s.metadata().contains("seconds"));
    CHECK(s.is_complete());
    CHECK_THROWS_AS(make_rule("lifo"), ConfigError);
}

TEST_CASE("rule makespans are never below the known optimum") {
    for (const auto& name : list_benchmarks()) {
        const auto inst = bench(name);
        if (inst->num_operations() > 400) continue;
        const auto opt = inst->optimum();
        if (!opt) continue;
        for (const auto& rule : {"spt", "fcfs", "mwkr", "mor"}) CHECK(run(inst, rule, "do") >= *opt);
    }
}
