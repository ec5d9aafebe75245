#include <doctest.h>

#include <regex>

#include "fixtures.hpp"
#include "jobshop/bench.hpp"
#include "jobshop/gantt.hpp"

using namespace jobshop;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("gantt chart of the optimal furniture schedule") {
    const auto s = from_job_sequences(fixtures::furniture(), {{2, 0, 1}, {0, 1, 2}, {2, 0, 1}});
    const auto svg = render_gantt_svg(s);
    CHECK(svg.starts_with("<svg"));
    CHECK(count(svg, "data-operation=") == 9);
    CHECK(svg.find("data-makespan=\"10\"") != std::string::npos);
    std::regex end_attr(R"(data-end="(\d+)\")");
    int largest = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), end_attr); it != std::sregex_iterator(); ++it)
        largest = std::max(largest, std::stoi((*it)[1]));
    CHECK(largest == 10);
    CHECK(render_gantt_svg(s) == svg);
}

TEST_CASE("benchmark suites") {
    CHECK(benchmark_suite("all").size() == 162);
    CHECK(benchmark_suite("taillard").size() == 80);
    CHECK(benchmark_suite("ft").size() == 3);
    CHECK(benchmark_suite("ft06,la05") == std::vector<std::string>{"ft06", "la05"});
    CHECK_THROWS_AS(benchmark_suite("zz"), UnknownInstanceError);
}

TEST_CASE("bench rows, gaps and CSV") {
    BenchOptions options;
    options.instances = {"ft06", "la05"};
    options.rules = {"spt", "mor", "random"};
    options.filters = {"none", "nio"};
    options.random_seeds = 2;
    options.threads = 2;
    const auto rows = run_bench(options);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].instance == "ft06");
    CHECK(rows[0].rule == "spt");
    CHECK(rows[0].filter == "none");
    CHECK(rows[1].filter == "nio");
    CHECK(*rows[1].makespan == 88);
    CHECK(*rows[1].gap == doctest::Approx(33.0 / 55.0));
    const auto csv = bench_csv(rows, false);
    CHECK(csv.starts_with("instance,rule,filter,makespan,optimum,gap,seconds\n"));
    CHECK(csv == bench_csv(run_bench(options), false));
    CHECK(count(csv, "\n") == 13);

    const auto summary = gap_summary(rows);
    CHECK_FALSE(summary.empty());
    const auto improvements = filter_improvements(rows);
    REQUIRE(improvements.size() == 1);
    CHECK(improvements[0].filter == "nio");
    CHECK(improvements[0].cells == 6);
}

TEST_CASE("bench validates names before running") {
    BenchOptions options;
    options.instances = {"ft06"};
    options.rules = {"spt", "bogus"};
    CHECK_THROWS_AS(run_bench(options), ConfigError);
    options.rules = {"spt"};
    options.filters = {"nio+bogus"};
    CHECK_THROWS_AS(run_bench(options), ConfigError);
    options.filters = {"nio"};
    options.instances = {"nope"};
    CHECK_THROWS_AS(run_bench(options), UnknownInstanceError);
}
