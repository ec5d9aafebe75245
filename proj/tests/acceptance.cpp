// Acceptance checks. Without arguments every criterion runs; --only N runs
// one. Prints one PASS/FAIL line per criterion; exits 1 if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "jobshop/bench.hpp"
#include "jobshop/env.hpp"
#include "jobshop/exact.hpp"
#include "jobshop/features.hpp"
#include "jobshop/formats.hpp"
#include "jobshop/graphs.hpp"
#include "jobshop/rewards.hpp"
#include "jobshop/rules.hpp"

using namespace jobshop;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;

    void fail(std::string why) {
        pass = false;
        details.push_back(std::move(why));
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(digits);
    out << v;
    return out.str();
}

std::shared_ptr<const Instance> bench_instance(const std::string& name) {
    return std::make_shared<const Instance>(load_benchmark(name));
}

Outcome reference_makespans() {
    struct Cell {
        const char* instance;
        const char* rule;
        Time expected;
    };
    const std::vector<Cell> cells{
        {"ft06", "spt", 88},    {"ft06", "fcfs", 59},   {"ft06", "mwkr", 61},   {"ft06", "mor", 59},
        {"ft10", "spt", 1074},  {"ft10", "fcfs", 1163}, {"ft10", "mwkr", 1108}, {"ft20", "spt", 1267},
        {"ft20", "mwkr", 1501}, {"la05", "fcfs", 593},  {"la05", "mwkr", 593},  {"la05", "mor", 593},
        {"la05", "spt", 610},   {"swv16", "fcfs", 2924}, {"swv16", "mwkr", 2924}, {"swv16", "mor", 2924},
    };
    Outcome out;
    const auto start = Clock::now();
    int mismatches = 0;
    for (const auto& c : cells) {
        const auto inst = bench_instance(c.instance);
        const Schedule s = RuleSolver(make_rule(c.rule), make_filter(std::string("nio"))).solve(inst);
        const auto report = verify_schedule(*inst, s);
        out.expect(report.valid && report.complete && report.non_delay,
                   std::string(c.instance) + "/" + c.rule + " schedule is not a valid non-delay schedule");
        if (s.makespan() != c.expected) {
            ++mismatches;
            out.fail(std::string(c.instance) + "/" + c.rule + ": got " + std::to_string(s.makespan()) + ", expected " +
                     std::to_string(c.expected));
        }
    }
    const double elapsed = seconds_since(start);
    out.expect(elapsed < 5.0, "runtime " + fmt(elapsed, 2) + " s exceeds 5 s");
    out.summary = std::to_string(cells.size() - static_cast<std::size_t>(mismatches)) + "/" + std::to_string(cells.size()) +
                  " reference cells exact under NIO in " + fmt(elapsed, 3) + " s";
    return out;
}

Outcome taillard_gaps() {
    // Mean optimality gap per size group for SPT, MWKR and MOR.
    const std::map<std::string, std::array<double, 3>> targets{
        {"15x15", {0.2589, 0.1915, 0.2053}},  {"20x15", {0.3283, 0.2336, 0.2356}}, {"20x20", {0.2775, 0.2181, 0.2171}},
        {"30x15", {0.3527, 0.2391, 0.2282}},  {"30x20", {0.3441, 0.2514, 0.2491}}, {"50x15", {0.2411, 0.1686, 0.1737}},
        {"50x20", {0.2554, 0.1795, 0.1768}},  {"100x20", {0.1441, 0.0831, 0.0915}},
    };
    const std::vector<std::string> rules{"spt", "mwkr", "mor"};
    Outcome out;
    const auto start = Clock::now();
    BenchOptions options;
    options.instances = benchmark_suite("taillard");
    options.rules = rules;
    options.filters = {"nio"};
    const auto rows = run_bench(options);
    const double elapsed = seconds_since(start);
    double worst = 0.0;
    std::size_t groups = 0;
    for (const auto& g : gap_summary(rows)) {
        const auto it = targets.find(g.size);
        if (it == targets.end()) {
            out.fail("unexpected size group " + g.size);
            continue;
        }
        const auto r = static_cast<std::size_t>(std::find(rules.begin(), rules.end(), g.rule) - rules.begin());
        const double target = it->second[r];
        const double diff = std::abs(g.mean_gap - target);
        worst = std::max(worst, diff);
        ++groups;
        out.expect(g.count == 10, g.size + " has " + std::to_string(g.count) + " instances");
        out.expect(diff <= 0.01, g.size + "/" + g.rule + ": gap " + fmt(g.mean_gap) + " vs " + fmt(target));
    }
    out.expect(groups == targets.size() * rules.size(), "missing size groups");
    out.expect(elapsed < 60.0, "runtime " + fmt(elapsed, 2) + " s exceeds 60 s");
    out.summary = std::to_string(groups) + " size/rule groups, largest deviation " + fmt(worst) + " in " + fmt(elapsed, 2) + " s";
    return out;
}

Outcome filter_impact() {
    const std::map<std::string, double> targets{{"do", 37.41}, {"nim", 46.44}, {"nidm", 42.94},
                                                {"nio", 53.85}, {"do+nim", 50.56}, {"do+nidm", 50.03}};
    BenchOptions options;
    options.instances = benchmark_suite("all");
    options.rules = {"spt", "fcfs", "mwkr", "mor", "random"};
    options.filters = {"none", "do", "nim", "nidm", "nio", "do+nim", "do+nidm"};
    options.random_seeds = 5;
    const auto start = Clock::now();
    const auto improvements = filter_improvements(run_bench(options));
    const double elapsed = seconds_since(start);
    Outcome out;
    bool cells_ok = true;
    bool rules_ok = true;
    std::string table;
    for (const auto& f : improvements) {
        const double target = targets.at(f.filter);
        cells_ok = cells_ok && std::abs(f.mean_of_cells - target) <= 2.0;
        rules_ok = rules_ok && std::abs(f.mean_of_rules - target) <= 2.0;
        table += " " + f.filter + "=" + fmt(f.mean_of_cells, 2) + "/" + fmt(f.mean_of_rules, 2) + "(" + fmt(target, 2) + ")";
    }
    out.pass = (cells_ok || rules_ok) && improvements.size() == targets.size();
    if (!out.pass) out.details.push_back("no averaging convention is within 2.0 points of every target");
    out.summary = "improvement % cells/rules(target):" + table + " in " + fmt(elapsed, 1) + " s";
    return out;
}

Outcome exact_solver() {
    Outcome out;
    auto timed = [&](std::shared_ptr<const Instance> inst, Time expected, double limit, const std::string& name) {
        const auto start = Clock::now();
        const auto result = solve_exact(inst, limit);
        const double elapsed = seconds_since(start);
        out.expect(result.proven_optimal, name + " not proven optimal");
        out.expect(result.schedule.makespan() == expected,
                   name + ": got " + std::to_string(result.schedule.makespan()) + ", expected " + std::to_string(expected));
        out.expect(elapsed <= limit, name + " took " + fmt(elapsed, 2) + " s");
        return elapsed;
    };
    const double ft06 = timed(bench_instance("ft06"), 55, 60.0, "ft06");
    timed(fixtures::furniture(), 10, 1.0, "furniture");
    timed(fixtures::two_job(), 9, 1.0, "two_job");
    int agreed = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = fixtures::random_instance(3, 3, 1000 + seed, 20);
        const auto result = solve_exact(inst, 10.0);
        const Time brute = fixtures::brute_force_optimum(inst);
        if (result.proven_optimal && result.schedule.makespan() == brute) ++agreed;
        else out.fail("random 3x3 seed " + std::to_string(1000 + seed) + ": " + std::to_string(result.schedule.makespan()) +
                      " vs enumeration " + std::to_string(brute));
    }
    out.summary = "ft06 proven 55 in " + fmt(ft06, 3) + " s; furniture 10; two-job 9; " + std::to_string(agreed) +
                  "/50 random 3x3 match enumeration";
    return out;
}

Outcome incremental_oracle() {
    Outcome out;
    std::size_t checks = 0;
    for (const auto* filter : {"none", "do", "nio"}) {
        for (std::uint64_t episode = 0; episode < 100; ++episode) {
            const auto inst = fixtures::random_instance(10, 10, 5000 + episode);
            Dispatcher d(inst, make_filter(std::string(filter)));
            const auto obs = earliest_start_observer(d);
            d.subscribe(*obs);
            const auto rule = make_rule("random", episode);
            bool ok = true;
            while (!d.is_complete() && ok) {
                d.dispatch(rule(d));
                const auto oracle = fixtures::scratch_earliest_starts(d);
                for (const auto& op : inst->operations()) {
                    if (d.is_dispatched(op)) continue;
                    ++checks;
                    if (obs->earliest_start_times()[static_cast<std::size_t>(op.operation_id)] != *oracle[static_cast<std::size_t>(op.operation_id)]) {
                        out.fail(std::string(filter) + " episode " + std::to_string(episode) + " step " +
                                 std::to_string(d.num_dispatched()) + " op " + std::to_string(op.operation_id));
                        ok = false;
                        break;
                    }
                }
            }
        }
    }
    out.summary = "300 episodes (none/do/nio), " + std::to_string(checks) + " earliest-start comparisons";
    return out;
}

Outcome sampling() {
    Outcome out;
    GeneratorConfig config;
    config.seed = 3;
    InstanceGenerator gen(config);
    std::vector<Schedule> refs;
    for (int i = 0; i < 2; ++i)
        refs.push_back(RuleSolver(make_rule("mwkr"), make_filter(std::string("nio"))).solve(std::make_shared<const Instance>(gen.generate())));
    std::string summary;
    for (std::size_t n : {31u, 50u}) {
        ExportConfig ec;
        ec.sample_every = n;
        std::size_t emitted = 0;
        const auto manifest = export_dataset(refs, ec, [&](const ExportedSample& s, const DatasetRecord& r) {
            ++emitted;
            out.expect(s.num_available >= 2, "sample with fewer than two available operations");
            out.expect(s.num_positive >= 1, "sample without a positive label");
            const auto positives = static_cast<std::size_t>(std::count(r.labels.begin(), r.labels.end(), std::uint8_t{1}));
            out.expect(positives == s.num_positive, "label vector disagrees with sample metadata");
        });
        const std::vector<std::vector<std::size_t>> expected =
            n == 31 ? std::vector<std::vector<std::size_t>>{{0, 31, 62, 93}, {24, 55, 86}}
                    : std::vector<std::vector<std::size_t>>{{0, 50}, {0, 50}};
        for (std::size_t i = 0; i < 2; ++i) {
            out.expect(manifest.instances[i].num_steps == 100, "replay length is not 100");
            out.expect(manifest.instances[i].sampled_steps == expected[i], "n=" + std::to_string(n) + " instance " +
                                                                               std::to_string(i) + " sampled the wrong steps");
        }
        auto list = [](const std::vector<std::size_t>& v) {
            std::string s = "{";
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s + "}";
        };
        summary += " n=" + std::to_string(n) + ": " + list(manifest.instances[0].sampled_steps) + " " +
                   list(manifest.instances[1].sampled_steps) + " (" + std::to_string(emitted) + " emitted);";
    }
    out.summary = "sampled steps" + summary;
    return out;
}

Outcome reward_identities() {
    Outcome out;
    GeneratorConfig config;
    config.num_jobs_range = {2, 10};
    config.num_machines_range = {2, 8};
    config.seed = 77;
    InstanceGenerator gen(config);
    const std::vector<std::string> filters{"none", "do", "nio", "nim", "nidm"};
    int nio_episodes = 0;
    for (int episode = 0; episode < 200; ++episode) {
        const auto inst = std::make_shared<const Instance>(gen.generate());
        const auto& filter = filters[static_cast<std::size_t>(episode) % filters.size()];
        Dispatcher d(inst, make_filter(filter));
        MakespanReward dense(d);
        IdleTimeReward idle(d);
        ScheduledAreaReward area(d);
        d.subscribe(dense);
        d.subscribe(idle);
        d.subscribe(area);
        const auto rule = make_rule("random", static_cast<std::uint64_t>(episode));
        while (!d.is_complete()) d.dispatch(rule(d));
        auto sum = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };
        Time total = 0;
        for (const auto& op : inst->operations()) total += op.duration;
        const std::string tag = "episode " + std::to_string(episode) + " (" + filter + ")";
        out.expect(sum(dense.rewards()) == -static_cast<double>(d.schedule().makespan()), tag + ": makespan rewards");
        out.expect(sum(area.rewards()) - sum(idle.rewards()) == static_cast<double>(total), tag + ": area minus idle");
        if (filter == "nio") {
            ++nio_episodes;
            out.expect(verify_schedule(*inst, d.schedule()).non_delay, tag + ": not non-delay");
        }
    }
    out.summary = "200 episodes, " + std::to_string(nio_episodes) + " under NIO verified non-delay";
    return out;
}

Outcome round_trips() {
    Outcome out;
    std::size_t schedules = 0;
    const auto names = list_benchmarks();
    for (const auto& name : names) {
        const auto inst = bench_instance(name);
        const auto tail = parse_taillard(write_taillard(*inst), {false, name});
        out.expect(tail.duration_matrix() == inst->duration_matrix() && tail.machine_matrix() == inst->machine_matrix(),
                   name + ": Taillard round-trip");
        out.expect(parse_instance_json(write_instance_json(*inst)) == *inst, name + ": JSON round-trip");
        for (const auto* rule : {"spt", "fcfs", "mwkr", "mor", "random"}) {
            const Schedule s = RuleSolver(make_rule(rule, 1), make_filter(std::string("do"))).solve(inst);
            const Schedule rebuilt = from_job_sequences(inst, s.job_sequences());
            out.expect(rebuilt.makespan() <= s.makespan(), name + "/" + rule + ": rebuilt makespan grew");
            ++schedules;
        }
    }
    out.summary = std::to_string(names.size()) + " benchmarks round-trip; " + std::to_string(schedules) + " schedules rebuilt";
    return out;
}

Outcome graph_invariants() {
    Outcome out;
    auto count = [](const JobShopGraph& g) {
        std::map<std::string, std::size_t> c;
        for (const auto& e : g.edges()) ++c[e.type.str()];
        return c;
    };
    const auto f = fixtures::furniture();
    const auto dg = build_disjunctive_graph(f);
    out.expect(dg.num_nodes() == 9 && dg.count_edges(EdgeLabel::conjunctive) == 6 && dg.count_edges(EdgeLabel::disjunctive) == 18,
               "disjunctive graph counts");
    const auto st = build_disjunctive_graph(f, true);
    out.expect(st.num_nodes() == 11 && st.num_edges() == dg.num_edges() + 6, "source/sink counts");
    auto basic = count(build_resource_task_graph(f));
    out.expect(build_resource_task_graph(f).num_nodes() == 12 &&
                   basic["operation,to,machine"] + basic["machine,to,operation"] == 18 && basic["machine,to,machine"] == 6 &&
                   basic["operation,to,operation"] == 18,
               "resource-task counts");
    auto jobs = count(build_resource_task_graph_with_jobs(f));
    out.expect(build_resource_task_graph_with_jobs(f).num_nodes() == 15 && jobs["job,to,job"] == 6 &&
                   jobs["job,to,operation"] + jobs["operation,to,job"] == 18 && !jobs.contains("operation,to,operation"),
               "resource-task with jobs counts");
    auto complete = count(build_resource_task_graph_complete(f));
    out.expect(build_resource_task_graph_complete(f).num_nodes() == 16 &&
                   complete["global,to,machine"] + complete["machine,to,global"] + complete["global,to,job"] + complete["job,to,global"] == 12 &&
                   !complete.contains("machine,to,machine") && !complete.contains("job,to,job"),
               "complete resource-task counts");

    std::size_t steps = 0;
    for (std::uint64_t episode = 0; episode < 20; ++episode) {
        const auto inst = fixtures::random_instance(6, 5, 9000 + episode);
        const auto builder = std::array{GraphBuilderType::resource_task, GraphBuilderType::resource_task_with_jobs,
                                        GraphBuilderType::resource_task_complete}[episode % 3];
        const auto updater = episode % 2 ? UpdaterType::disjunctive : UpdaterType::residual;
        EnvConfig config;
        config.updater.type = updater;
        Environment env(build_graph(builder, inst), config);
        const JobShopGraph initial = env.graph();
        auto obs = env.reset();
        const auto rule = make_rule("random", episode);
        auto edges = [&] {
            std::set<std::pair<int, int>> s;
            for (std::size_t e = 0; e < obs.edge_src.size(); ++e) s.insert({obs.edge_src[e], obs.edge_dst[e]});
            return s;
        };
        auto previous_edges = edges();
        auto previous_removed = obs.removed_nodes;
        while (true) {
            ++steps;
            const auto remapped = remap_resource_task_observation(obs, env.graph());
            for (const auto& [type, ids] : remapped.original_ids_dict) {
                std::map<std::string, int> largest;
                for (const auto& [key, index] : remapped.edge_index_dict) {
                    for (int v : index.first)
                        if (key.src == to_string(type)) largest[key.src] = std::max(largest[key.src], v);
                    for (int v : index.second)
                        if (key.dst == to_string(type)) largest[key.dst] = std::max(largest[key.dst], v);
                }
                const auto it = largest.find(to_string(type));
                if (it != largest.end()) out.expect(it->second < static_cast<int>(ids.size()), "remapped id out of range");
                std::size_t active = 0;
                for (int id : env.graph().nodes_by_type(type)) active += env.graph().is_removed(id) ? 0 : 1;
                out.expect(ids.size() == active, "remapped ids are not contiguous");
            }
            if (env.dispatcher().is_complete()) break;
            obs = env.step({rule(env.dispatcher()).job_id}).observation;
            const auto now = edges();
            out.expect(std::includes(previous_edges.begin(), previous_edges.end(), now.begin(), now.end()), "edge set grew");
            for (std::size_t i = 0; i < previous_removed.size(); ++i)
                out.expect(!previous_removed[i] || obs.removed_nodes[i], "removed node reappeared");
            previous_edges = now;
            previous_removed = obs.removed_nodes;
        }
        env.reset();
        out.expect(env.graph() == initial, "reset did not restore the initial graph");
    }
    out.summary = "furniture builder counts; 20 episodes, " + std::to_string(steps) + " observations monotone, reset-exact, contiguous";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"reference makespans under NIO", reference_makespans},
        {"Taillard gap aggregates", taillard_gaps},
        {"filter-impact table", filter_impact},
        {"exact solver", exact_solver},
        {"incremental earliest-start oracle", incremental_oracle},
        {"sampling arithmetic", sampling},
        {"reward identities", reward_identities},
        {"round-trips", round_trips},
        {"graph invariants", graph_invariants},
    };
    std::size_t only = 0;
    if (argc == 3 && std::string(argv[1]) == "--only") only = std::stoul(argv[2]);
    else if (argc != 1) {
        std::cerr << "usage: " << argv[0] << " [--only N]\n";
        return 2;
    }
    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && only != i + 1) continue;
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.fail(std::string("exception: ") + e.what());
        }
        all_pass = all_pass && outcome.pass;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " - "
                  << outcome.summary << "\n";
        const std::size_t shown = std::min<std::size_t>(outcome.details.size(), 10);
        for (std::size_t k = 0; k < shown; ++k) std::cout << "    " << outcome.details[k] << "\n";
        if (outcome.details.size() > shown) std::cout << "    ... " << outcome.details.size() - shown << " more\n";
        std::cout.flush();
    }
    return all_pass ? 0 : 1;
}
