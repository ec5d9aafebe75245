#include <benchmark/benchmark.h>

#include <memory>

#include "jobshop/env.hpp"
#include "jobshop/exact.hpp"
#include "jobshop/formats.hpp"
#include "jobshop/generation.hpp"
#include "jobshop/rules.hpp"

namespace {

using namespace jobshop;

std::shared_ptr<const Instance> benchmark_instance(const char* name) {
    return std::make_shared<const Instance>(load_benchmark(name));
}

void BM_RuleSolve(benchmark::State& state, const char* instance_name, const char* rule, const char* filter) {
    const auto instance = benchmark_instance(instance_name);
    const RuleSolver solver(make_rule(rule), make_filter(std::string(filter)));
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(instance).makespan());
    state.SetItemsProcessed(state.iterations() * instance->num_operations());
}
BENCHMARK_CAPTURE(BM_RuleSolve, ft10_mwkr_nio, "ft10", "mwkr", "nio");
BENCHMARK_CAPTURE(BM_RuleSolve, ta51_spt_nio, "ta51", "spt", "nio");
BENCHMARK_CAPTURE(BM_RuleSolve, ta71_mor_do, "ta71", "mor", "do");
BENCHMARK_CAPTURE(BM_RuleSolve, ta71_mor_none, "ta71", "mor", "none");

void BM_EnvironmentEpisode(benchmark::State& state, GraphBuilderType graph) {
    const auto instance = benchmark_instance("ta01");
    Environment env(build_graph(graph, instance), EnvConfig{});
    for (auto _ : state) {
        env.reset();
        while (!env.dispatcher().is_complete()) {
            const Operation op = mwkr(env.dispatcher());
            benchmark::DoNotOptimize(env.step({op.job_id, -1}).reward);
        }
    }
    state.SetItemsProcessed(state.iterations() * instance->num_operations());
}
BENCHMARK_CAPTURE(BM_EnvironmentEpisode, disjunctive, GraphBuilderType::disjunctive);
BENCHMARK_CAPTURE(BM_EnvironmentEpisode, resource_task, GraphBuilderType::resource_task);

void BM_ExactFt06(benchmark::State& state) {
    const auto instance = benchmark_instance("ft06");
    for (auto _ : state) benchmark::DoNotOptimize(solve_exact(instance, 60.0).schedule.makespan());
}
BENCHMARK(BM_ExactFt06)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
    GeneratorConfig config;
    config.num_jobs_range = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
    config.num_machines_range = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
    InstanceGenerator generator(config);
    for (auto _ : state) benchmark::DoNotOptimize(generator.generate().num_operations());
}
BENCHMARK(BM_Generate)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
