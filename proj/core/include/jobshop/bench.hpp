#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jobshop/core.hpp"

namespace jobshop {

struct BenchOptions {
    std::vector<std::string> instances;
    std::vector<std::string> rules = {"spt", "fcfs", "mwkr", "mor"};
    // Filter labels such as "none", "nio" or "do+nim".
    std::vector<std::string> filters = {"nio"};
    // The random rule is run with seeds 0..random_seeds-1 and averaged.
    std::size_t random_seeds = 5;
    // 0 uses the hardware concurrency.
    std::size_t threads = 0;
};

struct BenchRow {
    std::string instance;
    int num_jobs = 0;
    int num_machines = 0;
    std::string rule;
    std::string filter;
    std::optional<double> makespan;
    // Optimum when known, otherwise the best known upper bound.
    std::optional<Time> reference;
    std::optional<double> gap;
    double seconds = 0.0;
    std::string error;
};

// "all", "taillard" (ta*), a name prefix such as "la", or a comma list of
// benchmark names. Throws UnknownInstanceError when nothing matches.
std::vector<std::string> benchmark_suite(const std::string& suite);

// One row per (instance, rule, filter) in that nesting order. Cells run in
// parallel; a failing cell records its error and the run continues.
std::vector<BenchRow> run_bench(const BenchOptions& options);

// Columns instance,rule,filter,makespan,optimum,gap,seconds. Seconds are
// left empty unless with_timing is set, so output is reproducible.
std::string bench_csv(const std::vector<BenchRow>& rows, bool with_timing);

struct GapSummary {
    std::string size;
    std::string rule;
    std::string filter;
    double mean_gap = 0.0;
    std::size_t count = 0;
};

// Mean gap per (JxM size, rule, filter), sizes in order of first appearance.
std::vector<GapSummary> gap_summary(const std::vector<BenchRow>& rows);

struct FilterImprovement {
    std::string filter;
    // Mean of (C_none - C_filter) / C_none over (instance, rule) cells, in percent.
    double mean_of_cells = 0.0;
    // Per rule (sum C_none - sum C_filter) / sum C_none, averaged over rules.
    double mean_of_rules = 0.0;
    std::size_t cells = 0;
};

// Improvement of every non-"none" filter over the "none" rows.
std::vector<FilterImprovement> filter_improvements(const std::vector<BenchRow>& rows);

}  // namespace jobshop
