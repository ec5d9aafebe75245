#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "jobshop/core.hpp"
#include "jobshop/dispatching.hpp"
#include "jobshop/errors.hpp"
#include "jobshop/generation.hpp"
#include "jobshop/random.hpp"

namespace fixtures {

using namespace jobshop;

// Three jobs (table, chair, cabinet) over three machines (cut, sand, paint).
inline std::shared_ptr<const Instance> furniture() {
    return std::make_shared<const Instance>("furniture", std::vector<std::vector<Time>>{{2, 2, 2}, {1, 1, 1}, {2, 3, 3}},
                                            std::vector<std::vector<int>>{{0, 1, 2}, {0, 1, 2}, {0, 2, 1}});
}

// Job 0: M0 (3), M1 (1), M2 (3). Job 1: M2 (2), M1 (5).
inline std::shared_ptr<const Instance> two_job() {
    return std::make_shared<const Instance>("two_job", std::vector<std::vector<Time>>{{3, 1, 3}, {2, 5}},
                                            std::vector<std::vector<int>>{{0, 1, 2}, {2, 1}});
}

inline std::shared_ptr<const Instance> random_instance(int jobs, int machines, std::uint64_t seed, Time max_duration = 99) {
    GeneratorConfig config;
    config.num_jobs_range = {jobs, jobs};
    config.num_machines_range = {machines, machines};
    config.duration_range = {1, max_duration};
    Rng rng(seed);
    return std::make_shared<const Instance>(generate(config, rng, "random_" + std::to_string(seed)));
}

// Minimum makespan over every machine-sequence matrix, by enumerating all
// permutations of each machine's visits and simulating each combination.
inline Time brute_force_optimum(const std::shared_ptr<const Instance>& instance) {
    const int machines = instance->num_machines();
    std::vector<std::vector<int>> base(static_cast<std::size_t>(machines));
    for (const auto& op : instance->operations()) base[static_cast<std::size_t>(op.machine_id)].push_back(op.job_id);
    std::vector<std::vector<std::vector<int>>> choices(static_cast<std::size_t>(machines));
    for (int m = 0; m < machines; ++m) {
        auto seq = base[static_cast<std::size_t>(m)];
        std::sort(seq.begin(), seq.end());
        do choices[static_cast<std::size_t>(m)].push_back(seq);
        while (std::next_permutation(seq.begin(), seq.end()));
    }
    Time best = std::numeric_limits<Time>::max();
    std::vector<std::size_t> idx(static_cast<std::size_t>(machines), 0);
    while (true) {
        JobSequences y;
        for (int m = 0; m < machines; ++m) y.push_back(choices[static_cast<std::size_t>(m)][idx[static_cast<std::size_t>(m)]]);
        // Simulate: repeatedly start the operation that is next on its
        // machine and next in its job.
        std::vector<std::size_t> cursor(static_cast<std::size_t>(machines), 0);
        std::vector<int> next(static_cast<std::size_t>(instance->num_jobs()), 0);
        std::vector<Time> job_end(next.size(), 0), machine_end(cursor.size(), 0);
        int done = 0;
        bool progressed = true;
        while (progressed && done < instance->num_operations()) {
            progressed = false;
            for (int m = 0; m < machines; ++m) {
                const auto mi = static_cast<std::size_t>(m);
                if (cursor[mi] >= y[mi].size()) continue;
                const int j = y[mi][cursor[mi]];
                const auto ji = static_cast<std::size_t>(j);
                if (next[ji] >= instance->job_size(j)) continue;
                const auto& op = instance->operation(j, next[ji]);
                if (op.machine_id != m) continue;
                const Time end = std::max(job_end[ji], machine_end[mi]) + op.duration;
                job_end[ji] = machine_end[mi] = end;
                ++next[ji];
                ++cursor[mi];
                ++done;
                progressed = true;
            }
        }
        if (done == instance->num_operations())
            best = std::min(best, *std::max_element(machine_end.begin(), machine_end.end()));
        int m = 0;
        while (m < machines && ++idx[static_cast<std::size_t>(m)] == choices[static_cast<std::size_t>(m)].size()) {
            idx[static_cast<std::size_t>(m)] = 0;
            ++m;
        }
        if (m == machines) break;
    }
    return best;
}

// Earliest start of every undispatched operation from scratch: a forward
// pass along each job's undispatched chain, anchored at the job frontier
// and bounded below by the machine frontier.
inline std::vector<std::optional<Time>> scratch_earliest_starts(const Dispatcher& d) {
    const Instance& inst = d.instance();
    std::vector<std::optional<Time>> est(static_cast<std::size_t>(inst.num_operations()));
    for (int j = 0; j < inst.num_jobs(); ++j) {
        Time ready = d.job_frontier()[static_cast<std::size_t>(j)];
        for (int k = d.job_next_position()[static_cast<std::size_t>(j)]; k < inst.job_size(j); ++k) {
            const auto& op = inst.operation(j, k);
            const Time s = std::max(ready, d.machine_frontier()[static_cast<std::size_t>(op.machine_id)]);
            est[static_cast<std::size_t>(op.operation_id)] = s;
            ready = s + op.duration;
        }
    }
    return est;
}

}  // namespace fixtures
