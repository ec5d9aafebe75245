#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jobshop/dispatching.hpp"
#include "jobshop/random.hpp"

namespace jobshop {

// Chooses one of dispatcher.available_operations(). Ties go to the first
// candidate in list order.
using DispatchingRule = std::function<Operation(const Dispatcher&)>;
using MachineChooser = std::function<int(const Dispatcher&, const Operation&)>;
using JobScorer = std::function<std::vector<double>(const Dispatcher&)>;

// Shortest processing time.
Operation spt(const Dispatcher& dispatcher);
// Smallest position in job.
Operation fcfs(const Dispatcher& dispatcher);
// Most work remaining in the job, counting undispatched operations.
Operation mwkr(const Dispatcher& dispatcher);
// Most operations remaining in the job, counting undispatched and ongoing ones.
Operation mor(const Dispatcher& dispatcher);
Operation random_rule(const Dispatcher& dispatcher, Rng& rng);

DispatchingRule make_random_rule(std::uint64_t seed);

// Picks the first available operation whose job has the highest score.
DispatchingRule score_based_rule(JobScorer scorer);
std::vector<double> most_operations_remaining_score(const Dispatcher& dispatcher);
std::vector<double> most_work_remaining_score(const Dispatcher& dispatcher);

// Names: spt, fcfs, mwkr, mor, random. Throws ConfigError otherwise.
DispatchingRule make_rule(const std::string& name, std::uint64_t seed = 0);
const std::vector<std::string>& rule_names();

int default_machine_chooser(const Dispatcher& dispatcher, const Operation& operation);

class RuleSolver {
public:
    explicit RuleSolver(DispatchingRule rule, ReadyOperationsFilter filter = {},
                        MachineChooser chooser = default_machine_chooser);

    // Runs a fresh dispatcher to completion.
    Schedule solve(std::shared_ptr<const Instance> instance) const;
    // Dispatches one operation chosen by the rule.
    ScheduledOperation step(Dispatcher& dispatcher) const;

private:
    DispatchingRule rule_;
    ReadyOperationsFilter filter_;
    MachineChooser chooser_;
};

// Solves with a named rule and filter names (see make_filter). The schedule
// metadata records rule, filter, seed and wall time in seconds.
Schedule solve(std::shared_ptr<const Instance> instance, const std::string& rule,
               std::span<const std::string> filter, std::uint64_t seed = 0);

}  // namespace jobshop
