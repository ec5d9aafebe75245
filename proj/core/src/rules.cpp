#include "jobshop/rules.hpp"

#include <chrono>

#include "jobshop/errors.hpp"

namespace jobshop {

namespace {

const std::vector<Operation>& require_available(const Dispatcher& dispatcher) {
    const auto& available = dispatcher.available_operations();
    if (available.empty()) throw EmptyActionSetError("no available operations");
    return available;
}

// First element minimizing key.
template <typename Key>
Operation first_min(const std::vector<Operation>& ops, Key key) {
    std::size_t best = 0;
    auto best_key = key(ops[0]);
    for (std::size_t i = 1; i < ops.size(); ++i) {
        auto k = key(ops[i]);
        if (k < best_key) {
            best_key = k;
            best = i;
        }
    }
    return ops[best];
}

}  // namespace

Operation spt(const Dispatcher& dispatcher) {
    return first_min(require_available(dispatcher), [](const Operation& op) { return op.duration; });
}

Operation fcfs(const Dispatcher& dispatcher) {
    return first_min(require_available(dispatcher), [](const Operation& op) { return op.position_in_job; });
}

Operation mwkr(const Dispatcher& dispatcher) {
    return first_min(require_available(dispatcher),
                     [&](const Operation& op) { return -dispatcher.job_remaining_work(op.job_id); });
}

Operation mor(const Dispatcher& dispatcher) {
    return first_min(require_available(dispatcher),
                     [&](const Operation& op) { return -dispatcher.job_uncompleted_count(op.job_id); });
}

Operation random_rule(const Dispatcher& dispatcher, Rng& rng) {
    const auto& available = require_available(dispatcher);
    return available[rng.index(available.size())];
}

DispatchingRule make_random_rule(std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(seed);
    return [rng](const Dispatcher& dispatcher) { return random_rule(dispatcher, *rng); };
}

DispatchingRule score_based_rule(JobScorer scorer) {
    return [scorer = std::move(scorer)](const Dispatcher& dispatcher) {
        const auto& available = require_available(dispatcher);
        const auto scores = scorer(dispatcher);
        if (scores.size() != static_cast<std::size_t>(dispatcher.instance().num_jobs()))
            throw ValidationError("scorer must return one score per job");
        return first_min(available, [&](const Operation& op) { return -scores[static_cast<std::size_t>(op.job_id)]; });
    };
}

std::vector<double> most_operations_remaining_score(const Dispatcher& dispatcher) {
    std::vector<double> scores(static_cast<std::size_t>(dispatcher.instance().num_jobs()));
    for (std::size_t j = 0; j < scores.size(); ++j)
        scores[j] = dispatcher.job_uncompleted_count(static_cast<int>(j));
    return scores;
}

std::vector<double> most_work_remaining_score(const Dispatcher& dispatcher) {
    std::vector<double> scores(static_cast<std::size_t>(dispatcher.instance().num_jobs()));
    for (std::size_t j = 0; j < scores.size(); ++j)
        scores[j] = static_cast<double>(dispatcher.job_remaining_work(static_cast<int>(j)));
    return scores;
}

const std::vector<std::string>& rule_names() {
    static const std::vector<std::string> names{"spt", "fcfs", "mwkr", "mor", "random"};
    return names;
}

DispatchingRule make_rule(const std::string& name, std::uint64_t seed) {
    if (name == "spt") return spt;
    if (name == "fcfs") return fcfs;
    if (name == "mwkr") return mwkr;
    if (name == "mor") return mor;
    if (name == "random") return make_random_rule(seed);
    throw ConfigError("unknown rule '" + name + "'");
}

int default_machine_chooser(const Dispatcher&, const Operation& operation) { return operation.machine_id; }

RuleSolver::RuleSolver(DispatchingRule rule, ReadyOperationsFilter filter, MachineChooser chooser)
    : rule_(std::move(rule)), filter_(std::move(filter)), chooser_(std::move(chooser)) {}

ScheduledOperation RuleSolver::step(Dispatcher& dispatcher) const {
    const Operation op = rule_(dispatcher);
    return dispatcher.dispatch(op, chooser_(dispatcher, op));
}

Schedule RuleSolver::solve(std::shared_ptr<const Instance> instance) const {
    Dispatcher dispatcher(std::move(instance), filter_);
    while (!dispatcher.is_complete()) step(dispatcher);
    return dispatcher.schedule();
}

Schedule solve(std::shared_ptr<const Instance> instance, const std::string& rule,
               std::span<const std::string> filter, std::uint64_t seed) {
    const auto started = std::chrono::steady_clock::now();
    RuleSolver solver(make_rule(rule, seed), make_filter(filter));
    Schedule schedule = solver.solve(std::move(instance));
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    schedule.metadata()["rule"] = rule;
    schedule.metadata()["filter"] = filter_label(filter);
    schedule.metadata()["seed"] = static_cast<std::int64_t>(seed);
    schedule.metadata()["seconds"] = elapsed.count();
    return schedule;
}

}  // namespace jobshop
