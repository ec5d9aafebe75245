#include "jobshop/dispatching.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "jobshop/errors.hpp"

namespace jobshop {

Dispatcher::Dispatcher(std::shared_ptr<const Instance> instance, ReadyOperationsFilter filter)
    : instance_(std::move(instance)), filter_(std::move(filter)), schedule_(instance_) {
    const auto jobs = static_cast<std::size_t>(instance_->num_jobs());
    job_frontier_.assign(jobs, 0);
    machine_frontier_.assign(static_cast<std::size_t>(instance_->num_machines()), 0);
    job_next_position_.assign(jobs, 0);
    job_remaining_work_.assign(jobs, 0);
    for (const auto& op : instance_->operations()) job_remaining_work_[static_cast<std::size_t>(op.job_id)] += op.duration;
    start_.assign(static_cast<std::size_t>(instance_->num_operations()), -1);
}

void Dispatcher::set_filter(ReadyOperationsFilter filter) {
    filter_ = std::move(filter);
    invalidate();
}

void Dispatcher::subscribe(DispatcherObserver& observer) { observers_.push_back(&observer); }

void Dispatcher::unsubscribe(DispatcherObserver& observer) { std::erase(observers_, &observer); }

void Dispatcher::invalidate() const {
    available_cache_.reset();
    current_time_cache_.reset();
}

void Dispatcher::reset() {
    schedule_.clear();
    std::fill(job_frontier_.begin(), job_frontier_.end(), 0);
    std::fill(machine_frontier_.begin(), machine_frontier_.end(), 0);
    std::fill(job_next_position_.begin(), job_next_position_.end(), 0);
    std::fill(job_remaining_work_.begin(), job_remaining_work_.end(), 0);
    for (const auto& op : instance_->operations()) job_remaining_work_[static_cast<std::size_t>(op.job_id)] += op.duration;
    std::fill(start_.begin(), start_.end(), -1);
    num_dispatched_ = 0;
    invalidate();
    for (auto* observer : observers_) observer->reset();
}

ScheduledOperation Dispatcher::dispatch(const Operation& operation, std::optional<int> machine_id) {
    if (is_complete()) throw CompleteError("schedule is already complete");
    if (operation.job_id < 0 || operation.job_id >= instance_->num_jobs() ||
        instance_->operation(operation.operation_id) != operation)
        throw ValidationError("operation does not belong to this instance");
    const auto job = static_cast<std::size_t>(operation.job_id);
    if (operation.position_in_job != job_next_position_[job]) {
        std::ostringstream msg;
        msg << "operation " << operation.operation_id << " (job " << operation.job_id << ", position "
            << operation.position_in_job << ") is not the next operation of its job (expected position "
            << job_next_position_[job] << ")";
        throw NotReadyError(msg.str());
    }
    const int machine = machine_id.value_or(operation.machine_id);
    if (machine != operation.machine_id)
        throw ValidationError("operation " + std::to_string(operation.operation_id) + " cannot run on machine " +
                              std::to_string(machine));

    const auto m = static_cast<std::size_t>(machine);
    const ScheduledOperation scheduled{operation, machine, std::max(job_frontier_[job], machine_frontier_[m])};
    schedule_.add(scheduled);
    job_frontier_[job] = machine_frontier_[m] = scheduled.end_time();
    ++job_next_position_[job];
    job_remaining_work_[job] -= operation.duration;
    start_[static_cast<std::size_t>(operation.operation_id)] = scheduled.start_time;
    ++num_dispatched_;
    invalidate();
    for (auto* observer : observers_) observer->update(scheduled);
    return scheduled;
}

std::vector<Operation> Dispatcher::raw_ready_operations() const {
    std::vector<Operation> ready;
    ready.reserve(job_next_position_.size());
    for (int j = 0; j < instance_->num_jobs(); ++j)
        if (!job_done(j)) ready.push_back(instance_->operation(j, job_next_position_[static_cast<std::size_t>(j)]));
    return ready;
}

const std::vector<Operation>& Dispatcher::available_operations() const {
    if (!available_cache_) {
        auto ready = raw_ready_operations();
        available_cache_ = filter_ ? filter_(*this, std::move(ready)) : std::move(ready);
    }
    return *available_cache_;
}

Time Dispatcher::earliest_start(const Operation& operation) const {
    return std::max(job_frontier_[static_cast<std::size_t>(operation.job_id)],
                    machine_frontier_[static_cast<std::size_t>(operation.machine_id)]);
}

Time Dispatcher::min_earliest_start(std::span<const Operation> operations) const {
    if (operations.empty()) return schedule_.makespan();
    Time best = std::numeric_limits<Time>::max();
    for (const auto& op : operations) best = std::min(best, earliest_start(op));
    return best;
}

Time Dispatcher::current_time() const {
    if (!current_time_cache_) current_time_cache_ = min_earliest_start(available_operations());
    return *current_time_cache_;
}

const Operation& Dispatcher::next_operation(int job_id) const {
    if (job_id < 0 || job_id >= instance_->num_jobs()) throw ValidationError("job id " + std::to_string(job_id) + " out of range");
    if (job_done(job_id)) throw CompleteError("job " + std::to_string(job_id) + " has no operations left");
    return instance_->operation(job_id, job_next_position_[static_cast<std::size_t>(job_id)]);
}

std::optional<Time> Dispatcher::start_time(int operation_id) const {
    const Time s = start_.at(static_cast<std::size_t>(operation_id));
    if (s < 0) return std::nullopt;
    return s;
}

bool Dispatcher::is_completed(const Operation& operation) const {
    return is_dispatched(operation) &&
           start_[static_cast<std::size_t>(operation.operation_id)] + operation.duration <= current_time();
}

bool Dispatcher::is_ongoing(const Operation& operation) const {
    return is_dispatched(operation) &&
           start_[static_cast<std::size_t>(operation.operation_id)] + operation.duration > current_time();
}

int Dispatcher::job_uncompleted_count(int job_id) const {
    const auto next = job_next_position_.at(static_cast<std::size_t>(job_id));
    int count = instance_->job_size(job_id) - next;
    const Time t = current_time();
    const auto ops = instance_->job(job_id);
    for (int k = next - 1; k >= 0; --k) {
        const auto& op = ops[static_cast<std::size_t>(k)];
        if (start_[static_cast<std::size_t>(op.operation_id)] + op.duration <= t) break;
        ++count;
    }
    return count;
}

std::vector<Operation> filter_dominated_operations(const Dispatcher& dispatcher, std::vector<Operation> ready) {
    const auto n = ready.size();
    std::vector<Time> est(n);
    for (std::size_t i = 0; i < n; ++i) est[i] = dispatcher.earliest_start(ready[i]);
    std::vector<std::vector<std::size_t>> by_machine(static_cast<std::size_t>(dispatcher.instance().num_machines()));
    for (std::size_t i = 0; i < n; ++i) by_machine[static_cast<std::size_t>(ready[i].machine_id)].push_back(i);

    std::vector<char> dominated(n, 0);
    for (const auto& group : by_machine) {
        if (group.size() < 2) continue;
        for (auto i : group) {
            for (auto k : group) {
                if (k == i) continue;
                const Time end_k = est[k] + ready[k].duration;
                // Two zero-duration operations with equal starts dominate each
                // other; the earlier one in the list survives.
                const bool mutual = ready[i].duration == 0 && ready[k].duration == 0 && est[k] == est[i];
                if (end_k < est[i] || (end_k == est[i] && (!mutual || k < i))) {
                    dominated[i] = 1;
                    break;
                }
            }
        }
    }
    std::vector<Operation> kept;
    kept.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!dominated[i]) kept.push_back(ready[i]);
    return kept;
}

std::vector<Operation> filter_non_immediate_operations(const Dispatcher& dispatcher, std::vector<Operation> ready) {
    const Time t = dispatcher.min_earliest_start(ready);
    std::erase_if(ready, [&](const Operation& op) { return dispatcher.earliest_start(op) != t; });
    return ready;
}

std::vector<Operation> filter_non_idle_machines(const Dispatcher& dispatcher, std::vector<Operation> ready) {
    const Time t = dispatcher.min_earliest_start(ready);
    const auto& sequences = dispatcher.schedule().machine_sequences();
    std::erase_if(ready, [&](const Operation& op) {
        const auto& seq = sequences[static_cast<std::size_t>(op.machine_id)];
        return !seq.empty() && seq.back().end_time() > t;
    });
    return ready;
}

std::vector<Operation> filter_non_immediate_machines(const Dispatcher& dispatcher, std::vector<Operation> ready) {
    const Time t = dispatcher.min_earliest_start(ready);
    std::vector<char> immediate(static_cast<std::size_t>(dispatcher.instance().num_machines()), 0);
    for (const auto& op : ready)
        if (dispatcher.earliest_start(op) == t) immediate[static_cast<std::size_t>(op.machine_id)] = 1;
    std::erase_if(ready, [&](const Operation& op) { return !immediate[static_cast<std::size_t>(op.machine_id)]; });
    return ready;
}

ReadyOperationsFilter compose_filters(std::vector<ReadyOperationsFilter> filters) {
    return [filters = std::move(filters)](const Dispatcher& dispatcher, std::vector<Operation> ready) {
        for (const auto& f : filters)
            if (f) ready = f(dispatcher, std::move(ready));
        return ready;
    };
}

namespace {

std::vector<std::string> split_names(std::span<const std::string> names) {
    std::vector<std::string> parts;
    for (const auto& name : names) {
        std::size_t pos = 0;
        while (true) {
            auto plus = name.find('+', pos);
            std::string part = name.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
            std::transform(part.begin(), part.end(), part.begin(), [](unsigned char c) { return std::tolower(c); });
            parts.push_back(part);
            if (plus == std::string::npos) break;
            pos = plus + 1;
        }
    }
    return parts;
}

}  // namespace

ReadyOperationsFilter make_filter(std::span<const std::string> names) {
    const auto parts = split_names(names);
    if (parts.empty()) throw ConfigError("no filter given (use 'none' for no filtering)");
    std::vector<ReadyOperationsFilter> filters;
    for (const auto& part : parts) {
        if (part == "none") {
            if (parts.size() != 1) throw ConfigError("filter 'none' cannot be combined with other filters");
            return {};
        }
        if (part == "do") filters.emplace_back(filter_dominated_operations);
        else if (part == "nio") filters.emplace_back(filter_non_immediate_operations);
        else if (part == "nidm") filters.emplace_back(filter_non_idle_machines);
        else if (part == "nim") filters.emplace_back(filter_non_immediate_machines);
        else throw ConfigError("unknown filter '" + part + "'");
    }
    if (filters.size() == 1) return filters.front();
    return compose_filters(std::move(filters));
}

ReadyOperationsFilter make_filter(const std::string& name) { return make_filter(std::span<const std::string>(&name, 1)); }

std::string filter_label(std::span<const std::string> names) {
    std::string label;
    for (const auto& part : split_names(names)) label += (label.empty() ? "" : "+") + part;
    return label;
}

}  // namespace jobshop
