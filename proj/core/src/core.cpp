#include "jobshop/core.hpp"

#include <algorithm>

#include "jobshop/errors.hpp"

namespace jobshop {

std::optional<std::int64_t> meta_int(const Metadata& metadata, const std::string& key) {
    auto it = metadata.find(key);
    if (it == metadata.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
    if (const auto* d = std::get_if<double>(&it->second)) return static_cast<std::int64_t>(*d);
    return std::nullopt;
}

Instance::Instance(std::string name,
                   const std::vector<std::vector<Time>>& durations,
                   const std::vector<std::vector<int>>& machines,
                   Metadata metadata,
                   std::optional<int> num_machines)
    : name_(std::move(name)), metadata_(std::move(metadata)) {
    if (durations.size() != machines.size())
        throw ShapeError("duration and machine matrices have different job counts");
    if (durations.empty()) throw ValidationError("instance has no jobs");

    int max_machine = -1;
    job_offsets_.push_back(0);
    for (std::size_t j = 0; j < durations.size(); ++j) {
        if (durations[j].size() != machines[j].size())
            throw ShapeError("job " + std::to_string(j) + ": duration and machine rows differ in length");
        if (durations[j].empty()) throw ValidationError("job " + std::to_string(j) + " has no operations");
        for (std::size_t k = 0; k < durations[j].size(); ++k) {
            if (durations[j][k] < 0) throw ValidationError("negative duration in job " + std::to_string(j));
            if (machines[j][k] < 0) throw ValidationError("negative machine id in job " + std::to_string(j));
            max_machine = std::max(max_machine, machines[j][k]);
            operations_.push_back(Operation{static_cast<int>(j), static_cast<int>(k), machines[j][k], durations[j][k],
                                            static_cast<int>(operations_.size())});
        }
        job_offsets_.push_back(operations_.size());
    }
    num_machines_ = num_machines.value_or(max_machine + 1);
    if (max_machine >= num_machines_)
        throw ValidationError("machine id " + std::to_string(max_machine) + " exceeds machine count " +
                              std::to_string(num_machines_));
    by_machine_.resize(static_cast<std::size_t>(num_machines_));
    for (const auto& op : operations_) by_machine_[static_cast<std::size_t>(op.machine_id)].push_back(op.operation_id);
}

std::span<const Operation> Instance::job(int job_id) const {
    if (job_id < 0 || job_id >= num_jobs()) throw std::out_of_range("job id " + std::to_string(job_id));
    auto begin = job_offsets_[static_cast<std::size_t>(job_id)];
    auto end = job_offsets_[static_cast<std::size_t>(job_id) + 1];
    return std::span<const Operation>(operations_).subspan(begin, end - begin);
}

std::vector<std::vector<Time>> Instance::duration_matrix() const {
    std::vector<std::vector<Time>> out(static_cast<std::size_t>(num_jobs()));
    for (const auto& op : operations_) out[static_cast<std::size_t>(op.job_id)].push_back(op.duration);
    return out;
}

std::vector<std::vector<int>> Instance::machine_matrix() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(num_jobs()));
    for (const auto& op : operations_) out[static_cast<std::size_t>(op.job_id)].push_back(op.machine_id);
    return out;
}

std::optional<Time> Instance::best_known() const {
    if (auto opt = optimum()) return opt;
    return meta_int(metadata_, "upper_bound");
}

Schedule::Schedule(std::shared_ptr<const Instance> instance)
    : instance_(std::move(instance)),
      sequences_(static_cast<std::size_t>(instance_->num_machines())),
      times_scheduled_(static_cast<std::size_t>(instance_->num_operations()), 0) {}

void Schedule::add(const ScheduledOperation& scheduled) {
    if (scheduled.machine_id < 0 || scheduled.machine_id >= instance_->num_machines())
        throw ValidationError("machine id " + std::to_string(scheduled.machine_id) + " out of range");
    if (scheduled.operation.operation_id < 0 || scheduled.operation.operation_id >= instance_->num_operations())
        throw ValidationError("operation id " + std::to_string(scheduled.operation.operation_id) + " out of range");
    sequences_[static_cast<std::size_t>(scheduled.machine_id)].push_back(scheduled);
    if (times_scheduled_[static_cast<std::size_t>(scheduled.operation.operation_id)]++ == 0) ++num_distinct_;
    ++num_scheduled_;
    makespan_ = std::max(makespan_, scheduled.end_time());
}

void Schedule::clear() {
    for (auto& seq : sequences_) seq.clear();
    std::fill(times_scheduled_.begin(), times_scheduled_.end(), 0u);
    num_scheduled_ = 0;
    num_distinct_ = 0;
    makespan_ = 0;
}

bool Schedule::is_complete() const noexcept {
    return num_distinct_ == times_scheduled_.size() && num_scheduled_ == times_scheduled_.size();
}

JobSequences Schedule::job_sequences() const {
    JobSequences y(sequences_.size());
    for (std::size_t m = 0; m < sequences_.size(); ++m)
        for (const auto& s : sequences_[m]) y[m].push_back(s.operation.job_id);
    return y;
}

Schedule from_job_sequences(std::shared_ptr<const Instance> instance, const JobSequences& y) {
    const Instance& inst = *instance;
    const auto num_machines = static_cast<std::size_t>(inst.num_machines());
    if (y.size() != num_machines)
        throw ShapeError("expected " + std::to_string(num_machines) + " machine sequences, got " +
                         std::to_string(y.size()));

    std::vector<std::vector<int>> visits(num_machines, std::vector<int>(static_cast<std::size_t>(inst.num_jobs()), 0));
    for (const auto& op : inst.operations()) ++visits[static_cast<std::size_t>(op.machine_id)][static_cast<std::size_t>(op.job_id)];
    for (std::size_t m = 0; m < num_machines; ++m) {
        for (int j : y[m]) {
            if (j < 0 || j >= inst.num_jobs())
                throw ShapeError("machine " + std::to_string(m) + ": job id " + std::to_string(j) + " out of range");
            --visits[m][static_cast<std::size_t>(j)];
        }
        for (std::size_t j = 0; j < visits[m].size(); ++j)
            if (visits[m][j] != 0)
                throw ShapeError("machine " + std::to_string(m) + ": job " + std::to_string(j) +
                                 " appears a different number of times than it visits the machine");
    }

    Schedule schedule(instance);
    std::vector<std::size_t> cursor(num_machines, 0);
    std::vector<int> next_position(static_cast<std::size_t>(inst.num_jobs()), 0);
    std::vector<Time> job_frontier(static_cast<std::size_t>(inst.num_jobs()), 0);
    std::vector<Time> machine_frontier(num_machines, 0);

    int remaining = inst.num_operations();
    while (remaining > 0) {
        bool advanced = false;
        for (std::size_t m = 0; m < num_machines && !advanced; ++m) {
            if (cursor[m] >= y[m].size()) continue;
            const int j = y[m][cursor[m]];
            const auto ju = static_cast<std::size_t>(j);
            if (next_position[ju] >= inst.job_size(j)) continue;
            const Operation& op = inst.operation(j, next_position[ju]);
            if (static_cast<std::size_t>(op.machine_id) != m) continue;
            const Time start = std::max(job_frontier[ju], machine_frontier[m]);
            schedule.add(ScheduledOperation{op, op.machine_id, start});
            job_frontier[ju] = machine_frontier[m] = start + op.duration;
            ++next_position[ju];
            ++cursor[m];
            --remaining;
            advanced = true;
        }
        if (!advanced)
            throw DeadlockError("job sequences are infeasible: no machine can advance with " +
                                std::to_string(remaining) + " operations left");
    }
    return schedule;
}

namespace {

// True when [from, until) is fully covered by the machine's busy intervals.
bool machine_busy_throughout(std::span<const ScheduledOperation> sequence, Time from, Time until) {
    Time t = from;
    for (const auto& s : sequence) {
        if (t >= until) break;
        if (s.end_time() <= t || s.operation.duration == 0) continue;
        if (s.start_time > t) return false;
        t = s.end_time();
    }
    return t >= until;
}

}  // namespace

ScheduleReport verify_schedule(const Instance& instance, const Schedule& schedule) {
    ScheduleReport report;
    const auto n = static_cast<std::size_t>(instance.num_operations());
    std::vector<const ScheduledOperation*> by_op(n, nullptr);
    std::vector<const ScheduledOperation*> machine_prev(n, nullptr);
    bool valid = true;
    auto violate = [&](std::string message) {
        valid = false;
        report.violations.push_back(std::move(message));
    };

    const auto& sequences = schedule.machine_sequences();
    if (static_cast<int>(sequences.size()) != instance.num_machines()) {
        report.violations.push_back("schedule has a different machine count than the instance");
        return report;
    }
    for (std::size_t m = 0; m < sequences.size(); ++m) {
        const ScheduledOperation* prev = nullptr;
        for (const auto& s : sequences[m]) {
            const auto id = static_cast<std::size_t>(s.operation.operation_id);
            if (id >= n || instance.operation(static_cast<int>(id)) != s.operation) {
                violate("machine " + std::to_string(m) + " holds an operation foreign to the instance");
                continue;
            }
            if (s.machine_id != static_cast<int>(m) || s.operation.machine_id != s.machine_id)
                violate("operation " + std::to_string(id) + " is on the wrong machine");
            if (s.start_time < 0) violate("operation " + std::to_string(id) + " starts before 0");
            if (by_op[id] != nullptr) violate("operation " + std::to_string(id) + " is scheduled twice");
            by_op[id] = &s;
            machine_prev[id] = prev;
            if (prev != nullptr && s.start_time < prev->end_time())
                violate("operations " + std::to_string(prev->operation.operation_id) + " and " + std::to_string(id) +
                        " overlap on machine " + std::to_string(m));
            prev = &s;
        }
    }

    bool complete = true;
    for (int j = 0; j < instance.num_jobs(); ++j) {
        const ScheduledOperation* prev = nullptr;
        bool gap = false;
        for (const auto& op : instance.job(j)) {
            const auto* s = by_op[static_cast<std::size_t>(op.operation_id)];
            if (s == nullptr) {
                complete = false;
                gap = true;
                continue;
            }
            if (gap) violate("operation " + std::to_string(op.operation_id) + " is scheduled before its job predecessor");
            if (prev != nullptr && s->start_time < prev->end_time())
                violate("operation " + std::to_string(op.operation_id) + " starts before its job predecessor ends");
            prev = s;
        }
    }

    report.valid = valid;
    report.complete = complete && valid;
    if (!valid) return report;

    bool semi_active = true;
    bool non_delay = true;
    for (std::size_t id = 0; id < n; ++id) {
        const auto* s = by_op[id];
        if (s == nullptr) continue;
        const Operation& op = s->operation;
        Time job_ready = 0;
        if (op.position_in_job > 0) {
            const auto& pred = instance.operation(op.job_id, op.position_in_job - 1);
            job_ready = by_op[static_cast<std::size_t>(pred.operation_id)]->end_time();
        }
        const Time machine_ready = machine_prev[id] != nullptr ? machine_prev[id]->end_time() : 0;
        if (s->start_time != std::max(job_ready, machine_ready)) semi_active = false;
        if (!machine_busy_throughout(schedule.machine_sequence(s->machine_id), job_ready, s->start_time))
            non_delay = false;
    }
    report.semi_active = semi_active;
    report.non_delay = non_delay;
    return report;
}

InstanceStats instance_stats(const Instance& instance) {
    InstanceStats stats;
    stats.machine_loads.assign(static_cast<std::size_t>(instance.num_machines()), 0);
    stats.job_durations.assign(static_cast<std::size_t>(instance.num_jobs()), 0);
    stats.num_operations = instance.num_operations();
    for (const auto& op : instance.operations()) {
        stats.machine_loads[static_cast<std::size_t>(op.machine_id)] += op.duration;
        stats.job_durations[static_cast<std::size_t>(op.job_id)] += op.duration;
        stats.max_duration = std::max(stats.max_duration, op.duration);
    }
    return stats;
}

}  // namespace jobshop
