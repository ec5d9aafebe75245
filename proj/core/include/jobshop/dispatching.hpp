#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jobshop/core.hpp"

namespace jobshop {

class Dispatcher;

// Maps the ready list to the action set. Output must be an order-preserving
// subset of the input. A filter may query the dispatcher but must not call
// available_operations() or current_time(), which are defined through it.
using ReadyOperationsFilter = std::function<std::vector<Operation>(const Dispatcher&, std::vector<Operation>)>;

// Notified after every dispatch, in subscription order, and on reset.
class DispatcherObserver {
public:
    virtual ~DispatcherObserver() = default;
    virtual void update(const ScheduledOperation& scheduled) = 0;
    virtual void reset() = 0;
};

class Dispatcher {
public:
    explicit Dispatcher(std::shared_ptr<const Instance> instance, ReadyOperationsFilter filter = {});
    Dispatcher(const Dispatcher&) = delete;
    Dispatcher& operator=(const Dispatcher&) = delete;

    const Instance& instance() const noexcept { return *instance_; }
    const std::shared_ptr<const Instance>& instance_ptr() const noexcept { return instance_; }
    const Schedule& schedule() const noexcept { return schedule_; }

    const ReadyOperationsFilter& filter() const noexcept { return filter_; }
    void set_filter(ReadyOperationsFilter filter);

    // Observers are not owned and must outlive their subscription.
    void subscribe(DispatcherObserver& observer);
    void unsubscribe(DispatcherObserver& observer);
    std::span<DispatcherObserver* const> observers() const noexcept { return observers_; }

    // Clears the schedule, then resets observers in subscription order.
    void reset();

    // Starts the operation at max(job frontier, machine frontier).
    ScheduledOperation dispatch(const Operation& operation, std::optional<int> machine_id = std::nullopt);

    bool is_complete() const noexcept { return num_dispatched_ == static_cast<std::size_t>(instance_->num_operations()); }
    std::size_t num_dispatched() const noexcept { return num_dispatched_; }

    // The next undispatched operation of every unfinished job, by job id.
    std::vector<Operation> raw_ready_operations() const;
    // The filtered ready list (cached until the next dispatch).
    const std::vector<Operation>& available_operations() const;
    Time earliest_start(const Operation& operation) const;
    // Minimum earliest start over the list; the makespan when it is empty.
    Time min_earliest_start(std::span<const Operation> operations) const;
    // Minimum earliest start over the available operations.
    Time current_time() const;

    const Operation& next_operation(int job_id) const;
    bool job_done(int job_id) const { return job_next_position_.at(static_cast<std::size_t>(job_id)) >= instance_->job_size(job_id); }

    std::span<const Time> job_frontier() const noexcept { return job_frontier_; }
    std::span<const Time> machine_frontier() const noexcept { return machine_frontier_; }
    std::span<const int> job_next_position() const noexcept { return job_next_position_; }

    bool is_dispatched(const Operation& operation) const noexcept {
        return operation.position_in_job < job_next_position_[static_cast<std::size_t>(operation.job_id)];
    }
    // Start time of a dispatched operation.
    std::optional<Time> start_time(int operation_id) const;
    // Dispatched and finished by the current time.
    bool is_completed(const Operation& operation) const;
    // Dispatched and still running at the current time.
    bool is_ongoing(const Operation& operation) const;

    // Sum of durations of the job's undispatched operations.
    Time job_remaining_work(int job_id) const { return job_remaining_work_.at(static_cast<std::size_t>(job_id)); }
    // Undispatched plus ongoing operations of the job.
    int job_uncompleted_count(int job_id) const;

private:
    void invalidate() const;

    std::shared_ptr<const Instance> instance_;
    ReadyOperationsFilter filter_;
    Schedule schedule_;
    std::vector<DispatcherObserver*> observers_;
    std::vector<Time> job_frontier_;
    std::vector<Time> machine_frontier_;
    std::vector<int> job_next_position_;
    std::vector<Time> job_remaining_work_;
    std::vector<Time> start_;
    std::size_t num_dispatched_ = 0;
    mutable std::optional<std::vector<Operation>> available_cache_;
    mutable std::optional<Time> current_time_cache_;
};

// Drops an operation when another ready operation on the same machine can
// finish no later than the first could start.
std::vector<Operation> filter_dominated_operations(const Dispatcher& dispatcher, std::vector<Operation> ready);
// Keeps the operations whose earliest start equals the minimum.
std::vector<Operation> filter_non_immediate_operations(const Dispatcher& dispatcher, std::vector<Operation> ready);
// Drops operations whose machine is still processing at the minimum earliest
// start of the list.
std::vector<Operation> filter_non_idle_machines(const Dispatcher& dispatcher, std::vector<Operation> ready);
// Keeps operations on machines where some listed operation can start at
// the minimum earliest start of the list.
std::vector<Operation> filter_non_immediate_machines(const Dispatcher& dispatcher, std::vector<Operation> ready);

ReadyOperationsFilter compose_filters(std::vector<ReadyOperationsFilter> filters);

// Builds a filter from names (none, do, nio, nidm, nim), composed left to
// right. "a+b" inside one name is equivalent to passing "a" then "b".
// "none" must appear alone. Throws ConfigError on unknown names.
ReadyOperationsFilter make_filter(std::span<const std::string> names);
ReadyOperationsFilter make_filter(const std::string& name);
// Canonical label for a filter name list, e.g. {"do","nim"} -> "do+nim".
std::string filter_label(std::span<const std::string> names);

}  // namespace jobshop
