#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace jobshop {

// All times are integral.
using Time = std::int64_t;

// A metadata value that has no scalar representation (arrays, objects)
// is kept as its serialized JSON text so that it survives round-trips.
struct RawJson {
    std::string text;
    friend bool operator==(const RawJson&, const RawJson&) = default;
};

using MetaValue = std::variant<std::monostate, bool, std::int64_t, double, std::string, RawJson>;
using Metadata = std::map<std::string, MetaValue>;

std::optional<std::int64_t> meta_int(const Metadata& metadata, const std::string& key);

struct Operation {
    int job_id = 0;
    int position_in_job = 0;
    int machine_id = 0;
    Time duration = 0;
    int operation_id = 0;

    friend bool operator==(const Operation&, const Operation&) = default;
};

// Per-machine ordered job ids. A job appears once per visit to the machine.
using JobSequences = std::vector<std::vector<int>>;

class Instance {
public:
    // Row i of both matrices describes job i in processing order. When
    // num_machines is omitted it is inferred as the largest machine id + 1.
    Instance(std::string name,
             const std::vector<std::vector<Time>>& durations,
             const std::vector<std::vector<int>>& machines,
             Metadata metadata = {},
             std::optional<int> num_machines = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    const Metadata& metadata() const noexcept { return metadata_; }

    int num_jobs() const noexcept { return static_cast<int>(job_offsets_.size()) - 1; }
    int num_machines() const noexcept { return num_machines_; }
    int num_operations() const noexcept { return static_cast<int>(operations_.size()); }

    // Operations in job-major order; index equals operation_id.
    std::span<const Operation> operations() const noexcept { return operations_; }
    std::span<const Operation> job(int job_id) const;
    const Operation& operation(int operation_id) const { return operations_.at(static_cast<std::size_t>(operation_id)); }
    const Operation& operation(int job_id, int position) const { return job(job_id)[static_cast<std::size_t>(position)]; }
    int job_size(int job_id) const { return static_cast<int>(job(job_id).size()); }
    // Operation ids that require the machine, in job-major order.
    const std::vector<int>& operations_on_machine(int machine_id) const { return by_machine_.at(static_cast<std::size_t>(machine_id)); }

    std::vector<std::vector<Time>> duration_matrix() const;
    std::vector<std::vector<int>> machine_matrix() const;

    std::optional<Time> optimum() const { return meta_int(metadata_, "optimum"); }
    // The optimum when known, otherwise the best known upper bound.
    std::optional<Time> best_known() const;

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::string name_;
    std::vector<Operation> operations_;
    std::vector<std::size_t> job_offsets_;
    std::vector<std::vector<int>> by_machine_;
    int num_machines_ = 0;
    Metadata metadata_;
};

struct ScheduledOperation {
    Operation operation;
    int machine_id = 0;
    Time start_time = 0;

    Time end_time() const noexcept { return start_time + operation.duration; }
    friend bool operator==(const ScheduledOperation&, const ScheduledOperation&) = default;
};

class Schedule {
public:
    explicit Schedule(std::shared_ptr<const Instance> instance);

    const Instance& instance() const noexcept { return *instance_; }
    const std::shared_ptr<const Instance>& instance_ptr() const noexcept { return instance_; }

    const std::vector<std::vector<ScheduledOperation>>& machine_sequences() const noexcept { return sequences_; }
    std::span<const ScheduledOperation> machine_sequence(int machine_id) const { return sequences_.at(static_cast<std::size_t>(machine_id)); }

    // Appends to the operation's machine list. Feasibility is not checked
    // here; see verify_schedule.
    void add(const ScheduledOperation& scheduled);
    void clear();

    Time makespan() const noexcept { return makespan_; }
    std::size_t num_scheduled() const noexcept { return num_scheduled_; }
    bool is_complete() const noexcept;
    JobSequences job_sequences() const;

    Metadata& metadata() noexcept { return metadata_; }
    const Metadata& metadata() const noexcept { return metadata_; }

private:
    std::shared_ptr<const Instance> instance_;
    std::vector<std::vector<ScheduledOperation>> sequences_;
    std::vector<unsigned> times_scheduled_;
    std::size_t num_scheduled_ = 0;
    std::size_t num_distinct_ = 0;
    Time makespan_ = 0;
    Metadata metadata_;
};

inline Time makespan(const Schedule& schedule) { return schedule.makespan(); }

// Builds the semi-active schedule that respects the given machine sequences.
// Throws ShapeError on malformed sequences and DeadlockError when they
// cannot be realized.
Schedule from_job_sequences(std::shared_ptr<const Instance> instance, const JobSequences& y);

struct ScheduleReport {
    bool valid = false;
    bool complete = false;
    bool semi_active = false;
    bool non_delay = false;
    std::vector<std::string> violations;
};

ScheduleReport verify_schedule(const Instance& instance, const Schedule& schedule);

struct InstanceStats {
    std::vector<Time> machine_loads;
    std::vector<Time> job_durations;
    Time max_duration = 0;
    int num_operations = 0;
};

InstanceStats instance_stats(const Instance& instance);

}  // namespace jobshop
