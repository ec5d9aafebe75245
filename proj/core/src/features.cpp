#include "jobshop/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jobshop/errors.hpp"

namespace jobshop {

const char* to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::operations: return "operations";
        case FeatureKind::machines: return "machines";
        case FeatureKind::jobs: return "jobs";
    }
    return "?";
}

namespace {

std::size_t entity_count(const Instance& instance, FeatureKind kind) {
    switch (kind) {
        case FeatureKind::operations: return static_cast<std::size_t>(instance.num_operations());
        case FeatureKind::machines: return static_cast<std::size_t>(instance.num_machines());
        case FeatureKind::jobs: return static_cast<std::size_t>(instance.num_jobs());
    }
    return 0;
}

std::vector<FeatureKind> resolve_kinds(FeatureObserverType type, std::vector<FeatureKind> requested) {
    const auto supported = supported_kinds(type);
    if (requested.empty()) return supported;
    for (auto k : requested)
        if (std::find(supported.begin(), supported.end(), k) == supported.end())
            throw ConfigError(std::string(to_string(type)) + " has no " + to_string(k) + " features");
    return requested;
}

// Machine list end times are non-decreasing, so the last operation decides.
bool machine_has_ongoing(const Dispatcher& d, int machine, Time t) {
    const auto seq = d.schedule().machine_sequence(machine);
    return !seq.empty() && seq.back().end_time() > t;
}

bool job_has_ongoing(const Dispatcher& d, int job, Time t) {
    return d.job_next_position()[static_cast<std::size_t>(job)] > 0 && d.job_frontier()[static_cast<std::size_t>(job)] > t;
}

class StatusObserver final : public FeatureObserver {
public:
    StatusObserver(const Dispatcher& dispatcher, StatusKind status, std::vector<FeatureKind> kinds)
        : FeatureObserver(dispatcher, name_of(status), std::move(kinds)), status_(status) {
        initialize_features();
    }

    void initialize_features() override { refresh(); }
    void update(const ScheduledOperation&) override { refresh(); }

private:
    static std::string name_of(StatusKind status) {
        switch (status) {
            case StatusKind::ready: return "is_ready";
            case StatusKind::scheduled: return "is_scheduled";
            case StatusKind::completed: return "is_completed";
        }
        return "?";
    }

    void refresh() {
        const Dispatcher& d = dispatcher();
        const Instance& inst = d.instance();
        const Time t = d.current_time();
        std::vector<char> op_flag(static_cast<std::size_t>(inst.num_operations()), 0);
        switch (status_) {
            case StatusKind::ready:
                for (const auto& op : d.available_operations()) op_flag[static_cast<std::size_t>(op.operation_id)] = 1;
                break;
            case StatusKind::scheduled:
                for (const auto& op : inst.operations()) op_flag[static_cast<std::size_t>(op.operation_id)] = d.is_dispatched(op);
                break;
            case StatusKind::completed:
                for (const auto& op : inst.operations()) op_flag[static_cast<std::size_t>(op.operation_id)] = d.is_completed(op);
                break;
        }
        if (has(FeatureKind::operations)) {
            auto& m = matrix(FeatureKind::operations);
            for (std::size_t i = 0; i < op_flag.size(); ++i) m(i, 0) = op_flag[i];
        }
        if (has(FeatureKind::machines)) {
            auto& m = matrix(FeatureKind::machines);
            for (int k = 0; k < inst.num_machines(); ++k) m(static_cast<std::size_t>(k), 0) = entity_flag(inst.operations_on_machine(k), op_flag, t, k, true);
        }
        if (has(FeatureKind::jobs)) {
            auto& m = matrix(FeatureKind::jobs);
            for (int j = 0; j < inst.num_jobs(); ++j) {
                std::vector<int> ids;
                for (const auto& op : inst.job(j)) ids.push_back(op.operation_id);
                m(static_cast<std::size_t>(j), 0) = entity_flag(ids, op_flag, t, j, false);
            }
        }
    }

    double entity_flag(const std::vector<int>& ids, const std::vector<char>& op_flag, Time t, int entity, bool machine) const {
        switch (status_) {
            case StatusKind::ready:
                return std::any_of(ids.begin(), ids.end(), [&](int id) { return op_flag[static_cast<std::size_t>(id)] != 0; });
            case StatusKind::scheduled:
                return machine ? machine_has_ongoing(dispatcher(), entity, t) : job_has_ongoing(dispatcher(), entity, t);
            case StatusKind::completed:
                return std::all_of(ids.begin(), ids.end(), [&](int id) { return op_flag[static_cast<std::size_t>(id)] != 0; });
        }
        return 0.0;
    }

    StatusKind status_;
};

class DurationObserver final : public FeatureObserver {
public:
    DurationObserver(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds)
        : FeatureObserver(dispatcher, "duration", std::move(kinds)) {
        initialize_features();
    }

    void initialize_features() override {
        const Instance& inst = dispatcher().instance();
        if (has(FeatureKind::machines)) {
            auto& m = matrix(FeatureKind::machines);
            std::fill(m.data.begin(), m.data.end(), 0.0);
        }
        if (has(FeatureKind::jobs)) {
            auto& m = matrix(FeatureKind::jobs);
            std::fill(m.data.begin(), m.data.end(), 0.0);
        }
        for (const auto& op : inst.operations()) {
            if (!dispatcher().is_dispatched(op)) add_remaining(op, static_cast<double>(op.duration));
        }
        refresh_operations();
    }

    void update(const ScheduledOperation& scheduled) override {
        add_remaining(scheduled.operation, -static_cast<double>(scheduled.operation.duration));
        refresh_operations();
    }

private:
    void add_remaining(const Operation& op, double delta) {
        if (has(FeatureKind::machines)) matrix(FeatureKind::machines)(static_cast<std::size_t>(op.machine_id), 0) += delta;
        if (has(FeatureKind::jobs)) matrix(FeatureKind::jobs)(static_cast<std::size_t>(op.job_id), 0) += delta;
    }

    void refresh_operations() {
        if (!has(FeatureKind::operations)) return;
        const Dispatcher& d = dispatcher();
        const Time t = d.current_time();
        auto& m = matrix(FeatureKind::operations);
        for (const auto& op : d.instance().operations()) {
            double value = static_cast<double>(op.duration);
            if (auto start = d.start_time(op.operation_id)) value = static_cast<double>(std::max<Time>(*start + op.duration - t, 0));
            m(static_cast<std::size_t>(op.operation_id), 0) = value;
        }
    }
};

class PositionInJobObserver final : public FeatureObserver {
public:
    explicit PositionInJobObserver(const Dispatcher& dispatcher)
        : FeatureObserver(dispatcher, "position_in_job", {FeatureKind::operations}) {
        initialize_features();
    }

    void initialize_features() override {
        const Dispatcher& d = dispatcher();
        auto& m = matrix(FeatureKind::operations);
        for (const auto& op : d.instance().operations())
            m(static_cast<std::size_t>(op.operation_id), 0) =
                op.position_in_job - d.job_next_position()[static_cast<std::size_t>(op.job_id)];
    }

    void update(const ScheduledOperation& scheduled) override {
        auto& m = matrix(FeatureKind::operations);
        for (const auto& op : dispatcher().instance().job(scheduled.operation.job_id)) m(static_cast<std::size_t>(op.operation_id), 0) -= 1.0;
    }
};

class RemainingOperationsObserver final : public FeatureObserver {
public:
    RemainingOperationsObserver(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds)
        : FeatureObserver(dispatcher, "remaining_operations", std::move(kinds)) {
        initialize_features();
    }

    void initialize_features() override {
        for (auto kind : {FeatureKind::machines, FeatureKind::jobs})
            if (has(kind)) std::fill(matrix(kind).data.begin(), matrix(kind).data.end(), 0.0);
        for (const auto& op : dispatcher().instance().operations())
            if (!dispatcher().is_dispatched(op)) add(op, 1.0);
    }

    void update(const ScheduledOperation& scheduled) override { add(scheduled.operation, -1.0); }

private:
    void add(const Operation& op, double delta) {
        if (has(FeatureKind::machines)) matrix(FeatureKind::machines)(static_cast<std::size_t>(op.machine_id), 0) += delta;
        if (has(FeatureKind::jobs)) matrix(FeatureKind::jobs)(static_cast<std::size_t>(op.job_id), 0) += delta;
    }
};

}  // namespace

FeatureObserver::FeatureObserver(const Dispatcher& dispatcher, std::string name, std::vector<FeatureKind> kinds)
    : dispatcher_(&dispatcher), name_(std::move(name)) {
    for (auto kind : kinds) features_.emplace(kind, Matrix(entity_count(dispatcher.instance(), kind), 1));
}

std::vector<std::string> FeatureObserver::column_names(FeatureKind kind) const {
    const auto it = features_.find(kind);
    if (it == features_.end()) return {};
    if (it->second.cols == 1) return {name_};
    std::vector<std::string> names;
    for (std::size_t c = 0; c < it->second.cols; ++c) names.push_back(name_ + "_" + std::to_string(c));
    return names;
}

EarliestStartObserver::EarliestStartObserver(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds)
    : FeatureObserver(dispatcher, "earliest_start_time", std::move(kinds)) {
    initialize_features();
}

void EarliestStartObserver::initialize_features() {
    const Dispatcher& d = dispatcher();
    const Instance& inst = d.instance();
    est_.assign(static_cast<std::size_t>(inst.num_operations()), 0);
    for (const auto& op : inst.operations())
        if (auto start = d.start_time(op.operation_id)) est_[static_cast<std::size_t>(op.operation_id)] = *start;
    for (int j = 0; j < inst.num_jobs(); ++j) propagate_job(j, d.job_next_position()[static_cast<std::size_t>(j)]);
    refresh();
}

void EarliestStartObserver::propagate_job(int job_id, int from_position) {
    const Dispatcher& d = dispatcher();
    const auto ops = d.instance().job(job_id);
    const int next = d.job_next_position()[static_cast<std::size_t>(job_id)];
    Time ready = d.job_frontier()[static_cast<std::size_t>(job_id)];
    if (from_position > next) {
        const auto& prev = ops[static_cast<std::size_t>(from_position - 1)];
        ready = est_[static_cast<std::size_t>(prev.operation_id)] + prev.duration;
    }
    for (auto k = static_cast<std::size_t>(std::max(from_position, next)); k < ops.size(); ++k) {
        const auto& op = ops[k];
        const Time est = std::max(ready, d.machine_frontier()[static_cast<std::size_t>(op.machine_id)]);
        est_[static_cast<std::size_t>(op.operation_id)] = est;
        ready = est + op.duration;
    }
}

void EarliestStartObserver::update(const ScheduledOperation& scheduled) {
    const Dispatcher& d = dispatcher();
    const Instance& inst = d.instance();
    est_[static_cast<std::size_t>(scheduled.operation.operation_id)] = scheduled.start_time;
    propagate_job(scheduled.operation.job_id, d.job_next_position()[static_cast<std::size_t>(scheduled.operation.job_id)]);

    // Undispatched operations on the machine may now start later; each
    // affected job is re-propagated from its earliest affected position.
    const Time frontier = d.machine_frontier()[static_cast<std::size_t>(scheduled.machine_id)];
    std::vector<int> first_affected(static_cast<std::size_t>(inst.num_jobs()), std::numeric_limits<int>::max());
    bool any = false;
    for (int id : inst.operations_on_machine(scheduled.machine_id)) {
        const auto& op = inst.operation(id);
        if (d.is_dispatched(op) || est_[static_cast<std::size_t>(id)] >= frontier) continue;
        auto& slot = first_affected[static_cast<std::size_t>(op.job_id)];
        slot = std::min(slot, op.position_in_job);
        any = true;
    }
    if (any)
        for (int j = 0; j < inst.num_jobs(); ++j)
            if (first_affected[static_cast<std::size_t>(j)] != std::numeric_limits<int>::max())
                propagate_job(j, first_affected[static_cast<std::size_t>(j)]);
    refresh();
}

void EarliestStartObserver::refresh() {
    const Dispatcher& d = dispatcher();
    const Instance& inst = d.instance();
    const Time t = d.current_time();
    if (has(FeatureKind::operations)) {
        auto& m = matrix(FeatureKind::operations);
        for (std::size_t i = 0; i < est_.size(); ++i) m(i, 0) = static_cast<double>(est_[i] - t);
    }
    if (has(FeatureKind::machines)) {
        auto& m = matrix(FeatureKind::machines);
        for (int k = 0; k < inst.num_machines(); ++k) {
            Time best = std::numeric_limits<Time>::max();
            for (int id : inst.operations_on_machine(k))
                if (!d.is_dispatched(inst.operation(id))) best = std::min(best, est_[static_cast<std::size_t>(id)]);
            m(static_cast<std::size_t>(k), 0) = best == std::numeric_limits<Time>::max() ? 0.0 : static_cast<double>(best - t);
        }
    }
    if (has(FeatureKind::jobs)) {
        auto& m = matrix(FeatureKind::jobs);
        for (int j = 0; j < inst.num_jobs(); ++j)
            m(static_cast<std::size_t>(j), 0) =
                d.job_done(j) ? 0.0 : static_cast<double>(est_[static_cast<std::size_t>(d.next_operation(j).operation_id)] - t);
    }
}

std::vector<FeatureKind> supported_kinds(FeatureObserverType type) {
    switch (type) {
        case FeatureObserverType::position_in_job: return {FeatureKind::operations};
        case FeatureObserverType::remaining_operations: return {FeatureKind::machines, FeatureKind::jobs};
        default: return {FeatureKind::operations, FeatureKind::machines, FeatureKind::jobs};
    }
}

const char* to_string(FeatureObserverType type) {
    switch (type) {
        case FeatureObserverType::is_ready: return "is_ready";
        case FeatureObserverType::is_scheduled: return "is_scheduled";
        case FeatureObserverType::is_completed: return "is_completed";
        case FeatureObserverType::earliest_start_time: return "earliest_start_time";
        case FeatureObserverType::duration: return "duration";
        case FeatureObserverType::position_in_job: return "position_in_job";
        case FeatureObserverType::remaining_operations: return "remaining_operations";
    }
    return "?";
}

FeatureObserverType feature_observer_type(const std::string& name) {
    for (auto type : {FeatureObserverType::is_ready, FeatureObserverType::is_scheduled, FeatureObserverType::is_completed,
                      FeatureObserverType::earliest_start_time, FeatureObserverType::duration,
                      FeatureObserverType::position_in_job, FeatureObserverType::remaining_operations})
        if (name == to_string(type)) return type;
    throw ConfigError("unknown feature observer '" + name + "'");
}

std::unique_ptr<FeatureObserver> status_features(const Dispatcher& dispatcher, StatusKind kind, std::vector<FeatureKind> kinds) {
    const auto type = kind == StatusKind::ready       ? FeatureObserverType::is_ready
                      : kind == StatusKind::scheduled ? FeatureObserverType::is_scheduled
                                                      : FeatureObserverType::is_completed;
    return std::make_unique<StatusObserver>(dispatcher, kind, resolve_kinds(type, std::move(kinds)));
}

std::unique_ptr<EarliestStartObserver> earliest_start_observer(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds) {
    return std::make_unique<EarliestStartObserver>(dispatcher,
                                                   resolve_kinds(FeatureObserverType::earliest_start_time, std::move(kinds)));
}

std::unique_ptr<FeatureObserver> duration_observer(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds) {
    return std::make_unique<DurationObserver>(dispatcher, resolve_kinds(FeatureObserverType::duration, std::move(kinds)));
}

std::unique_ptr<FeatureObserver> position_in_job_observer(const Dispatcher& dispatcher) {
    return std::make_unique<PositionInJobObserver>(dispatcher);
}

std::unique_ptr<FeatureObserver> remaining_operations_observer(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds) {
    return std::make_unique<RemainingOperationsObserver>(
        dispatcher, resolve_kinds(FeatureObserverType::remaining_operations, std::move(kinds)));
}

std::unique_ptr<FeatureObserver> make_feature_observer(const Dispatcher& dispatcher, const FeatureObserverConfig& config) {
    switch (config.type) {
        case FeatureObserverType::is_ready: return status_features(dispatcher, StatusKind::ready, config.kinds);
        case FeatureObserverType::is_scheduled: return status_features(dispatcher, StatusKind::scheduled, config.kinds);
        case FeatureObserverType::is_completed: return status_features(dispatcher, StatusKind::completed, config.kinds);
        case FeatureObserverType::earliest_start_time: return earliest_start_observer(dispatcher, config.kinds);
        case FeatureObserverType::duration: return duration_observer(dispatcher, config.kinds);
        case FeatureObserverType::position_in_job:
            resolve_kinds(config.type, config.kinds);
            return position_in_job_observer(dispatcher);
        case FeatureObserverType::remaining_operations: return remaining_operations_observer(dispatcher, config.kinds);
    }
    throw ConfigError("unknown feature observer type");
}

CompositeFeatureObserver::CompositeFeatureObserver(std::vector<std::unique_ptr<FeatureObserver>> observers)
    : observers_(std::move(observers)) {
    for (const auto& o : observers_)
        for (const auto& [kind, m] : o->features()) widths_[kind] += m.cols;
}

namespace {

std::vector<std::unique_ptr<FeatureObserver>> build_observers(const Dispatcher& dispatcher,
                                                              const std::vector<FeatureObserverConfig>& configs) {
    std::vector<std::unique_ptr<FeatureObserver>> observers;
    for (const auto& c : configs) observers.push_back(make_feature_observer(dispatcher, c));
    return observers;
}

}  // namespace

CompositeFeatureObserver::CompositeFeatureObserver(const Dispatcher& dispatcher,
                                                   const std::vector<FeatureObserverConfig>& configs)
    : CompositeFeatureObserver(build_observers(dispatcher, configs)) {}

void CompositeFeatureObserver::update(const ScheduledOperation& scheduled) {
    for (auto& o : observers_) o->update(scheduled);
}

void CompositeFeatureObserver::reset() {
    for (auto& o : observers_) o->reset();
}

FeatureMap CompositeFeatureObserver::features() const {
    FeatureMap out;
    for (const auto& [kind, width] : widths_) {
        std::size_t rows = 0;
        std::size_t total = 0;
        for (const auto& o : observers_) {
            auto it = o->features().find(kind);
            if (it == o->features().end()) continue;
            rows = it->second.rows;
            total += it->second.cols;
        }
        if (total != width)
            throw WidthMismatchError(std::string(to_string(kind)) + " features changed width from " + std::to_string(width) +
                                     " to " + std::to_string(total));
        Matrix m(rows, width);
        std::size_t col = 0;
        for (const auto& o : observers_) {
            auto it = o->features().find(kind);
            if (it == o->features().end()) continue;
            const Matrix& part = it->second;
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < part.cols; ++c) m(r, col + c) = part(r, c);
            col += part.cols;
        }
        out.emplace(kind, std::move(m));
    }
    return out;
}

std::map<FeatureKind, std::vector<std::string>> CompositeFeatureObserver::column_names() const {
    std::map<FeatureKind, std::vector<std::string>> names;
    for (const auto& [kind, _] : widths_)
        for (const auto& o : observers_)
            for (auto& n : o->column_names(kind)) names[kind].push_back(std::move(n));
    return names;
}

void normalize_in_place(Matrix& matrix) {
    double max_abs = 0.0;
    for (double v : matrix.data) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0) return;
    for (double& v : matrix.data) v /= max_abs;
}

FeatureMap normalize(FeatureMap features) {
    for (auto& [_, m] : features) normalize_in_place(m);
    return features;
}

Matrix append_job_columns(const Instance& instance, const Matrix& operations, const Matrix& jobs) {
    if (operations.rows != static_cast<std::size_t>(instance.num_operations()))
        throw ShapeError("operation matrix must have one row per operation");
    Matrix out(operations.rows, operations.cols + jobs.cols);
    for (const auto& op : instance.operations()) {
        const auto r = static_cast<std::size_t>(op.operation_id);
        for (std::size_t c = 0; c < operations.cols; ++c) out(r, c) = operations(r, c);
        for (std::size_t c = 0; c < jobs.cols; ++c) out(r, operations.cols + c) = jobs(static_cast<std::size_t>(op.job_id), c);
    }
    return out;
}

}  // namespace jobshop
