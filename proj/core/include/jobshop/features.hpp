#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "jobshop/dispatching.hpp"

namespace jobshop {

enum class FeatureKind { operations, machines, jobs };

const char* to_string(FeatureKind kind);
inline constexpr FeatureKind kAllFeatureKinds[] = {FeatureKind::operations, FeatureKind::machines, FeatureKind::jobs};

// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

using FeatureMap = std::map<FeatureKind, Matrix>;

// Maintains one or more feature columns per entity kind. Rows are all
// entities of the kind in id order.
class FeatureObserver : public DispatcherObserver {
public:
    FeatureObserver(const Dispatcher& dispatcher, std::string name, std::vector<FeatureKind> kinds);

    const std::string& name() const noexcept { return name_; }
    const FeatureMap& features() const noexcept { return features_; }
    virtual std::vector<std::string> column_names(FeatureKind kind) const;

    void reset() override { initialize_features(); }
    virtual void initialize_features() = 0;

protected:
    bool has(FeatureKind kind) const { return features_.contains(kind); }
    Matrix& matrix(FeatureKind kind) { return features_.at(kind); }
    const Dispatcher& dispatcher() const noexcept { return *dispatcher_; }

private:
    const Dispatcher* dispatcher_;
    std::string name_;
    FeatureMap features_;
};

enum class StatusKind { ready, scheduled, completed };

enum class FeatureObserverType {
    is_ready,
    is_scheduled,
    is_completed,
    earliest_start_time,
    duration,
    position_in_job,
    remaining_operations,
};

// Kinds an observer supports when none are requested explicitly.
std::vector<FeatureKind> supported_kinds(FeatureObserverType type);
FeatureObserverType feature_observer_type(const std::string& name);
const char* to_string(FeatureObserverType type);

struct FeatureObserverConfig {
    FeatureObserverType type;
    // Empty selects every supported kind.
    std::vector<FeatureKind> kinds;
};

// Absolute earliest start times S* for every operation, maintained
// incrementally. Dispatched operations keep their actual start.
class EarliestStartObserver : public FeatureObserver {
public:
    EarliestStartObserver(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds);

    void initialize_features() override;
    void update(const ScheduledOperation& scheduled) override;

    std::span<const Time> earliest_start_times() const noexcept { return est_; }

private:
    void propagate_job(int job_id, int from_position);
    void refresh();

    std::vector<Time> est_;
};

std::unique_ptr<FeatureObserver> status_features(const Dispatcher& dispatcher, StatusKind kind,
                                                 std::vector<FeatureKind> kinds = {});
std::unique_ptr<EarliestStartObserver> earliest_start_observer(const Dispatcher& dispatcher,
                                                              std::vector<FeatureKind> kinds = {});
std::unique_ptr<FeatureObserver> duration_observer(const Dispatcher& dispatcher, std::vector<FeatureKind> kinds = {});
std::unique_ptr<FeatureObserver> position_in_job_observer(const Dispatcher& dispatcher);
std::unique_ptr<FeatureObserver> remaining_operations_observer(const Dispatcher& dispatcher,
                                                               std::vector<FeatureKind> kinds = {});
std::unique_ptr<FeatureObserver> make_feature_observer(const Dispatcher& dispatcher, const FeatureObserverConfig& config);

// Forwards events to its constituents in registration order and
// concatenates their columns per kind.
class CompositeFeatureObserver : public DispatcherObserver {
public:
    explicit CompositeFeatureObserver(std::vector<std::unique_ptr<FeatureObserver>> observers);
    CompositeFeatureObserver(const Dispatcher& dispatcher, const std::vector<FeatureObserverConfig>& configs);

    void update(const ScheduledOperation& scheduled) override;
    void reset() override;

    // Throws WidthMismatchError if a constituent changed width.
    FeatureMap features() const;
    std::map<FeatureKind, std::vector<std::string>> column_names() const;

    std::span<const std::unique_ptr<FeatureObserver>> observers() const noexcept { return observers_; }
    template <typename T>
    const T* find() const {
        for (const auto& o : observers_)
            if (auto* p = dynamic_cast<const T*>(o.get())) return p;
        return nullptr;
    }

private:
    std::vector<std::unique_ptr<FeatureObserver>> observers_;
    std::map<FeatureKind, std::size_t> widths_;
};

// Divides each matrix by its largest absolute entry; all-zero matrices are
// returned unchanged.
FeatureMap normalize(FeatureMap features);
void normalize_in_place(Matrix& matrix);

// Appends the row of each operation's job to the operation row.
Matrix append_job_columns(const Instance& instance, const Matrix& operations, const Matrix& jobs);

}  // namespace jobshop
