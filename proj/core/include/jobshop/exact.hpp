#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "jobshop/env.hpp"

namespace jobshop {

struct ExactResult {
    Schedule schedule;
    // The search was exhausted, so the makespan is optimal.
    bool proven_optimal = false;
    Time lower_bound = 0;
    std::size_t nodes = 0;
    double seconds = 0.0;
};

// Branch-and-bound over active schedules (Giffler-Thompson branching). The
// bound is the largest of job and machine remaining-work bounds; the
// incumbent starts from the best dispatching-rule schedule. On timeout the
// best schedule found is returned with proven_optimal false.
ExactResult solve_exact(std::shared_ptr<const Instance> instance, double time_limit_seconds = 60.0);

// Labels an operation optimal when it is next on its machine in a
// reference schedule. Subscribe it to the replaying dispatcher.
class OptimalLabeler : public DispatcherObserver {
public:
    explicit OptimalLabeler(const Schedule& reference);

    bool is_optimal(const Operation& operation) const;
    std::vector<std::uint8_t> labels(std::span<const Operation> operations) const;
    std::span<const std::size_t> cursors() const noexcept { return cursor_; }

    void update(const ScheduledOperation& scheduled) override;
    void reset() override;

private:
    std::vector<std::vector<int>> sequences_;
    std::vector<std::size_t> cursor_;
};

// Decides which replay steps are sampled: step k of the current instance
// is sampled when (k + C) mod n == 0, where C counts the steps of all
// previously processed instances.
class StepSampler {
public:
    explicit StepSampler(std::size_t period);

    std::size_t period() const noexcept { return period_; }
    std::size_t global_steps() const noexcept { return global_; }
    bool sampled(std::size_t step) const noexcept { return (step + global_) % period_ == 0; }
    void finish_instance(std::size_t steps) noexcept { global_ += steps; }

private:
    std::size_t period_;
    std::size_t global_ = 0;
};

struct ExportConfig {
    std::size_t sample_every = 1;
    GraphBuilderType graph = GraphBuilderType::resource_task;
    UpdaterConfig updater;
    std::vector<FeatureObserverConfig> features = default_feature_configs();
    bool normalize = true;
    std::vector<std::string> filter = {"do"};
    // Receives a message whenever a step falls back to the unfiltered set.
    std::function<void(const std::string&)> log;
};

struct ExportedSample {
    std::size_t instance_index = 0;
    std::size_t step = 0;
    std::size_t global_step = 0;
    std::size_t num_available = 0;
    std::size_t num_positive = 0;
};

struct InstanceExport {
    std::string name;
    std::size_t num_steps = 0;
    Time makespan = 0;
    // Steps meeting the sampling condition, emitted or not.
    std::vector<std::size_t> sampled_steps;
    std::vector<std::size_t> emitted_steps;
    std::size_t fallback_steps = 0;
};

struct ExportManifest {
    std::size_t sample_every = 1;
    std::size_t global_steps = 0;
    std::string filter;
    std::string graph;
    std::vector<InstanceExport> instances;
    std::vector<ExportedSample> samples;
    // Column names of each node type's feature matrix in the records.
    std::map<std::string, std::vector<std::string>> columns;
};

// Receives every emitted sample; labels cover the active operation rows.
using RecordSink = std::function<void(const ExportedSample&, const DatasetRecord&)>;

// Replays each complete reference schedule in order, dispatching the first
// optimal available operation at every step. Sampled steps with at least
// two available operations are passed to the sink. Throws DesyncError if
// no available operation is optimal even without filtering.
ExportManifest export_dataset(std::span<const Schedule> references, const ExportConfig& config, const RecordSink& sink);

std::string manifest_to_json(const ExportManifest& manifest);

// Writes manifest.json and record_<index>.bin files into the directory.
ExportManifest write_dataset(const std::filesystem::path& directory, std::span<const Schedule> references,
                             const ExportConfig& config);

}  // namespace jobshop
