#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jobshop/dispatching.hpp"
#include "jobshop/features.hpp"
#include "jobshop/generation.hpp"
#include "jobshop/graphs.hpp"
#include "jobshop/rewards.hpp"

namespace jobshop {

// Dispatches the next operation of job_id. machine_id -1 selects the
// operation's own machine.
struct Action {
    int job_id = 0;
    int machine_id = -1;
};

struct AvailableAction {
    int operation_id = 0;
    int machine_id = 0;
    int job_id = 0;
    friend bool operator==(const AvailableAction&, const AvailableAction&) = default;
};

struct ObservationInfo {
    std::map<FeatureKind, std::vector<std::string>> feature_names;
    std::vector<AvailableAction> available_actions;
};

// Feature rows cover active entities in ascending id order. An entity is
// active when its graph node is not removed; kinds without graph nodes
// are always active. With padding, edge columns are filled with -1 pairs,
// feature rows with -1 and removed_nodes with true.
struct ObservationBundle {
    std::vector<bool> removed_nodes;
    std::vector<int> edge_src;
    std::vector<int> edge_dst;
    FeatureMap features;
    ObservationInfo info;
};

struct PaddingSpec {
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    std::size_t num_operations = 0;
    std::size_t num_machines = 0;
    std::size_t num_jobs = 0;
};

PaddingSpec padding_for(const JobShopGraph& graph);

std::vector<FeatureObserverConfig> default_feature_configs();

struct EnvConfig {
    std::vector<FeatureObserverConfig> features = default_feature_configs();
    RewardType reward = RewardType::makespan;
    UpdaterConfig updater;
    ReadyOperationsFilter filter = filter_dominated_operations;
    bool use_padding = false;
    bool normalize = false;
    // Defaults to the dimensions of the initial graph.
    std::optional<PaddingSpec> padding;
};

struct StepResult {
    ObservationBundle observation;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
};

class Environment {
public:
    explicit Environment(JobShopGraph graph, EnvConfig config = {});

    ObservationBundle reset();
    // Throws InvalidActionError for a finished job, a filtered-out
    // operation or a machine mismatch.
    StepResult step(const Action& action);
    ObservationBundle observation() const;

    // Registers an extra observer after the built-in ones, so it is
    // notified before the next observation is assembled.
    void subscribe(DispatcherObserver& observer) { dispatcher_->subscribe(observer); }

    const Instance& instance() const noexcept { return *instance_; }
    const Dispatcher& dispatcher() const noexcept { return *dispatcher_; }
    const JobShopGraph& graph() const noexcept { return updater_->graph(); }
    const CompositeFeatureObserver& features() const noexcept { return *features_; }
    const RewardObserver& reward_observer() const noexcept { return *reward_; }
    const EnvConfig& config() const noexcept { return config_; }
    const PaddingSpec& padding() const noexcept { return padding_; }

private:
    std::shared_ptr<const Instance> instance_;
    EnvConfig config_;
    PaddingSpec padding_;
    std::unique_ptr<Dispatcher> dispatcher_;
    std::unique_ptr<GraphUpdater> updater_;
    std::unique_ptr<CompositeFeatureObserver> features_;
    std::unique_ptr<RewardObserver> reward_;
};

using GraphInitializer = std::function<JobShopGraph(std::shared_ptr<const Instance>)>;

// Draws a new instance from the generator on every reset. Padding targets
// the generator's largest possible instance.
class MultiEnvironment {
public:
    MultiEnvironment(InstanceGenerator generator, GraphInitializer initializer, EnvConfig config = {});

    ObservationBundle reset();
    StepResult step(const Action& action);

    // Throws NotReadyError before the first reset.
    const Environment& current() const;
    const PaddingSpec& padding() const noexcept { return padding_; }

private:
    InstanceGenerator generator_;
    GraphInitializer initializer_;
    EnvConfig config_;
    PaddingSpec padding_;
    std::unique_ptr<Environment> env_;
};

using EdgeIndex = std::pair<std::vector<int>, std::vector<int>>;

// Per-type view of an unpadded observation: node ids are local to their
// type and count from 0 over non-removed nodes.
struct RemappedObservation {
    std::map<EdgeType, EdgeIndex> edge_index_dict;
    std::map<NodeType, Matrix> node_features_dict;
    std::map<NodeType, std::vector<int>> original_ids_dict;
};

// Operation rows receive the job columns when the graph has no job nodes.
// Throws UnknownNodeTypeError for edges touching source or sink nodes.
RemappedObservation remap_resource_task_observation(const ObservationBundle& observation, const JobShopGraph& graph);

// Flat little-endian record: version byte, removed_nodes, edge index per
// typed key, features per node type, labels. Features are stored as float32.
struct DatasetRecord {
    std::vector<bool> removed_nodes;
    std::map<std::string, std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>>> edges;
    std::map<std::string, Matrix> features;
    std::vector<std::uint8_t> labels;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

inline constexpr std::uint8_t kRecordVersion = 1;

DatasetRecord make_record(const ObservationBundle& observation, const RemappedObservation& remapped,
                          std::vector<std::uint8_t> labels);
void write_record(std::ostream& out, const DatasetRecord& record);
// Throws SerializationError on truncated input or an unknown version.
DatasetRecord read_record(std::istream& in);

}  // namespace jobshop
