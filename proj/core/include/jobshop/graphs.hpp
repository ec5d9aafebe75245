#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jobshop/dispatching.hpp"

namespace jobshop {

enum class NodeType { operation, machine, job, global, source, sink };

// Lower-case name used in edge keys ("operation", "machine", ...).
const char* to_string(NodeType type);

struct Node {
    int id = 0;
    NodeType type = NodeType::operation;
    // Set for operation nodes.
    int operation_id = -1;
    // Set for operation and machine nodes.
    int machine_id = -1;
    // Set for operation and job nodes.
    int job_id = -1;

    friend bool operator==(const Node&, const Node&) = default;
};

// Typed edge key, e.g. ("operation", "to", "machine").
struct EdgeType {
    std::string src;
    std::string relation = "to";
    std::string dst;

    std::string str() const { return src + "," + relation + "," + dst; }
    friend auto operator<=>(const EdgeType&, const EdgeType&) = default;
};

EdgeType edge_type(NodeType src, NodeType dst);

enum class EdgeLabel { none, conjunctive, disjunctive };

struct Edge {
    int src = 0;
    int dst = 0;
    EdgeLabel label = EdgeLabel::none;
    EdgeType type;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed scheduling graph over an instance. Operation nodes are created
// first, so an operation's node id equals its operation_id. Removal is a
// mask; ids are never reused.
class JobShopGraph {
public:
    explicit JobShopGraph(std::shared_ptr<const Instance> instance);

    const Instance& instance() const noexcept { return *instance_; }
    const std::shared_ptr<const Instance>& instance_ptr() const noexcept { return instance_; }

    int add_node(NodeType type, int entity_id = -1);
    // Throws ValidationError for unknown or removed endpoints. The type
    // defaults to the one derived from the endpoint node types.
    void add_edge(int src, int dst, EdgeLabel label = EdgeLabel::none, std::optional<EdgeType> type = std::nullopt);
    bool remove_edge(int src, int dst);
    bool has_edge(int src, int dst) const { return edges_.contains({src, dst}); }
    // Drops the node's incident edges and marks it removed.
    void remove_node(int id);
    // Removes edgeless SOURCE, SINK and GLOBAL nodes; returns how many.
    std::size_t remove_isolated_nodes();

    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::size_t count_edges(EdgeLabel label) const;
    const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    // Ids of nodes of the type, in insertion order, including removed ones.
    std::vector<int> nodes_by_type(NodeType type) const;
    bool has_type(NodeType type) const;
    bool is_removed(int id) const { return removed_.at(static_cast<std::size_t>(id)) != 0; }
    std::vector<bool> removed_nodes() const;
    std::size_t num_active_nodes() const;

    // Node of a machine or job, or -1 when the graph has none.
    int machine_node(int machine_id) const;
    int job_node(int job_id) const;

    std::vector<int> successors(int id) const;
    std::vector<int> predecessors(int id) const;

    // All edges sorted by (src, dst).
    std::vector<Edge> edges() const;
    // COO layout: row 0 sources, row 1 targets, sorted by (src, dst).
    std::pair<std::vector<int>, std::vector<int>> edge_index() const;

    friend bool operator==(const JobShopGraph& a, const JobShopGraph& b) {
        return *a.instance_ == *b.instance_ && a.nodes_ == b.nodes_ && a.removed_ == b.removed_ && a.edges_ == b.edges_;
    }

private:
    struct EdgeData {
        EdgeLabel label;
        EdgeType type;
        friend bool operator==(const EdgeData&, const EdgeData&) = default;
    };

    void check_node(int id) const;

    std::shared_ptr<const Instance> instance_;
    std::vector<Node> nodes_;
    std::vector<char> removed_;
    std::map<std::pair<int, int>, EdgeData> edges_;
    std::vector<std::set<int>> out_;
    std::vector<std::set<int>> in_;
};

// Conjunctive arcs along each job, disjunctive arcs in both directions
// between operations sharing a machine, and optionally a source linked to
// every first operation and every last operation linked to a sink.
JobShopGraph build_disjunctive_graph(std::shared_ptr<const Instance> instance, bool with_source_sink = false);
// Operation and machine nodes linked both ways, a machine clique and a
// clique among the operations of each job.
JobShopGraph build_resource_task_graph(std::shared_ptr<const Instance> instance);
// Machine nodes as above plus job nodes linked both ways to their
// operations and a job clique; no intra-job operation cliques.
JobShopGraph build_resource_task_graph_with_jobs(std::shared_ptr<const Instance> instance);
// Machine and job nodes linked to their operations and to a global node;
// no cliques.
JobShopGraph build_resource_task_graph_complete(std::shared_ptr<const Instance> instance);

enum class GraphBuilderType { disjunctive, disjunctive_with_source_sink, resource_task, resource_task_with_jobs, resource_task_complete };
GraphBuilderType graph_builder_type(const std::string& name);
JobShopGraph build_graph(GraphBuilderType type, std::shared_ptr<const Instance> instance);

// Keeps a graph in sync with a dispatcher. reset() restores the graph the
// updater was constructed with.
class GraphUpdater : public DispatcherObserver {
public:
    GraphUpdater(const Dispatcher& dispatcher, JobShopGraph initial);

    const JobShopGraph& graph() const noexcept { return graph_; }
    const JobShopGraph& initial_graph() const noexcept { return initial_; }
    void reset() override { graph_ = initial_; }

protected:
    const Dispatcher& dispatcher() const noexcept { return *dispatcher_; }
    JobShopGraph& mutable_graph() noexcept { return graph_; }
    JobShopGraph& mutable_initial() noexcept { return initial_; }

private:
    const Dispatcher* dispatcher_;
    JobShopGraph initial_;
    JobShopGraph graph_;
};

// Removes completed operation nodes (C <= current time) and, when enabled,
// machine and job nodes whose operations are all completed.
class ResidualGraphUpdater : public GraphUpdater {
public:
    ResidualGraphUpdater(const Dispatcher& dispatcher, JobShopGraph initial, bool remove_machine_nodes = true,
                         bool remove_job_nodes = true);

    void update(const ScheduledOperation& scheduled) override;

private:
    bool remove_machine_nodes_;
    bool remove_job_nodes_;
};

// Residual removal, then orients the disjunctive arcs around the newly
// scheduled operation: the arc back to the previous operation on the
// machine goes away, the previous operation loses its arcs to unscheduled
// operations, and unscheduled operations lose their arcs into the new one.
class DisjunctiveGraphUpdater : public ResidualGraphUpdater {
public:
    using ResidualGraphUpdater::ResidualGraphUpdater;
    void update(const ScheduledOperation& scheduled) override;
};

// Starts from the graph without disjunctive arcs and adds one arc from the
// previous operation on the machine to each newly scheduled operation.
class AddingArcsGraphUpdater : public ResidualGraphUpdater {
public:
    AddingArcsGraphUpdater(const Dispatcher& dispatcher, JobShopGraph initial, bool remove_machine_nodes = true,
                           bool remove_job_nodes = true);
    void update(const ScheduledOperation& scheduled) override;
};

enum class UpdaterType { residual, disjunctive, adding_arcs };

struct UpdaterConfig {
    UpdaterType type = UpdaterType::residual;
    bool remove_machine_nodes = true;
    bool remove_job_nodes = true;
};

std::unique_ptr<GraphUpdater> make_updater(const Dispatcher& dispatcher, JobShopGraph initial, const UpdaterConfig& config);

}  // namespace jobshop
