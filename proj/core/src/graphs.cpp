#include "jobshop/graphs.hpp"

#include <algorithm>

#include "jobshop/errors.hpp"

namespace jobshop {

const char* to_string(NodeType type) {
    switch (type) {
        case NodeType::operation: return "operation";
        case NodeType::machine: return "machine";
        case NodeType::job: return "job";
        case NodeType::global: return "global";
        case NodeType::source: return "source";
        case NodeType::sink: return "sink";
    }
    return "?";
}

EdgeType edge_type(NodeType src, NodeType dst) { return {to_string(src), "to", to_string(dst)}; }

JobShopGraph::JobShopGraph(std::shared_ptr<const Instance> instance) : instance_(std::move(instance)) {
    if (!instance_) throw ValidationError("graph requires an instance");
    for (const auto& op : instance_->operations()) {
        const int id = add_node(NodeType::operation, op.operation_id);
        nodes_[static_cast<std::size_t>(id)].machine_id = op.machine_id;
        nodes_[static_cast<std::size_t>(id)].job_id = op.job_id;
    }
}

int JobShopGraph::add_node(NodeType type, int entity_id) {
    Node node;
    node.id = static_cast<int>(nodes_.size());
    node.type = type;
    switch (type) {
        case NodeType::operation: node.operation_id = entity_id; break;
        case NodeType::machine: node.machine_id = entity_id; break;
        case NodeType::job: node.job_id = entity_id; break;
        default: break;
    }
    nodes_.push_back(node);
    removed_.push_back(0);
    out_.emplace_back();
    in_.emplace_back();
    return node.id;
}

void JobShopGraph::check_node(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) throw ValidationError("node " + std::to_string(id) + " does not exist");
    if (removed_[static_cast<std::size_t>(id)]) throw ValidationError("node " + std::to_string(id) + " was removed");
}

void JobShopGraph::add_edge(int src, int dst, EdgeLabel label, std::optional<EdgeType> type) {
    check_node(src);
    check_node(dst);
    EdgeType key = type ? std::move(*type) : edge_type(node(src).type, node(dst).type);
    edges_.insert_or_assign({src, dst}, EdgeData{label, std::move(key)});
    out_[static_cast<std::size_t>(src)].insert(dst);
    in_[static_cast<std::size_t>(dst)].insert(src);
}

bool JobShopGraph::remove_edge(int src, int dst) {
    if (edges_.erase({src, dst}) == 0) return false;
    out_[static_cast<std::size_t>(src)].erase(dst);
    in_[static_cast<std::size_t>(dst)].erase(src);
    return true;
}

void JobShopGraph::remove_node(int id) {
    check_node(id);
    const auto i = static_cast<std::size_t>(id);
    for (int dst : std::vector<int>(out_[i].begin(), out_[i].end())) remove_edge(id, dst);
    for (int src : std::vector<int>(in_[i].begin(), in_[i].end())) remove_edge(src, id);
    removed_[i] = 1;
}

std::size_t JobShopGraph::remove_isolated_nodes() {
    std::size_t count = 0;
    for (const auto& n : nodes_) {
        const auto i = static_cast<std::size_t>(n.id);
        const bool prunable = n.type == NodeType::source || n.type == NodeType::sink || n.type == NodeType::global;
        if (prunable && !removed_[i] && out_[i].empty() && in_[i].empty()) {
            removed_[i] = 1;
            ++count;
        }
    }
    return count;
}

std::size_t JobShopGraph::count_edges(EdgeLabel label) const {
    return static_cast<std::size_t>(
        std::count_if(edges_.begin(), edges_.end(), [&](const auto& e) { return e.second.label == label; }));
}

std::vector<int> JobShopGraph::nodes_by_type(NodeType type) const {
    std::vector<int> ids;
    for (const auto& n : nodes_)
        if (n.type == type) ids.push_back(n.id);
    return ids;
}

bool JobShopGraph::has_type(NodeType type) const {
    return std::any_of(nodes_.begin(), nodes_.end(), [&](const Node& n) { return n.type == type; });
}

std::vector<bool> JobShopGraph::removed_nodes() const {
    std::vector<bool> out(removed_.size());
    for (std::size_t i = 0; i < removed_.size(); ++i) out[i] = removed_[i] != 0;
    return out;
}

std::size_t JobShopGraph::num_active_nodes() const {
    return static_cast<std::size_t>(std::count(removed_.begin(), removed_.end(), 0));
}

int JobShopGraph::machine_node(int machine_id) const {
    for (const auto& n : nodes_)
        if (n.type == NodeType::machine && n.machine_id == machine_id) return n.id;
    return -1;
}

int JobShopGraph::job_node(int job_id) const {
    for (const auto& n : nodes_)
        if (n.type == NodeType::job && n.job_id == job_id) return n.id;
    return -1;
}

std::vector<int> JobShopGraph::successors(int id) const {
    const auto& s = out_.at(static_cast<std::size_t>(id));
    return {s.begin(), s.end()};
}

std::vector<int> JobShopGraph::predecessors(int id) const {
    const auto& s = in_.at(static_cast<std::size_t>(id));
    return {s.begin(), s.end()};
}

std::vector<Edge> JobShopGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [key, data] : edges_) out.push_back({key.first, key.second, data.label, data.type});
    return out;
}

std::pair<std::vector<int>, std::vector<int>> JobShopGraph::edge_index() const {
    std::pair<std::vector<int>, std::vector<int>> coo;
    coo.first.reserve(edges_.size());
    coo.second.reserve(edges_.size());
    for (const auto& [key, _] : edges_) {
        coo.first.push_back(key.first);
        coo.second.push_back(key.second);
    }
    return coo;
}

namespace {

void add_clique(JobShopGraph& graph, const std::vector<int>& ids, EdgeLabel label = EdgeLabel::none) {
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            graph.add_edge(ids[a], ids[b], label);
            graph.add_edge(ids[b], ids[a], label);
        }
}

void add_both_ways(JobShopGraph& graph, int a, int b) {
    graph.add_edge(a, b);
    graph.add_edge(b, a);
}

std::vector<int> add_machine_nodes(JobShopGraph& graph) {
    std::vector<int> ids;
    for (int m = 0; m < graph.instance().num_machines(); ++m) ids.push_back(graph.add_node(NodeType::machine, m));
    for (const auto& op : graph.instance().operations()) add_both_ways(graph, op.operation_id, ids[static_cast<std::size_t>(op.machine_id)]);
    return ids;
}

std::vector<int> add_job_nodes(JobShopGraph& graph) {
    std::vector<int> ids;
    for (int j = 0; j < graph.instance().num_jobs(); ++j) ids.push_back(graph.add_node(NodeType::job, j));
    for (const auto& op : graph.instance().operations()) add_both_ways(graph, op.operation_id, ids[static_cast<std::size_t>(op.job_id)]);
    return ids;
}

}  // namespace

JobShopGraph build_disjunctive_graph(std::shared_ptr<const Instance> instance, bool with_source_sink) {
    JobShopGraph graph(std::move(instance));
    const Instance& inst = graph.instance();
    for (int j = 0; j < inst.num_jobs(); ++j) {
        const auto ops = inst.job(j);
        for (std::size_t k = 1; k < ops.size(); ++k)
            graph.add_edge(ops[k - 1].operation_id, ops[k].operation_id, EdgeLabel::conjunctive);
    }
    for (int m = 0; m < inst.num_machines(); ++m) add_clique(graph, inst.operations_on_machine(m), EdgeLabel::disjunctive);
    if (with_source_sink) {
        const int source = graph.add_node(NodeType::source);
        const int sink = graph.add_node(NodeType::sink);
        for (int j = 0; j < inst.num_jobs(); ++j) {
            const auto ops = inst.job(j);
            if (ops.empty()) continue;
            graph.add_edge(source, ops.front().operation_id, EdgeLabel::conjunctive);
            graph.add_edge(ops.back().operation_id, sink, EdgeLabel::conjunctive);
        }
    }
    return graph;
}

JobShopGraph build_resource_task_graph(std::shared_ptr<const Instance> instance) {
    JobShopGraph graph(std::move(instance));
    add_clique(graph, add_machine_nodes(graph));
    for (int j = 0; j < graph.instance().num_jobs(); ++j) {
        std::vector<int> ids;
        for (const auto& op : graph.instance().job(j)) ids.push_back(op.operation_id);
        add_clique(graph, ids);
    }
    return graph;
}

JobShopGraph build_resource_task_graph_with_jobs(std::shared_ptr<const Instance> instance) {
    JobShopGraph graph(std::move(instance));
    add_clique(graph, add_machine_nodes(graph));
    add_clique(graph, add_job_nodes(graph));
    return graph;
}

JobShopGraph build_resource_task_graph_complete(std::shared_ptr<const Instance> instance) {
    JobShopGraph graph(std::move(instance));
    const auto machines = add_machine_nodes(graph);
    const auto jobs = add_job_nodes(graph);
    const int global = graph.add_node(NodeType::global);
    for (int id : machines) add_both_ways(graph, global, id);
    for (int id : jobs) add_both_ways(graph, global, id);
    return graph;
}

GraphBuilderType graph_builder_type(const std::string& name) {
    if (name == "disjunctive") return GraphBuilderType::disjunctive;
    if (name == "disjunctive_with_source_sink") return GraphBuilderType::disjunctive_with_source_sink;
    if (name == "resource_task") return GraphBuilderType::resource_task;
    if (name == "resource_task_with_jobs") return GraphBuilderType::resource_task_with_jobs;
    if (name == "resource_task_complete") return GraphBuilderType::resource_task_complete;
    throw ConfigError("unknown graph builder '" + name + "'");
}

JobShopGraph build_graph(GraphBuilderType type, std::shared_ptr<const Instance> instance) {
    switch (type) {
        case GraphBuilderType::disjunctive: return build_disjunctive_graph(std::move(instance), false);
        case GraphBuilderType::disjunctive_with_source_sink: return build_disjunctive_graph(std::move(instance), true);
        case GraphBuilderType::resource_task: return build_resource_task_graph(std::move(instance));
        case GraphBuilderType::resource_task_with_jobs: return build_resource_task_graph_with_jobs(std::move(instance));
        case GraphBuilderType::resource_task_complete: return build_resource_task_graph_complete(std::move(instance));
    }
    throw ConfigError("unknown graph builder");
}

GraphUpdater::GraphUpdater(const Dispatcher& dispatcher, JobShopGraph initial)
    : dispatcher_(&dispatcher), initial_(std::move(initial)), graph_(initial_) {
    if (initial_.instance() != dispatcher.instance()) throw ValidationError("graph and dispatcher use different instances");
}

ResidualGraphUpdater::ResidualGraphUpdater(const Dispatcher& dispatcher, JobShopGraph initial, bool remove_machine_nodes,
                                           bool remove_job_nodes)
    : GraphUpdater(dispatcher, std::move(initial)),
      remove_machine_nodes_(remove_machine_nodes),
      remove_job_nodes_(remove_job_nodes) {}

void ResidualGraphUpdater::update(const ScheduledOperation&) {
    const Dispatcher& d = dispatcher();
    const Instance& inst = d.instance();
    JobShopGraph& g = mutable_graph();
    for (const auto& op : inst.operations())
        if (!g.is_removed(op.operation_id) && d.is_completed(op)) g.remove_node(op.operation_id);

    const auto all_completed = [&](auto&& ids) {
        return std::all_of(ids.begin(), ids.end(), [&](int id) { return g.is_removed(id); });
    };
    if (remove_machine_nodes_) {
        for (int id : g.nodes_by_type(NodeType::machine)) {
            if (g.is_removed(id)) continue;
            if (all_completed(inst.operations_on_machine(g.node(id).machine_id))) g.remove_node(id);
        }
    }
    if (remove_job_nodes_) {
        for (int id : g.nodes_by_type(NodeType::job)) {
            if (g.is_removed(id)) continue;
            std::vector<int> ops;
            for (const auto& op : inst.job(g.node(id).job_id)) ops.push_back(op.operation_id);
            if (all_completed(ops)) g.remove_node(id);
        }
    }
    g.remove_isolated_nodes();
}

void DisjunctiveGraphUpdater::update(const ScheduledOperation& scheduled) {
    ResidualGraphUpdater::update(scheduled);
    const Dispatcher& d = dispatcher();
    const Instance& inst = d.instance();
    JobShopGraph& g = mutable_graph();
    const int current = scheduled.operation.operation_id;
    const auto sequence = d.schedule().machine_sequence(scheduled.machine_id);
    if (sequence.size() >= 2) {
        const int previous = sequence[sequence.size() - 2].operation.operation_id;
        if (!g.is_removed(previous)) {
            if (!g.is_removed(current)) g.remove_edge(current, previous);
            for (int id : inst.operations_on_machine(scheduled.machine_id)) {
                if (d.is_dispatched(inst.operation(id))) continue;
                g.remove_edge(previous, id);
                g.remove_edge(id, previous);
            }
        }
    }
    if (!g.is_removed(current))
        for (int id : inst.operations_on_machine(scheduled.machine_id))
            if (!d.is_dispatched(inst.operation(id))) g.remove_edge(id, current);
}

AddingArcsGraphUpdater::AddingArcsGraphUpdater(const Dispatcher& dispatcher, JobShopGraph initial, bool remove_machine_nodes,
                                               bool remove_job_nodes)
    : ResidualGraphUpdater(dispatcher, std::move(initial), remove_machine_nodes, remove_job_nodes) {
    JobShopGraph& g = mutable_initial();
    for (const auto& e : g.edges())
        if (e.label == EdgeLabel::disjunctive) g.remove_edge(e.src, e.dst);
    reset();
}

void AddingArcsGraphUpdater::update(const ScheduledOperation& scheduled) {
    ResidualGraphUpdater::update(scheduled);
    const auto sequence = dispatcher().schedule().machine_sequence(scheduled.machine_id);
    if (sequence.size() < 2) return;
    const int previous = sequence[sequence.size() - 2].operation.operation_id;
    const int current = scheduled.operation.operation_id;
    JobShopGraph& g = mutable_graph();
    if (!g.is_removed(previous) && !g.is_removed(current)) g.add_edge(previous, current, EdgeLabel::disjunctive);
}

std::unique_ptr<GraphUpdater> make_updater(const Dispatcher& dispatcher, JobShopGraph initial, const UpdaterConfig& config) {
    switch (config.type) {
        case UpdaterType::residual:
            return std::make_unique<ResidualGraphUpdater>(dispatcher, std::move(initial), config.remove_machine_nodes,
                                                          config.remove_job_nodes);
        case UpdaterType::disjunctive:
            return std::make_unique<DisjunctiveGraphUpdater>(dispatcher, std::move(initial), config.remove_machine_nodes,
                                                             config.remove_job_nodes);
        case UpdaterType::adding_arcs:
            return std::make_unique<AddingArcsGraphUpdater>(dispatcher, std::move(initial), config.remove_machine_nodes,
                                                            config.remove_job_nodes);
    }
    throw ConfigError("unknown updater type");
}

}  // namespace jobshop
