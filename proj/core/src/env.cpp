#include "jobshop/env.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>

#include "jobshop/errors.hpp"

namespace jobshop {

PaddingSpec padding_for(const JobShopGraph& graph) {
    const Instance& inst = graph.instance();
    return {graph.num_nodes(), graph.num_edges(), static_cast<std::size_t>(inst.num_operations()),
            static_cast<std::size_t>(inst.num_machines()), static_cast<std::size_t>(inst.num_jobs())};
}

std::vector<FeatureObserverConfig> default_feature_configs() {
    return {
        {FeatureObserverType::is_scheduled, {}},
        {FeatureObserverType::earliest_start_time, {}},
        {FeatureObserverType::duration, {}},
        {FeatureObserverType::position_in_job, {}},
        {FeatureObserverType::remaining_operations, {}},
    };
}

namespace {

NodeType node_type_of(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::operations: return NodeType::operation;
        case FeatureKind::machines: return NodeType::machine;
        case FeatureKind::jobs: return NodeType::job;
    }
    return NodeType::operation;
}

// Entity ids of the kind whose rows appear in the observation.
std::vector<int> active_entities(const JobShopGraph& graph, FeatureKind kind) {
    const Instance& inst = graph.instance();
    std::vector<int> ids;
    if (kind == FeatureKind::operations) {
        for (const auto& op : inst.operations())
            if (!graph.is_removed(op.operation_id)) ids.push_back(op.operation_id);
        return ids;
    }
    const NodeType type = node_type_of(kind);
    if (!graph.has_type(type)) {
        const int count = kind == FeatureKind::machines ? inst.num_machines() : inst.num_jobs();
        for (int i = 0; i < count; ++i) ids.push_back(i);
        return ids;
    }
    for (int id : graph.nodes_by_type(type)) {
        if (graph.is_removed(id)) continue;
        const Node& n = graph.node(id);
        ids.push_back(kind == FeatureKind::machines ? n.machine_id : n.job_id);
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

Matrix select_rows(const Matrix& m, const std::vector<int>& rows) {
    Matrix out(rows.size(), m.cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m.cols; ++c) out(r, c) = m(static_cast<std::size_t>(rows[r]), c);
    return out;
}

void pad_rows(Matrix& m, std::size_t rows) {
    if (m.rows > rows) throw ShapeError("feature matrix exceeds padding size");
    m.data.resize(rows * m.cols, -1.0);
    m.rows = rows;
}

std::size_t padded_rows(const PaddingSpec& padding, FeatureKind kind) {
    switch (kind) {
        case FeatureKind::operations: return padding.num_operations;
        case FeatureKind::machines: return padding.num_machines;
        case FeatureKind::jobs: return padding.num_jobs;
    }
    return 0;
}

}  // namespace

Environment::Environment(JobShopGraph graph, EnvConfig config)
    : instance_(graph.instance_ptr()), config_(std::move(config)) {
    padding_ = config_.padding.value_or(padding_for(graph));
    dispatcher_ = std::make_unique<Dispatcher>(instance_, config_.filter);
    updater_ = make_updater(*dispatcher_, std::move(graph), config_.updater);
    features_ = std::make_unique<CompositeFeatureObserver>(*dispatcher_, config_.features);
    reward_ = make_reward(*dispatcher_, config_.reward);
    dispatcher_->subscribe(*updater_);
    dispatcher_->subscribe(*features_);
    dispatcher_->subscribe(*reward_);
}

ObservationBundle Environment::reset() {
    dispatcher_->reset();
    return observation();
}

StepResult Environment::step(const Action& action) {
    const Dispatcher& d = *dispatcher_;
    if (d.is_complete()) throw InvalidActionError("episode is already terminated");
    if (action.job_id < 0 || action.job_id >= instance_->num_jobs())
        throw InvalidActionError("job " + std::to_string(action.job_id) + " does not exist");
    if (d.job_done(action.job_id)) throw InvalidActionError("job " + std::to_string(action.job_id) + " is complete");
    const Operation& op = d.next_operation(action.job_id);
    const auto& available = d.available_operations();
    if (std::find(available.begin(), available.end(), op) == available.end())
        throw InvalidActionError("operation " + std::to_string(op.operation_id) + " is not available");
    if (action.machine_id != -1 && action.machine_id != op.machine_id)
        throw InvalidActionError("operation " + std::to_string(op.operation_id) + " cannot run on machine " +
                                 std::to_string(action.machine_id));
    dispatcher_->dispatch(op, op.machine_id);
    StepResult result;
    result.observation = observation();
    result.reward = reward_->last_reward();
    result.terminated = d.is_complete();
    return result;
}

ObservationBundle Environment::observation() const {
    const JobShopGraph& g = graph();
    ObservationBundle bundle;
    bundle.removed_nodes = g.removed_nodes();
    std::tie(bundle.edge_src, bundle.edge_dst) = g.edge_index();
    for (auto& [kind, m] : features_->features()) {
        Matrix rows = select_rows(m, active_entities(g, kind));
        if (config_.normalize) normalize_in_place(rows);
        bundle.features.emplace(kind, std::move(rows));
    }
    bundle.info.feature_names = features_->column_names();
    for (const auto& op : dispatcher_->available_operations())
        bundle.info.available_actions.push_back({op.operation_id, op.machine_id, op.job_id});

    if (config_.use_padding) {
        if (bundle.removed_nodes.size() > padding_.num_nodes || bundle.edge_src.size() > padding_.num_edges)
            throw ShapeError("graph exceeds padding size");
        bundle.removed_nodes.resize(padding_.num_nodes, true);
        bundle.edge_src.resize(padding_.num_edges, -1);
        bundle.edge_dst.resize(padding_.num_edges, -1);
        for (auto& [kind, m] : bundle.features) pad_rows(m, padded_rows(padding_, kind));
    }
    return bundle;
}

MultiEnvironment::MultiEnvironment(InstanceGenerator generator, GraphInitializer initializer, EnvConfig config)
    : generator_(std::move(generator)), initializer_(std::move(initializer)), config_(std::move(config)) {
    const GeneratorConfig& gc = generator_.config();
    const int jobs = gc.num_jobs_range.second;
    const int machines = gc.num_machines_range.second;
    std::vector<std::vector<Time>> durations(static_cast<std::size_t>(jobs), std::vector<Time>(static_cast<std::size_t>(machines), 1));
    std::vector<std::vector<int>> order(static_cast<std::size_t>(jobs));
    for (auto& row : order)
        for (int m = 0; m < machines; ++m) row.push_back(m);
    auto largest = std::make_shared<const Instance>("padding_reference", durations, order, Metadata{}, machines);
    padding_ = padding_for(initializer_(largest));
    config_.padding = padding_;
}

ObservationBundle MultiEnvironment::reset() {
    auto instance = std::make_shared<const Instance>(generator_.generate());
    env_ = std::make_unique<Environment>(initializer_(std::move(instance)), config_);
    return env_->reset();
}

StepResult MultiEnvironment::step(const Action& action) {
    if (!env_) throw NotReadyError("reset() must be called before step()");
    return env_->step(action);
}

const Environment& MultiEnvironment::current() const {
    if (!env_) throw NotReadyError("reset() must be called first");
    return *env_;
}

RemappedObservation remap_resource_task_observation(const ObservationBundle& observation, const JobShopGraph& graph) {
    if (observation.removed_nodes.size() != graph.num_nodes()) throw ShapeError("observation does not match graph (padded?)");
    RemappedObservation out;
    std::vector<int> local(graph.num_nodes(), -1);
    std::vector<NodeType> present;
    for (auto type : {NodeType::operation, NodeType::machine, NodeType::job, NodeType::global, NodeType::source, NodeType::sink}) {
        const auto ids = graph.nodes_by_type(type);
        if (ids.empty()) continue;
        if (type != NodeType::source && type != NodeType::sink) present.push_back(type);
        auto& originals = out.original_ids_dict[type];
        int next = 0;
        for (std::size_t pos = 0; pos < ids.size(); ++pos) {
            if (observation.removed_nodes[static_cast<std::size_t>(ids[pos])]) continue;
            local[static_cast<std::size_t>(ids[pos])] = next++;
            originals.push_back(static_cast<int>(pos));
        }
    }
    for (auto src : present)
        for (auto dst : present) out.edge_index_dict[edge_type(src, dst)];

    for (std::size_t e = 0; e < observation.edge_src.size(); ++e) {
        const int s = observation.edge_src[e];
        const int d = observation.edge_dst[e];
        if (s < 0 || d < 0) throw ShapeError("padded edge in unpadded observation");
        const NodeType ts = graph.node(s).type;
        const NodeType td = graph.node(d).type;
        for (auto t : {ts, td})
            if (t == NodeType::source || t == NodeType::sink)
                throw UnknownNodeTypeError(std::string("no features for node type ") + to_string(t));
        auto& [src, dst] = out.edge_index_dict[edge_type(ts, td)];
        src.push_back(local[static_cast<std::size_t>(s)]);
        dst.push_back(local[static_cast<std::size_t>(d)]);
    }

    for (auto type : present) {
        const std::size_t active = out.original_ids_dict[type].size();
        Matrix m(active, 0);
        std::optional<FeatureKind> kind;
        if (type == NodeType::operation) kind = FeatureKind::operations;
        if (type == NodeType::machine) kind = FeatureKind::machines;
        if (type == NodeType::job) kind = FeatureKind::jobs;
        if (kind) {
            if (auto it = observation.features.find(*kind); it != observation.features.end()) m = it->second;
        }
        if (m.rows != active) throw ShapeError(std::string("feature rows do not match active ") + to_string(type) + " nodes");
        if (type == NodeType::operation && !graph.has_type(NodeType::job)) {
            if (auto it = observation.features.find(FeatureKind::jobs); it != observation.features.end()) {
                const Matrix& jobs = it->second;
                Matrix joined(m.rows, m.cols + jobs.cols);
                const auto op_ids = graph.nodes_by_type(NodeType::operation);
                for (std::size_t r = 0; r < m.rows; ++r) {
                    const int op_node = op_ids[static_cast<std::size_t>(out.original_ids_dict[type][r])];
                    const auto job = static_cast<std::size_t>(graph.node(op_node).job_id);
                    for (std::size_t c = 0; c < m.cols; ++c) joined(r, c) = m(r, c);
                    for (std::size_t c = 0; c < jobs.cols; ++c) joined(r, m.cols + c) = jobs(job, c);
                }
                m = std::move(joined);
            }
        }
        out.node_features_dict.emplace(type, std::move(m));
    }
    return out;
}

DatasetRecord make_record(const ObservationBundle& observation, const RemappedObservation& remapped,
                          std::vector<std::uint8_t> labels) {
    DatasetRecord record;
    record.removed_nodes = observation.removed_nodes;
    for (const auto& [key, index] : remapped.edge_index_dict)
        record.edges[key.str()] = {std::vector<std::int32_t>(index.first.begin(), index.first.end()),
                                   std::vector<std::int32_t>(index.second.begin(), index.second.end())};
    for (const auto& [type, m] : remapped.node_features_dict) record.features[to_string(type)] = m;
    record.labels = std::move(labels);
    return record;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

void put_size(std::ostream& out, std::size_t v) {
    if (v > 0xffffffffu) throw SerializationError("section too large for record");
    put_u32(out, static_cast<std::uint32_t>(v));
}

void put_string(std::ostream& out, const std::string& s) {
    put_size(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_f32(std::ostream& out, double v) { put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

void get_bytes(std::istream& in, char* data, std::size_t n) {
    if (!in.read(data, static_cast<std::streamsize>(n))) throw SerializationError("truncated record");
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    get_bytes(in, reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 | static_cast<std::uint32_t>(b[2]) << 16 |
           static_cast<std::uint32_t>(b[3]) << 24;
}

std::uint8_t get_u8(std::istream& in) {
    char c;
    get_bytes(in, &c, 1);
    return static_cast<std::uint8_t>(c);
}

std::string get_string(std::istream& in) {
    std::string s(get_u32(in), '\0');
    get_bytes(in, s.data(), s.size());
    return s;
}

}  // namespace

void write_record(std::ostream& out, const DatasetRecord& record) {
    out.put(static_cast<char>(kRecordVersion));
    put_size(out, record.removed_nodes.size());
    for (bool r : record.removed_nodes) out.put(r ? 1 : 0);
    put_size(out, record.edges.size());
    for (const auto& [key, index] : record.edges) {
        if (index.first.size() != index.second.size()) throw SerializationError("edge index rows differ in length");
        put_string(out, key);
        put_size(out, index.first.size());
        for (auto v : index.first) put_u32(out, static_cast<std::uint32_t>(v));
        for (auto v : index.second) put_u32(out, static_cast<std::uint32_t>(v));
    }
    put_size(out, record.features.size());
    for (const auto& [name, m] : record.features) {
        put_string(out, name);
        put_size(out, m.rows);
        put_size(out, m.cols);
        for (double v : m.data) put_f32(out, v);
    }
    put_size(out, record.labels.size());
    for (auto l : record.labels) out.put(static_cast<char>(l));
    if (!out) throw SerializationError("failed to write record");
}

DatasetRecord read_record(std::istream& in) {
    DatasetRecord record;
    if (const auto version = get_u8(in); version != kRecordVersion)
        throw SerializationError("unsupported record version " + std::to_string(version));
    record.removed_nodes.resize(get_u32(in));
    for (std::size_t i = 0; i < record.removed_nodes.size(); ++i) record.removed_nodes[i] = get_u8(in) != 0;
    const auto num_keys = get_u32(in);
    for (std::uint32_t k = 0; k < num_keys; ++k) {
        auto key = get_string(in);
        const auto e = get_u32(in);
        auto& [src, dst] = record.edges[key];
        src.resize(e);
        dst.resize(e);
        for (auto& v : src) v = static_cast<std::int32_t>(get_u32(in));
        for (auto& v : dst) v = static_cast<std::int32_t>(get_u32(in));
    }
    const auto num_kinds = get_u32(in);
    for (std::uint32_t k = 0; k < num_kinds; ++k) {
        auto name = get_string(in);
        const auto rows = get_u32(in);
        const auto cols = get_u32(in);
        Matrix m(rows, cols);
        for (double& v : m.data) v = std::bit_cast<float>(get_u32(in));
        record.features.emplace(std::move(name), std::move(m));
    }
    record.labels.resize(get_u32(in));
    for (auto& l : record.labels) l = get_u8(in);
    return record;
}

}  // namespace jobshop
