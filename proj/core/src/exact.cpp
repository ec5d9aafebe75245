#include "jobshop/exact.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "jobshop/errors.hpp"
#include "jobshop/rules.hpp"

namespace jobshop {

namespace {

using Clock = std::chrono::steady_clock;

class BranchAndBound {
public:
    BranchAndBound(const Instance& instance, Clock::time_point deadline) : inst_(instance), deadline_(deadline) {
        const auto jobs = static_cast<std::size_t>(inst_.num_jobs());
        const auto machines = static_cast<std::size_t>(inst_.num_machines());
        job_next_.assign(jobs, 0);
        job_ready_.assign(jobs, 0);
        machine_ready_.assign(machines, 0);
        job_work_.assign(jobs, 0);
        machine_load_.assign(machines, 0);
        prefix_.assign(static_cast<std::size_t>(inst_.num_operations()), 0);
        tail_.assign(static_cast<std::size_t>(inst_.num_operations()), 0);
        for (int j = 0; j < inst_.num_jobs(); ++j) {
            Time sum = 0;
            for (const auto& op : inst_.job(j)) {
                prefix_[static_cast<std::size_t>(op.operation_id)] = sum;
                sum += op.duration;
            }
            job_work_[static_cast<std::size_t>(j)] = sum;
            for (const auto& op : inst_.job(j))
                tail_[static_cast<std::size_t>(op.operation_id)] = sum - prefix_[static_cast<std::size_t>(op.operation_id)] - op.duration;
        }
        for (const auto& op : inst_.operations()) machine_load_[static_cast<std::size_t>(op.machine_id)] += op.duration;
    }

    void set_incumbent(Time makespan, std::vector<int> order) {
        best_ = makespan;
        best_order_ = std::move(order);
    }

    // Returns false when the deadline interrupted the search.
    bool run() {
        root_bound_ = bound();
        if (root_bound_ >= best_) return true;
        search();
        return !timed_out_;
    }

    Time best() const noexcept { return best_; }
    const std::vector<int>& best_order() const noexcept { return best_order_; }
    Time root_bound() const noexcept { return root_bound_; }
    std::size_t nodes() const noexcept { return nodes_; }

private:
    Time head(const Operation& op) const {
        const auto j = static_cast<std::size_t>(op.job_id);
        const auto& next = inst_.operation(op.job_id, job_next_[j]);
        return job_ready_[j] + prefix_[static_cast<std::size_t>(op.operation_id)] - prefix_[static_cast<std::size_t>(next.operation_id)];
    }

    Time bound() const {
        Time lb = 0;
        for (std::size_t j = 0; j < job_ready_.size(); ++j) lb = std::max(lb, job_ready_[j] + job_work_[j]);
        for (int m = 0; m < inst_.num_machines(); ++m) {
            const auto mi = static_cast<std::size_t>(m);
            if (machine_load_[mi] == 0) {
                lb = std::max(lb, machine_ready_[mi]);
                continue;
            }
            Time min_head = std::numeric_limits<Time>::max();
            Time min_tail = std::numeric_limits<Time>::max();
            for (int id : inst_.operations_on_machine(m)) {
                const auto& op = inst_.operation(id);
                if (op.position_in_job < job_next_[static_cast<std::size_t>(op.job_id)]) continue;
                min_head = std::min(min_head, head(op));
                min_tail = std::min(min_tail, tail_[static_cast<std::size_t>(id)]);
            }
            if (min_head == std::numeric_limits<Time>::max()) continue;
            lb = std::max(lb, std::max(machine_ready_[mi], min_head) + machine_load_[mi] + min_tail);
        }
        return lb;
    }

    void search() {
        if (timed_out_) return;
        if ((++nodes_ & 1023) == 0 && Clock::now() > deadline_) {
            timed_out_ = true;
            return;
        }
        if (order_.size() == static_cast<std::size_t>(inst_.num_operations())) {
            const Time makespan = *std::max_element(machine_ready_.begin(), machine_ready_.end());
            if (makespan < best_) set_incumbent(makespan, order_);
            return;
        }
        if (bound() >= best_) return;

        // Operation with the earliest completion among the ready ones.
        const Operation* pivot = nullptr;
        Time pivot_end = std::numeric_limits<Time>::max();
        for (int j = 0; j < inst_.num_jobs(); ++j) {
            if (job_next_[static_cast<std::size_t>(j)] >= inst_.job_size(j)) continue;
            const auto& op = inst_.operation(j, job_next_[static_cast<std::size_t>(j)]);
            const Time end = start_of(op) + op.duration;
            if (end < pivot_end) {
                pivot_end = end;
                pivot = &op;
            }
        }
        std::vector<const Operation*> conflict;
        for (int j = 0; j < inst_.num_jobs(); ++j) {
            if (job_next_[static_cast<std::size_t>(j)] >= inst_.job_size(j)) continue;
            const auto& op = inst_.operation(j, job_next_[static_cast<std::size_t>(j)]);
            if (op.machine_id == pivot->machine_id && (&op == pivot || start_of(op) < pivot_end)) conflict.push_back(&op);
        }
        std::stable_sort(conflict.begin(), conflict.end(), [&](const Operation* a, const Operation* b) {
            const Time sa = start_of(*a);
            const Time sb = start_of(*b);
            if (sa != sb) return sa < sb;
            return a->duration < b->duration;
        });
        for (const Operation* op : conflict) {
            const auto j = static_cast<std::size_t>(op->job_id);
            const auto m = static_cast<std::size_t>(op->machine_id);
            const Time saved_job = job_ready_[j];
            const Time saved_machine = machine_ready_[m];
            const Time end = start_of(*op) + op->duration;
            job_ready_[j] = machine_ready_[m] = end;
            ++job_next_[j];
            job_work_[j] -= op->duration;
            machine_load_[m] -= op->duration;
            order_.push_back(op->operation_id);

            search();

            order_.pop_back();
            machine_load_[m] += op->duration;
            job_work_[j] += op->duration;
            --job_next_[j];
            job_ready_[j] = saved_job;
            machine_ready_[m] = saved_machine;
            if (timed_out_) return;
        }
    }

    Time start_of(const Operation& op) const {
        return std::max(job_ready_[static_cast<std::size_t>(op.job_id)], machine_ready_[static_cast<std::size_t>(op.machine_id)]);
    }

    const Instance& inst_;
    Clock::time_point deadline_;
    std::vector<int> job_next_;
    std::vector<Time> job_ready_;
    std::vector<Time> machine_ready_;
    std::vector<Time> job_work_;
    std::vector<Time> machine_load_;
    std::vector<Time> prefix_;
    std::vector<Time> tail_;
    std::vector<int> order_;
    std::vector<int> best_order_;
    Time best_ = std::numeric_limits<Time>::max();
    Time root_bound_ = 0;
    std::size_t nodes_ = 0;
    bool timed_out_ = false;
};

Schedule replay(const std::shared_ptr<const Instance>& instance, const std::vector<int>& order) {
    Dispatcher dispatcher(instance);
    for (int id : order) dispatcher.dispatch(instance->operation(id));
    return dispatcher.schedule();
}

std::vector<int> dispatch_order(const Schedule& schedule) {
    std::vector<ScheduledOperation> all;
    for (const auto& seq : schedule.machine_sequences()) all.insert(all.end(), seq.begin(), seq.end());
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.start_time != b.start_time) return a.start_time < b.start_time;
        return a.operation.operation_id < b.operation.operation_id;
    });
    std::vector<int> order;
    for (const auto& s : all) order.push_back(s.operation.operation_id);
    return order;
}

}  // namespace

ExactResult solve_exact(std::shared_ptr<const Instance> instance, double time_limit_seconds) {
    const auto started = Clock::now();
    const auto deadline = started + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(time_limit_seconds));
    BranchAndBound search(*instance, deadline);

    std::optional<Schedule> best;
    for (const auto* filter : {"none", "nio", "do"}) {
        for (const auto& rule : {"spt", "fcfs", "mwkr", "mor"}) {
            Schedule s = RuleSolver(make_rule(rule), make_filter(std::string(filter))).solve(instance);
            if (!best || s.makespan() < best->makespan()) best = std::move(s);
        }
    }
    search.set_incumbent(best->makespan(), dispatch_order(*best));

    const bool exhausted = search.run();
    ExactResult result{replay(instance, search.best_order())};
    result.proven_optimal = exhausted;
    result.lower_bound = exhausted ? search.best() : search.root_bound();
    result.nodes = search.nodes();
    result.seconds = std::chrono::duration<double>(Clock::now() - started).count();
    result.schedule.metadata()["solver"] = std::string("branch_and_bound");
    result.schedule.metadata()["proven_optimal"] = exhausted;
    result.schedule.metadata()["seconds"] = result.seconds;
    return result;
}

OptimalLabeler::OptimalLabeler(const Schedule& reference) {
    if (!reference.is_complete()) throw ValidationError("reference schedule must be complete");
    for (const auto& seq : reference.machine_sequences()) {
        auto& ids = sequences_.emplace_back();
        for (const auto& s : seq) ids.push_back(s.operation.operation_id);
    }
    cursor_.assign(sequences_.size(), 0);
}

bool OptimalLabeler::is_optimal(const Operation& operation) const {
    const auto m = static_cast<std::size_t>(operation.machine_id);
    return m < sequences_.size() && cursor_[m] < sequences_[m].size() && sequences_[m][cursor_[m]] == operation.operation_id;
}

std::vector<std::uint8_t> OptimalLabeler::labels(std::span<const Operation> operations) const {
    std::vector<std::uint8_t> out;
    out.reserve(operations.size());
    for (const auto& op : operations) out.push_back(is_optimal(op) ? 1 : 0);
    return out;
}

void OptimalLabeler::update(const ScheduledOperation& scheduled) {
    auto& c = cursor_.at(static_cast<std::size_t>(scheduled.machine_id));
    if (c < sequences_[static_cast<std::size_t>(scheduled.machine_id)].size()) ++c;
}

void OptimalLabeler::reset() { std::fill(cursor_.begin(), cursor_.end(), 0); }

StepSampler::StepSampler(std::size_t period) : period_(period) {
    if (period == 0) throw ConfigError("sampling period must be positive");
}

namespace {

const char* builder_name(GraphBuilderType type) {
    switch (type) {
        case GraphBuilderType::disjunctive: return "disjunctive";
        case GraphBuilderType::disjunctive_with_source_sink: return "disjunctive_with_source_sink";
        case GraphBuilderType::resource_task: return "resource_task";
        case GraphBuilderType::resource_task_with_jobs: return "resource_task_with_jobs";
        case GraphBuilderType::resource_task_complete: return "resource_task_complete";
    }
    return "?";
}

struct FallbackState {
    const OptimalLabeler* labeler = nullptr;
    bool fell_back = false;
};

}  // namespace

ExportManifest export_dataset(std::span<const Schedule> references, const ExportConfig& config, const RecordSink& sink) {
    StepSampler sampler(config.sample_every);
    ExportManifest manifest;
    manifest.sample_every = config.sample_every;
    manifest.filter = filter_label(config.filter);
    manifest.graph = builder_name(config.graph);
    const ReadyOperationsFilter base = make_filter(config.filter);

    for (std::size_t index = 0; index < references.size(); ++index) {
        const Schedule& reference = references[index];
        OptimalLabeler labeler(reference);
        auto state = std::make_shared<FallbackState>();
        state->labeler = &labeler;

        EnvConfig env_config;
        env_config.features = config.features;
        env_config.updater = config.updater;
        env_config.normalize = config.normalize;
        env_config.filter = [base, state](const Dispatcher& d, std::vector<Operation> ready) {
            auto kept = base ? base(d, ready) : ready;
            const bool any = std::any_of(kept.begin(), kept.end(), [&](const Operation& op) { return state->labeler->is_optimal(op); });
            state->fell_back = !any;
            return any ? kept : ready;
        };
        Environment env(build_graph(config.graph, reference.instance_ptr()), env_config);
        env.subscribe(labeler);
        env.reset();

        InstanceExport summary;
        summary.name = reference.instance().name();
        summary.num_steps = static_cast<std::size_t>(reference.instance().num_operations());
        for (std::size_t step = 0; !env.dispatcher().is_complete(); ++step) {
            const auto& available = env.dispatcher().available_operations();
            if (state->fell_back) {
                ++summary.fallback_steps;
                if (config.log)
                    config.log(summary.name + ": step " + std::to_string(step) + " kept no optimal operation after filtering; using the unfiltered set");
            }
            const auto labels = labeler.labels(available);
            const auto first = std::find(labels.begin(), labels.end(), 1);
            if (first == labels.end())
                throw DesyncError(summary.name + ": no available operation follows the reference schedule at step " + std::to_string(step));

            if (sampler.sampled(step)) {
                summary.sampled_steps.push_back(step);
                if (available.size() >= 2) {
                    const ObservationBundle bundle = env.observation();
                    const RemappedObservation remapped = remap_resource_task_observation(bundle, env.graph());
                    const auto& op_ids = remapped.original_ids_dict.at(NodeType::operation);
                    const auto all_ops = env.graph().nodes_by_type(NodeType::operation);
                    std::vector<std::uint8_t> row_labels(op_ids.size(), 0);
                    for (std::size_t r = 0; r < op_ids.size(); ++r) {
                        const auto& op = env.instance().operation(env.graph().node(all_ops[static_cast<std::size_t>(op_ids[r])]).operation_id);
                        const bool is_available = std::find(available.begin(), available.end(), op) != available.end();
                        row_labels[r] = is_available && labeler.is_optimal(op) ? 1 : 0;
                    }
                    ExportedSample sample{index, step, step + sampler.global_steps(), available.size(),
                                          static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1))};
                    if (sink) sink(sample, make_record(bundle, remapped, std::move(row_labels)));
                    summary.emitted_steps.push_back(step);
                    manifest.samples.push_back(sample);
                }
            }
            const Operation chosen = available[static_cast<std::size_t>(first - labels.begin())];
            env.step({chosen.job_id, chosen.machine_id});
        }
        summary.makespan = env.dispatcher().schedule().makespan();
        if (manifest.columns.empty()) {
            const auto names = env.features().column_names();
            const auto kind_names = [&](FeatureKind kind) {
                auto it = names.find(kind);
                return it == names.end() ? std::vector<std::string>{} : it->second;
            };
            const auto& graph = env.graph();
            if (graph.has_type(NodeType::operation)) {
                auto cols = kind_names(FeatureKind::operations);
                if (!graph.has_type(NodeType::job))
                    for (const auto& n : kind_names(FeatureKind::jobs)) cols.push_back("job_" + n);
                manifest.columns["operation"] = cols;
            }
            if (graph.has_type(NodeType::machine)) manifest.columns["machine"] = kind_names(FeatureKind::machines);
            if (graph.has_type(NodeType::job)) manifest.columns["job"] = kind_names(FeatureKind::jobs);
        }
        sampler.finish_instance(summary.num_steps);
        manifest.instances.push_back(std::move(summary));
    }
    manifest.global_steps = sampler.global_steps();
    return manifest;
}

namespace {

std::string record_name(std::size_t index) {
    std::ostringstream name;
    name << "record_" << std::setw(6) << std::setfill('0') << index << ".bin";
    return name.str();
}

}  // namespace

std::string manifest_to_json(const ExportManifest& manifest) {
    nlohmann::ordered_json j;
    j["schema"] = "jobshop-dataset";
    j["record_version"] = kRecordVersion;
    j["record_layout"] = {"removed_nodes", "edge_index_by_type", "features_by_node_type", "labels"};
    j["label_rows"] = "active operation rows";
    j["sample_every"] = manifest.sample_every;
    j["global_steps"] = manifest.global_steps;
    j["filter"] = manifest.filter;
    j["graph"] = manifest.graph;
    j["columns"] = manifest.columns;
    j["instances"] = nlohmann::ordered_json::array();
    for (const auto& inst : manifest.instances)
        j["instances"].push_back({{"name", inst.name},
                                  {"num_steps", inst.num_steps},
                                  {"makespan", inst.makespan},
                                  {"sampled_steps", inst.sampled_steps},
                                  {"emitted_steps", inst.emitted_steps},
                                  {"fallback_steps", inst.fallback_steps}});
    j["records"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        const auto& s = manifest.samples[i];
        j["records"].push_back({{"file", record_name(i)},
                                {"instance", s.instance_index},
                                {"step", s.step},
                                {"global_step", s.global_step},
                                {"num_available", s.num_available},
                                {"num_positive", s.num_positive}});
    }
    return j.dump(2) + "\n";
}

ExportManifest write_dataset(const std::filesystem::path& directory, std::span<const Schedule> references,
                             const ExportConfig& config) {
    std::filesystem::create_directories(directory);
    std::size_t count = 0;
    const auto manifest = export_dataset(references, config, [&](const ExportedSample&, const DatasetRecord& record) {
        std::ofstream out(directory / record_name(count++), std::ios::binary);
        if (!out) throw SerializationError("cannot open record file in " + directory.string());
        write_record(out, record);
    });
    std::ofstream out(directory / "manifest.json");
    if (!out) throw SerializationError("cannot write manifest in " + directory.string());
    out << manifest_to_json(manifest);
    return manifest;
}

}  // namespace jobshop
