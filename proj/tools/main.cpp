#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jobshop/bench.hpp"
#include "jobshop/errors.hpp"
#include "jobshop/exact.hpp"
#include "jobshop/formats.hpp"
#include "jobshop/gantt.hpp"
#include "jobshop/generation.hpp"
#include "jobshop/rules.hpp"

namespace {

using namespace jobshop;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

// A usage problem detected after parsing (unknown names, bad ranges).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::shared_ptr<const Instance> load_instance(const std::string& input, const std::string& format, bool one_based) {
    namespace fs = std::filesystem;
    if (!fs::exists(input)) {
        const auto names = list_benchmarks();
        if (std::binary_search(names.begin(), names.end(), input)) return std::make_shared<const Instance>(load_benchmark(input));
        throw UnknownInstanceError("'" + input + "' is neither a file nor a benchmark name");
    }
    TaillardOptions options;
    options.one_based = one_based;
    options.name = fs::path(input).stem().string();
    if (format == "json") return std::make_shared<const Instance>(parse_instance_json(read_text_file(input)));
    if (format == "taillard") return std::make_shared<const Instance>(parse_taillard(read_text_file(input), options));
    return std::make_shared<const Instance>(read_instance_file(input, options));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto dash = text.find('-');
    try {
        if (dash == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        return {std::stoi(text.substr(0, dash)), std::stoi(text.substr(dash + 1))};
    } catch (const std::exception&) {
        throw UsageError("invalid range '" + text + "' (expected N or A-B)");
    }
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text_file(path, text);
}

struct SolveArgs {
    std::string input;
    std::string format = "auto";
    bool one_based = false;
    std::string rule;
    std::vector<std::string> filters = {"nio"};
    std::uint64_t seed = 0;
    std::string output;
};

int cmd_solve(const SolveArgs& a) {
    auto instance = load_instance(a.input, a.format, a.one_based);
    const Schedule schedule = solve(instance, a.rule, a.filters, a.seed);
    if (!a.output.empty()) write_text_file(a.output, write_schedule_json(schedule) + "\n");
    std::cout << schedule.makespan() << "\n";
    return kOk;
}

struct BenchArgs {
    std::string suite = "all";
    std::string rules = "spt,fcfs,mwkr,mor";
    std::string filters = "nio";
    std::size_t seeds = 5;
    std::size_t threads = 0;
    std::string csv;
    bool timing = false;
};

int cmd_bench(const BenchArgs& a) {
    BenchOptions options;
    options.instances = benchmark_suite(a.suite);
    options.rules = split_list(a.rules);
    options.filters = split_list(a.filters);
    options.random_seeds = a.seeds;
    options.threads = a.threads;
    const auto rows = run_bench(options);

    const std::string csv = bench_csv(rows, a.timing);
    if (!a.csv.empty()) write_text_file(a.csv, csv);
    else std::cout << csv;

    std::size_t failures = 0;
    for (const auto& r : rows)
        if (!r.error.empty()) {
            ++failures;
            std::cerr << r.instance << " " << r.rule << " " << r.filter << ": " << r.error << "\n";
        }
    std::ostream& summary = a.csv.empty() ? std::cerr : std::cout;
    summary << "# mean gap by size\n";
    for (const auto& s : gap_summary(rows)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s %s %s %.4f (n=%zu)\n", s.size.c_str(), s.rule.c_str(), s.filter.c_str(), s.mean_gap, s.count);
        summary << buf;
    }
    const auto improvements = filter_improvements(rows);
    if (!improvements.empty()) {
        summary << "# makespan improvement over no filter (%): mean of cells, mean of per-rule pooled\n";
        for (const auto& f : improvements) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s %.2f %.2f (cells=%zu)\n", f.filter.c_str(), f.mean_of_cells, f.mean_of_rules, f.cells);
            summary << buf;
        }
    }
    return failures ? kFailure : kOk;
}

struct ExactArgs {
    std::string input;
    std::string format = "auto";
    bool one_based = false;
    double time_limit = 60.0;
    std::string output;
};

int cmd_exact(const ExactArgs& a) {
    auto instance = load_instance(a.input, a.format, a.one_based);
    const auto result = solve_exact(instance, a.time_limit);
    if (!a.output.empty()) write_text_file(a.output, write_schedule_json(result.schedule) + "\n");
    std::cout << "proven_optimal " << (result.proven_optimal ? "true" : "false") << "\n"
              << "lower_bound " << result.lower_bound << "\n"
              << "nodes " << result.nodes << "\n"
              << result.schedule.makespan() << "\n";
    return kOk;
}

struct GenArgs {
    std::string jobs = "10";
    std::string machines = "10";
    Time duration_min = 1;
    Time duration_max = 99;
    bool recirculation = false;
    bool no_fewer_jobs = false;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    std::string format = "taillard";
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    GeneratorConfig config;
    config.num_jobs_range = parse_range(a.jobs);
    config.num_machines_range = parse_range(a.machines);
    config.duration_range = {a.duration_min, a.duration_max};
    config.allow_recirculation = a.recirculation;
    config.allow_less_jobs_than_machines = !a.no_fewer_jobs;
    config.seed = a.seed;
    try {
        config.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    InstanceGenerator generator(config);
    if (!a.out.empty()) std::filesystem::create_directories(a.out);
    for (std::size_t i = 0; i < a.count; ++i) {
        const Instance instance = generator.generate();
        const bool json = a.format == "json";
        const std::string text = json ? write_instance_json(instance) + "\n" : write_taillard(instance);
        if (a.out.empty()) {
            std::cout << text;
        } else {
            const auto path = std::filesystem::path(a.out) / (instance.name() + (json ? ".json" : ".txt"));
            write_text_file(path, text);
            std::cout << path.string() << "\n";
        }
    }
    return kOk;
}

struct ExportArgs {
    std::vector<std::string> instances;
    std::size_t sample_every = 1;
    std::string out;
    double time_limit = 10.0;
    std::size_t threads = 0;
    std::string filter = "do";
    std::string graph = "resource_task";
};

int cmd_export(const ExportArgs& a) {
    std::vector<std::shared_ptr<const Instance>> instances;
    for (const auto& input : a.instances) instances.push_back(load_instance(input, "auto", false));
    ExportConfig config;
    config.sample_every = a.sample_every;
    config.filter = {a.filter};
    try {
        config.graph = graph_builder_type(a.graph);
        make_filter(a.filter);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    config.log = [](const std::string& message) { std::cerr << message << "\n"; };

    std::vector<std::optional<ExactResult>> solved(instances.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) solved[i] = solve_exact(instances[i], a.time_limit);
    };
    {
        const std::size_t threads = std::min<std::size_t>(a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency()),
                                                          std::max<std::size_t>(instances.size(), 1));
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
        work();
    }
    std::vector<Schedule> references;
    for (std::size_t i = 0; i < solved.size(); ++i) {
        if (!solved[i]->proven_optimal)
            std::cerr << instances[i]->name() << ": time limit reached, using the best schedule found ("
                      << solved[i]->schedule.makespan() << ")\n";
        references.push_back(solved[i]->schedule);
    }
    const auto manifest = write_dataset(a.out, references, config);
    std::cout << manifest.samples.size() << " records written to " << a.out << "\n";
    return kOk;
}

int cmd_gantt(const std::string& schedule_path, const std::string& svg_path, const std::string& title) {
    const Schedule schedule = parse_schedule_json(read_text_file(schedule_path));
    GanttOptions options;
    options.title = title;
    write_or_print(svg_path, render_gantt_svg(schedule, options));
    return kOk;
}

int cmd_validate(const std::string& instance_input, const std::string& schedule_path) {
    const Schedule parsed = parse_schedule_json(read_text_file(schedule_path));
    std::optional<Schedule> rebuilt;
    std::vector<std::string> errors;
    if (!instance_input.empty()) {
        auto instance = load_instance(instance_input, "auto", false);
        try {
            rebuilt = from_job_sequences(instance, parsed.job_sequences());
        } catch (const Error& e) {
            errors.push_back(e.what());
        }
    } else {
        rebuilt = parsed;
    }
    ScheduleReport report;
    if (rebuilt) report = verify_schedule(rebuilt->instance(), *rebuilt);
    report.violations.insert(report.violations.end(), errors.begin(), errors.end());
    std::cout << "valid " << (report.valid ? "true" : "false") << "\n"
              << "complete " << (report.complete ? "true" : "false") << "\n"
              << "semi_active " << (report.semi_active ? "true" : "false") << "\n"
              << "non_delay " << (report.non_delay ? "true" : "false") << "\n";
    if (rebuilt) std::cout << "makespan " << rebuilt->makespan() << "\n";
    for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
    return report.valid && report.complete ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Job shop scheduling toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("jobshop 1.0.0"));

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Build a schedule with a dispatching rule");
    solve_cmd->add_option("--input,-i", solve_args.input, "Instance file or benchmark name")->required();
    solve_cmd->add_option("--format", solve_args.format, "auto, taillard or json")->check(CLI::IsMember({"auto", "taillard", "json"}));
    solve_cmd->add_flag("--one-based", solve_args.one_based, "Taillard machine ids start at 1");
    solve_cmd->add_option("--rule,-r", solve_args.rule, "spt, fcfs, mwkr, mor or random")->required();
    solve_cmd->add_option("--filter,-f", solve_args.filters, "Ready-operation filter; repeat to compose (none, do, nio, nidm, nim)")
        ->capture_default_str();
    solve_cmd->add_option("--seed", solve_args.seed, "Seed for the random rule");
    solve_cmd->add_option("--output,-o", solve_args.output, "Write the schedule as JSON");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Run rules and filters over benchmark instances");
    bench_cmd->add_option("--suite", bench_args.suite, "all, taillard, a name prefix or a comma list");
    bench_cmd->add_option("--rules", bench_args.rules, "Comma-separated rules");
    bench_cmd->add_option("--filters", bench_args.filters, "Comma-separated filter labels, e.g. none,do,do+nim");
    bench_cmd->add_option("--random-seeds", bench_args.seeds, "Seeds averaged for the random rule");
    bench_cmd->add_option("--threads", bench_args.threads, "Worker threads (0 = all cores)");
    bench_cmd->add_option("--csv", bench_args.csv, "Write CSV here instead of stdout");
    bench_cmd->add_flag("--timing", bench_args.timing, "Fill the seconds column");

    ExactArgs exact_args;
    auto* exact_cmd = app.add_subcommand("exact", "Minimize the makespan by branch and bound");
    exact_cmd->add_option("--input,-i", exact_args.input, "Instance file or benchmark name")->required();
    exact_cmd->add_option("--format", exact_args.format, "auto, taillard or json")->check(CLI::IsMember({"auto", "taillard", "json"}));
    exact_cmd->add_flag("--one-based", exact_args.one_based, "Taillard machine ids start at 1");
    exact_cmd->add_option("--time-limit", exact_args.time_limit, "Seconds")->check(CLI::PositiveNumber);
    exact_cmd->add_option("--output,-o", exact_args.output, "Write the schedule as JSON");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate random instances");
    gen_cmd->add_option("--jobs", gen_args.jobs, "Job count N or range A-B");
    gen_cmd->add_option("--machines", gen_args.machines, "Machine count N or range A-B");
    gen_cmd->add_option("--duration-min", gen_args.duration_min);
    gen_cmd->add_option("--duration-max", gen_args.duration_max);
    gen_cmd->add_flag("--recirculation", gen_args.recirculation, "Allow jobs to revisit machines");
    gen_cmd->add_flag("--no-fewer-jobs", gen_args.no_fewer_jobs, "Reject draws with fewer jobs than machines");
    gen_cmd->add_option("--seed", gen_args.seed);
    gen_cmd->add_option("--count", gen_args.count)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--format", gen_args.format)->check(CLI::IsMember({"taillard", "json"}));
    gen_cmd->add_option("--out", gen_args.out, "Directory for the files (default stdout)");

    ExportArgs export_args;
    auto* export_cmd = app.add_subcommand("export-dataset", "Solve instances exactly and export labelled observations");
    export_cmd->add_option("--instances", export_args.instances, "Instance files or benchmark names")->required();
    export_cmd->add_option("--sample-every", export_args.sample_every, "Sampling period n")->check(CLI::PositiveNumber);
    export_cmd->add_option("--out", export_args.out, "Output directory")->required();
    export_cmd->add_option("--time-limit", export_args.time_limit, "Seconds per instance")->check(CLI::PositiveNumber);
    export_cmd->add_option("--threads", export_args.threads, "Solver threads (0 = all cores)");
    export_cmd->add_option("--filter", export_args.filter, "Filter applied during replay");
    export_cmd->add_option("--graph", export_args.graph,
                           "disjunctive, resource_task, resource_task_with_jobs or resource_task_complete");

    std::string gantt_schedule, gantt_svg, gantt_title;
    auto* gantt_cmd = app.add_subcommand("gantt", "Render a schedule as an SVG Gantt chart");
    gantt_cmd->add_option("--schedule", gantt_schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);
    gantt_cmd->add_option("--svg", gantt_svg, "Output file (default stdout)");
    gantt_cmd->add_option("--title", gantt_title);

    std::string validate_instance, validate_schedule;
    auto* validate_cmd = app.add_subcommand("validate", "Check a schedule");
    validate_cmd->add_option("--instance", validate_instance, "Check the sequences against this instance instead");
    validate_cmd->add_option("--schedule", validate_schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_args);
        if (*bench_cmd) return cmd_bench(bench_args);
        if (*exact_cmd) return cmd_exact(exact_args);
        if (*gen_cmd) return cmd_gen(gen_args);
        if (*export_cmd) return cmd_export(export_args);
        if (*gantt_cmd) return cmd_gantt(gantt_schedule, gantt_svg, gantt_title);
        if (*validate_cmd) return cmd_validate(validate_instance, validate_schedule);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UnknownInstanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}
