#include "jobshop/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "jobshop/errors.hpp"
#include "jobshop/formats.hpp"
#include "jobshop/rules.hpp"

namespace jobshop {

std::vector<std::string> benchmark_suite(const std::string& suite) {
    const auto all = list_benchmarks();
    if (suite == "all") return all;
    std::vector<std::string> out;
    if (suite.find(',') != std::string::npos) {
        std::stringstream ss(suite);
        for (std::string name; std::getline(ss, name, ',');) {
            if (name.empty()) continue;
            if (!std::binary_search(all.begin(), all.end(), name)) throw UnknownInstanceError("unknown benchmark '" + name + "'");
            out.push_back(name);
        }
        return out;
    }
    const std::string prefix = suite == "taillard" ? "ta" : suite;
    for (const auto& name : all)
        if (name.rfind(prefix, 0) == 0) out.push_back(name);
    if (out.empty()) throw UnknownInstanceError("no benchmark matches '" + suite + "'");
    return out;
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
    std::vector<std::shared_ptr<const Instance>> instances;
    for (const auto& name : options.instances) instances.push_back(std::make_shared<const Instance>(load_benchmark(name)));
    for (const auto& rule : options.rules) make_rule(rule);
    for (const auto& filter : options.filters) make_filter(filter);

    std::vector<BenchRow> rows;
    for (const auto& inst : instances)
        for (const auto& rule : options.rules)
            for (const auto& filter : options.filters) {
                BenchRow row;
                row.instance = inst->name();
                row.num_jobs = inst->num_jobs();
                row.num_machines = inst->num_machines();
                row.rule = rule;
                row.filter = filter_label(std::vector<std::string>{filter});
                row.reference = inst->best_known();
                rows.push_back(std::move(row));
            }

    const std::size_t per_instance = options.rules.size() * options.filters.size();
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            BenchRow& row = rows[i];
            const auto& instance = instances[i / per_instance];
            const auto started = std::chrono::steady_clock::now();
            try {
                const auto filter = make_filter(row.filter);
                double total = 0.0;
                const std::size_t runs = row.rule == "random" ? std::max<std::size_t>(options.random_seeds, 1) : 1;
                for (std::size_t seed = 0; seed < runs; ++seed)
                    total += static_cast<double>(RuleSolver(make_rule(row.rule, seed), filter).solve(instance).makespan());
                row.makespan = total / static_cast<double>(runs);
                if (row.reference && *row.reference > 0)
                    row.gap = (*row.makespan - static_cast<double>(*row.reference)) / static_cast<double>(*row.reference);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        }
    };
    std::size_t threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(rows.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
        work();
    }
    return rows;
}

namespace {

std::string number(double v) {
    char buf[64];
    if (v == static_cast<double>(static_cast<long long>(v))) std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    else std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string bench_csv(const std::vector<BenchRow>& rows, bool with_timing) {
    std::ostringstream out;
    out << "instance,rule,filter,makespan,optimum,gap,seconds\n";
    char buf[64];
    for (const auto& r : rows) {
        out << r.instance << ',' << r.rule << ',' << r.filter << ',';
        if (r.makespan) out << number(*r.makespan);
        out << ',';
        if (r.reference) out << *r.reference;
        out << ',';
        if (r.gap) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.gap);
            out << buf;
        }
        out << ',';
        if (with_timing) {
            std::snprintf(buf, sizeof buf, "%.6f", r.seconds);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<GapSummary> gap_summary(const std::vector<BenchRow>& rows) {
    std::vector<GapSummary> out;
    std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
    for (const auto& r : rows) {
        if (!r.gap) continue;
        const std::string size = std::to_string(r.num_jobs) + "x" + std::to_string(r.num_machines);
        auto [it, inserted] = index.try_emplace({size, r.rule, r.filter}, out.size());
        if (inserted) out.push_back({size, r.rule, r.filter, 0.0, 0});
        auto& s = out[it->second];
        s.mean_gap += *r.gap;
        ++s.count;
    }
    for (auto& s : out) s.mean_gap /= static_cast<double>(s.count);
    return out;
}

std::vector<FilterImprovement> filter_improvements(const std::vector<BenchRow>& rows) {
    std::map<std::pair<std::string, std::string>, double> baseline;
    for (const auto& r : rows)
        if (r.filter == "none" && r.makespan) baseline[{r.instance, r.rule}] = *r.makespan;

    std::vector<std::string> filters;
    for (const auto& r : rows)
        if (r.filter != "none" && std::find(filters.begin(), filters.end(), r.filter) == filters.end()) filters.push_back(r.filter);

    std::vector<FilterImprovement> out;
    for (const auto& filter : filters) {
        FilterImprovement fi;
        fi.filter = filter;
        double sum = 0.0;
        std::map<std::string, std::pair<double, double>> pooled;
        for (const auto& r : rows) {
            if (r.filter != filter || !r.makespan) continue;
            auto it = baseline.find({r.instance, r.rule});
            if (it == baseline.end() || it->second <= 0) continue;
            sum += (it->second - *r.makespan) / it->second * 100.0;
            ++fi.cells;
            auto& [none_total, filter_total] = pooled[r.rule];
            none_total += it->second;
            filter_total += *r.makespan;
        }
        if (fi.cells == 0) continue;
        fi.mean_of_cells = sum / static_cast<double>(fi.cells);
        for (const auto& [rule, totals] : pooled) fi.mean_of_rules += (totals.first - totals.second) / totals.first * 100.0;
        fi.mean_of_rules /= static_cast<double>(pooled.size());
        out.push_back(fi);
    }
    return out;
}

}  // namespace jobshop
