#include "jobshop/generation.hpp"

#include <numeric>
#include <vector>

#include "jobshop/errors.hpp"

namespace jobshop {

namespace {

template <typename T>
void check_range(const std::pair<T, T>& range, const char* what) {
    if (range.first < 1 || range.first > range.second)
        throw ConfigError(std::string(what) + " must satisfy 1 <= lo <= hi");
}

}  // namespace

void GeneratorConfig::validate() const {
    check_range(num_jobs_range, "num_jobs_range");
    check_range(num_machines_range, "num_machines_range");
    check_range(duration_range, "duration_range");
    if (!allow_less_jobs_than_machines && num_jobs_range.second < num_machines_range.first)
        throw ConfigError("allow_less_jobs_than_machines is false but every job count is below every machine count");
}

Instance generate(const GeneratorConfig& config, Rng& rng, std::string name) {
    config.validate();
    int num_jobs = 0;
    int num_machines = 0;
    do {
        num_jobs = static_cast<int>(rng.uniform_int(config.num_jobs_range.first, config.num_jobs_range.second));
        num_machines =
            static_cast<int>(rng.uniform_int(config.num_machines_range.first, config.num_machines_range.second));
    } while (!config.allow_less_jobs_than_machines && num_jobs < num_machines);

    const auto jobs = static_cast<std::size_t>(num_jobs);
    const auto ops = static_cast<std::size_t>(num_machines);
    std::vector<std::vector<Time>> durations(jobs, std::vector<Time>(ops));
    for (auto& row : durations)
        for (auto& d : row) d = rng.uniform_int(config.duration_range.first, config.duration_range.second);

    std::vector<std::vector<int>> machines(jobs, std::vector<int>(ops));
    for (auto& row : machines) {
        if (config.allow_recirculation) {
            for (auto& m : row) m = static_cast<int>(rng.uniform_int(0, num_machines - 1));
        } else {
            std::iota(row.begin(), row.end(), 0);
            rng.shuffle(std::span<int>(row));
        }
    }
    return Instance(std::move(name), durations, machines, {}, num_machines);
}

InstanceGenerator::InstanceGenerator(GeneratorConfig config) : config_(std::move(config)), rng_(config_.seed) {
    config_.validate();
}

Instance InstanceGenerator::generate() {
    ++counter_;
    return jobshop::generate(config_, rng_, "classic_generated_instance_" + std::to_string(counter_) + config_.name_suffix);
}

std::optional<Instance> InstanceGenerator::next() {
    if (config_.iteration_limit && counter_ >= *config_.iteration_limit) return std::nullopt;
    return generate();
}

void InstanceGenerator::reset() {
    rng_ = Rng(config_.seed);
    counter_ = 0;
}

}  // namespace jobshop
