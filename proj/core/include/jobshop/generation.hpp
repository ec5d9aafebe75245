#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "jobshop/core.hpp"
#include "jobshop/random.hpp"

namespace jobshop {

struct GeneratorConfig {
    std::pair<int, int> num_jobs_range{10, 10};
    std::pair<int, int> num_machines_range{10, 10};
    std::pair<Time, Time> duration_range{1, 99};
    bool allow_recirculation = false;
    bool allow_less_jobs_than_machines = true;
    std::uint64_t seed = 0;
    std::optional<std::size_t> iteration_limit;
    std::string name_suffix;

    // Throws ConfigError on an invalid configuration.
    void validate() const;
};

// Draws one instance: job count, then machine count, then the duration
// matrix row by row, then the machine matrix row by row.
Instance generate(const GeneratorConfig& config, Rng& rng, std::string name);

// Stateful generator producing "classic_generated_instance_<k><suffix>".
class InstanceGenerator {
public:
    explicit InstanceGenerator(GeneratorConfig config);

    const GeneratorConfig& config() const noexcept { return config_; }
    std::size_t count() const noexcept { return counter_; }

    // Next instance regardless of the iteration limit.
    Instance generate();
    // Next instance, or nullopt once iteration_limit instances were produced.
    std::optional<Instance> next();
    void reset();

private:
    GeneratorConfig config_;
    Rng rng_;
    std::size_t counter_ = 0;
};

}  // namespace jobshop
