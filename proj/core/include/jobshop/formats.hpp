#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jobshop/core.hpp"

namespace jobshop {

struct TaillardOptions {
    // Some external corpora number machines from 1.
    bool one_based = false;
    std::string name;
};

// Header "jobs machines", then one line per job of (machine, duration)
// pairs. '#' starts a comment that runs to the end of the line.
Instance parse_taillard(std::string_view text, const TaillardOptions& options = {});
std::string write_taillard(const Instance& instance);

std::string write_instance_json(const Instance& instance);
Instance parse_instance_json(std::string_view text);

std::string write_schedule_json(const Schedule& schedule);
// Rebuilds the schedule from its job sequences.
Schedule parse_schedule_json(std::string_view text);

// Reads an instance from a file. JSON is detected by a leading '{'.
Instance read_instance_file(const std::filesystem::path& path, const TaillardOptions& options = {});
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Benchmark instances compiled into the library.
std::vector<std::string> list_benchmarks();
Instance load_benchmark(std::string_view name);

}  // namespace jobshop
