#include "jobshop/formats.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "jobshop/errors.hpp"

namespace jobshop {

extern const char* const kBenchmarkInstancesJson;

namespace {

using nlohmann::json;

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::int64_t parse_integer(std::string_view token, std::size_t line) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
    return value;
}

MetaValue to_meta(const json& value) {
    switch (value.type()) {
        case json::value_t::null: return std::monostate{};
        case json::value_t::boolean: return value.get<bool>();
        case json::value_t::number_integer:
        case json::value_t::number_unsigned: return value.get<std::int64_t>();
        case json::value_t::number_float: return value.get<double>();
        case json::value_t::string: return value.get<std::string>();
        default: return RawJson{value.dump()};
    }
}

json from_meta(const std::string& key, const MetaValue& value) {
    return std::visit(
        [&](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) throw SerializationError("metadata '" + key + "' is not a finite number");
                return v;
            } else if constexpr (std::is_same_v<T, RawJson>) {
                try {
                    return json::parse(v.text);
                } catch (const json::exception& e) {
                    throw SerializationError("metadata '" + key + "' is not valid JSON: " + e.what());
                }
            } else {
                return v;
            }
        },
        value);
}

json metadata_to_json(const Metadata& metadata) {
    json out = json::object();
    for (const auto& [key, value] : metadata) out[key] = from_meta(key, value);
    return out;
}

Metadata metadata_from_json(const json& object) {
    Metadata metadata;
    for (const auto& [key, value] : object.items()) metadata[key] = to_meta(value);
    return metadata;
}

json instance_to_json(const Instance& instance) {
    json out = json::object();
    out["name"] = instance.name();
    out["duration_matrix"] = instance.duration_matrix();
    out["machines_matrix"] = instance.machine_matrix();
    out["metadata"] = metadata_to_json(instance.metadata());
    return out;
}

Instance instance_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError(1, "instance document must be a JSON object");
    for (const char* key : {"duration_matrix", "machines_matrix"})
        if (!doc.contains(key)) throw ParseError(1, std::string("missing key '") + key + "'");
    Metadata metadata;
    if (doc.contains("metadata")) {
        if (!doc["metadata"].is_object()) throw ParseError(1, "'metadata' must be an object");
        metadata = metadata_from_json(doc["metadata"]);
    }
    for (const auto& [key, value] : doc.items())
        if (key != "name" && key != "duration_matrix" && key != "machines_matrix" && key != "metadata")
            metadata[key] = to_meta(value);
    try {
        auto durations = doc["duration_matrix"].get<std::vector<std::vector<Time>>>();
        auto machines = doc["machines_matrix"].get<std::vector<std::vector<int>>>();
        return Instance(doc.value("name", std::string{}), durations, machines, std::move(metadata));
    } catch (const json::exception& e) {
        throw ParseError(1, std::string("malformed matrices: ") + e.what());
    } catch (const Error& e) {
        throw ParseError(1, e.what());
    }
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(1, e.what());
    }
}

struct BenchmarkCatalog {
    std::map<std::string, Instance, std::less<>> instances;
};

const BenchmarkCatalog& catalog() {
    static const BenchmarkCatalog cat = [] {
        BenchmarkCatalog c;
        const json doc = json::parse(kBenchmarkInstancesJson);
        for (const auto& [name, entry] : doc.items()) c.instances.emplace(name, instance_from_json(entry));
        return c;
    }();
    return cat;
}

}  // namespace

Instance parse_taillard(std::string_view text, const TaillardOptions& options) {
    struct Line {
        std::size_t number;
        std::vector<std::string_view> tokens;
    };
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        ++number;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split_tokens(line);
        if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
        pos = end + 1;
    }
    if (lines.empty()) throw ParseError(number, "missing header line");

    const auto& header = lines.front();
    if (header.tokens.size() != 2) throw ParseError(header.number, "header must contain 'jobs machines'");
    const auto num_jobs = parse_integer(header.tokens[0], header.number);
    const auto num_machines = parse_integer(header.tokens[1], header.number);
    if (num_jobs < 1 || num_machines < 1) throw ParseError(header.number, "job and machine counts must be positive");
    if (lines.size() - 1 < static_cast<std::size_t>(num_jobs))
        throw ParseError(lines.back().number, "expected " + std::to_string(num_jobs) + " job lines, found " +
                                                  std::to_string(lines.size() - 1));
    if (lines.size() - 1 > static_cast<std::size_t>(num_jobs))
        throw ParseError(lines[static_cast<std::size_t>(num_jobs) + 1].number, "unexpected data after the last job");

    std::vector<std::vector<Time>> durations;
    std::vector<std::vector<int>> machines;
    for (std::size_t j = 1; j < lines.size(); ++j) {
        const auto& line = lines[j];
        if (line.tokens.size() % 2 != 0) throw ParseError(line.number, "odd number of tokens in job line");
        std::vector<Time> d;
        std::vector<int> m;
        for (std::size_t k = 0; k < line.tokens.size(); k += 2) {
            auto machine = parse_integer(line.tokens[k], line.number) - (options.one_based ? 1 : 0);
            auto duration = parse_integer(line.tokens[k + 1], line.number);
            if (machine < 0 || machine >= num_machines)
                throw ParseError(line.number, "machine id " + std::string(line.tokens[k]) + " out of range");
            if (duration < 0) throw ParseError(line.number, "negative duration");
            m.push_back(static_cast<int>(machine));
            d.push_back(duration);
        }
        durations.push_back(std::move(d));
        machines.push_back(std::move(m));
    }
    return Instance(options.name, durations, machines, {}, static_cast<int>(num_machines));
}

std::string write_taillard(const Instance& instance) {
    std::ostringstream out;
    out << instance.num_jobs() << ' ' << instance.num_machines() << '\n';
    for (int j = 0; j < instance.num_jobs(); ++j) {
        bool first = true;
        for (const auto& op : instance.job(j)) {
            out << (first ? "" : " ") << op.machine_id << ' ' << op.duration;
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

std::string write_instance_json(const Instance& instance) { return instance_to_json(instance).dump(2); }

Instance parse_instance_json(std::string_view text) { return instance_from_json(parse_document(text)); }

std::string write_schedule_json(const Schedule& schedule) {
    json out = json::object();
    out["instance"] = instance_to_json(schedule.instance());
    out["job_sequences"] = schedule.job_sequences();
    out["metadata"] = metadata_to_json(schedule.metadata());
    return out.dump(2);
}

Schedule parse_schedule_json(std::string_view text) {
    const json doc = parse_document(text);
    if (!doc.is_object() || !doc.contains("instance") || !doc.contains("job_sequences"))
        throw ParseError(1, "schedule document needs 'instance' and 'job_sequences'");
    auto instance = std::make_shared<const Instance>(instance_from_json(doc["instance"]));
    JobSequences y;
    try {
        y = doc["job_sequences"].get<JobSequences>();
    } catch (const json::exception& e) {
        throw ParseError(1, std::string("malformed job_sequences: ") + e.what());
    }
    Schedule schedule = from_job_sequences(instance, y);
    if (doc.contains("metadata") && doc["metadata"].is_object()) schedule.metadata() = metadata_from_json(doc["metadata"]);
    return schedule;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

Instance read_instance_file(const std::filesystem::path& path, const TaillardOptions& options) {
    const std::string text = read_text_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_instance_json(text);
    TaillardOptions named = options;
    if (named.name.empty()) named.name = path.stem().string();
    return parse_taillard(text, named);
}

std::vector<std::string> list_benchmarks() {
    std::vector<std::string> names;
    for (const auto& [name, _] : catalog().instances) names.push_back(name);
    return names;
}

Instance load_benchmark(std::string_view name) {
    const auto& instances = catalog().instances;
    auto it = instances.find(name);
    if (it == instances.end()) throw UnknownInstanceError("unknown benchmark instance '" + std::string(name) + "'");
    return it->second;
}

}  // namespace jobshop
