#include "hdpbench/error.hpp"
#include "hdpbench/harness.hpp"
#include "hdpbench/manifest.hpp"
#include "text_util.hpp"

#include <charconv>

namespace hdpbench {

std::string_view to_string(Scenario s) noexcept { return s == Scenario::Scenario1 ? "scenario1" : "scenario2"; }

Scenario parse_scenario(std::string_view text) {
    const std::string t = detail::lower(detail::trim(text));
    if (t == "scenario1") return Scenario::Scenario1;
    if (t == "scenario2") return Scenario::Scenario2;
    throw Error(ErrorCode::MalformedInput, "unknown scenario '" + std::string(text) + "'");
}

ExperimentConfig::ExperimentConfig() : methods(MethodRegistry::with_builtins().names()), measures(default_measures()) {}

void ExperimentConfig::validate() const {
    if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "config: no methods");
    if (measures.empty()) throw Error(ErrorCode::InvalidArgument, "config: no measures");
    if (!(effort_fraction > 0.0 && effort_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "config: effort_fraction must lie in (0, 1]");
    }
    if (workers == 0) throw Error(ErrorCode::InvalidArgument, "config: workers must be positive");
}

namespace {

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    for (const std::string& item : detail::split_exact(value, ',')) {
        std::string_view t = detail::trim(item);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

template <typename Int>
Int parse_unsigned(std::string_view key, std::string_view value) {
    Int v{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::MalformedInput, "config: '" + std::string(key) + "' is not a non-negative integer");
    }
    return v;
}

} // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    for (const auto& [key, value] : parse_key_values(text)) {
        if (key == "manifest") {
            cfg.manifest = base_dir / value;
        } else if (key == "methods") {
            cfg.methods = split_list(value);
        } else if (key == "measures") {
            cfg.measures.clear();
            for (const auto& m : split_list(value)) cfg.measures.push_back(parse_measure(m));
        } else if (key == "effort_fraction") {
            auto v = detail::parse_double(value);
            if (!v) throw Error(ErrorCode::MalformedInput, "config: effort_fraction is not a number");
            cfg.effort_fraction = *v;
        } else if (key == "scenario") {
            cfg.scenario = parse_scenario(value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "seed") {
            cfg.seed = parse_unsigned<std::uint64_t>(key, value);
        } else if (key == "workers") {
            cfg.workers = parse_unsigned<unsigned>(key, value);
        } else {
            throw Error(ErrorCode::MalformedInput, "config: unknown key '" + key + "'");
        }
    }
    if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    return parse(detail::read_text_file(path), path.parent_path());
}

} // namespace hdpbench
