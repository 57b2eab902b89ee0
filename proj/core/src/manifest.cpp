#include "hdpbench/manifest.hpp"

#include "hdpbench/error.hpp"
#include "text_util.hpp"

#include <set>

namespace hdpbench {

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    for (std::string_view raw : detail::split_lines(text)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key(detail::trim(line.substr(0, eq)));
        std::string value(detail::trim(line.substr(eq + 1)));
        if (key.empty()) throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": empty key");
        if (!seen.insert(key).second) {
            throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

namespace {

// "group.AEEEM.loc_metric" -> {"group", "AEEEM", "loc_metric"}; the middle part may contain dots.
bool split_key(const std::string& key, std::string& kind, std::string& name, std::string& field) {
    auto first = key.find('.');
    auto last = key.rfind('.');
    if (first == std::string::npos || first == last) return false;
    kind = key.substr(0, first);
    name = key.substr(first + 1, last - first - 1);
    field = key.substr(last + 1);
    return !name.empty();
}

} // namespace

DatasetManifest DatasetManifest::parse(std::string_view text, const std::filesystem::path& base_dir) {
    DatasetManifest m;
    struct Partial {
        std::string group;
        std::string path;
        std::string format;
    };
    std::vector<std::string> order;
    std::map<std::string, Partial, std::less<>> partial;

    for (auto& [key, value] : parse_key_values(text)) {
        std::string kind, name, field;
        if (!split_key(key, kind, name, field)) {
            throw Error(ErrorCode::MalformedInput, "manifest key '" + key + "' is not <kind>.<name>.<field>");
        }
        if (kind == "group") {
            GroupInfo& g = m.groups_[name];
            g.name = name;
            if (field == "loc_metric") g.loc_metric = value;
            else if (field == "granularity") g.granularity = parse_granularity(value);
            else throw Error(ErrorCode::MalformedInput, "unknown group field '" + field + "'");
        } else if (kind == "dataset") {
            if (!partial.contains(name)) order.push_back(name);
            Partial& p = partial[name];
            if (field == "group") p.group = value;
            else if (field == "path") p.path = value;
            else if (field == "format") p.format = value;
            else throw Error(ErrorCode::MalformedInput, "unknown dataset field '" + field + "'");
        } else {
            throw Error(ErrorCode::MalformedInput, "unknown manifest section '" + kind + "'");
        }
    }

    for (const auto& [name, g] : m.groups_) {
        if (g.loc_metric.empty()) throw Error(ErrorCode::InvalidSchema, "group '" + name + "' has no loc_metric");
    }
    for (const auto& name : order) {
        const Partial& p = partial[name];
        if (p.group.empty() || p.path.empty()) {
            throw Error(ErrorCode::MalformedInput, "dataset '" + name + "' needs both group and path");
        }
        if (!m.groups_.contains(p.group)) {
            throw Error(ErrorCode::InvalidSchema, "dataset '" + name + "' refers to undeclared group '" + p.group + "'");
        }
        ManifestEntry e;
        e.name = name;
        e.group = p.group;
        e.path = std::filesystem::path(p.path).is_absolute() ? std::filesystem::path(p.path) : base_dir / p.path;
        e.format = p.format.empty() ? format_from_extension(e.path) : parse_data_format(p.format);
        m.entries_.push_back(std::move(e));
    }
    return m;
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
    try {
        return parse(detail::read_text_file(path), path.parent_path());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw;
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

const GroupInfo& DatasetManifest::group(std::string_view name) const {
    auto it = groups_.find(name);
    if (it == groups_.end()) throw Error(ErrorCode::InvalidArgument, "unknown group '" + std::string(name) + "'");
    return it->second;
}

MetricSchema DatasetManifest::schema_for(const ManifestEntry& entry) const {
    const GroupInfo& g = group(entry.group);
    MetricSchema s;
    s.group_name = g.name;
    s.loc_metric = g.loc_metric;
    s.granularity = g.granularity;
    return s;
}

DefectDataset DatasetManifest::load_entry(const ManifestEntry& entry) const {
    const std::string text = detail::read_text_file(entry.path);
    return parse_dataset(text, entry.name, schema_for(entry), entry.format);
}

std::vector<DefectDataset> DatasetManifest::load_all() const {
    std::vector<DefectDataset> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(load_entry(e));
    return out;
}

} // namespace hdpbench
