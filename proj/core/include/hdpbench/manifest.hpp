#pragma once

#include "hdpbench/dataset.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hdpbench {

/// `key = value` lines, '#' starts a comment, blank lines ignored. Keys keep
/// their file order; a repeated key is an error.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

struct GroupInfo {
    std::string name;
    std::string loc_metric;
    Granularity granularity = Granularity::Class;
};

struct ManifestEntry {
    std::string name;
    std::string group;
    std::filesystem::path path;
    DataFormat format = DataFormat::Csv;
};

/// Dataset manifest:
///
///   group.<G>.loc_metric  = <metric name>
///   group.<G>.granularity = class|file|function
///   dataset.<D>.group     = <G>
///   dataset.<D>.path      = <file, relative to the manifest>
///   dataset.<D>.format    = csv|arff        (optional, from extension)
///
/// Datasets keep declaration order.
class DatasetManifest {
public:
    static DatasetManifest parse(std::string_view text, const std::filesystem::path& base_dir);
    static DatasetManifest load(const std::filesystem::path& path);

    const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }
    const GroupInfo& group(std::string_view name) const;
    const std::map<std::string, GroupInfo, std::less<>>& groups() const noexcept { return groups_; }

    MetricSchema schema_for(const ManifestEntry& entry) const;
    DefectDataset load_entry(const ManifestEntry& entry) const;
    std::vector<DefectDataset> load_all() const;

private:
    std::map<std::string, GroupInfo, std::less<>> groups_;
    std::vector<ManifestEntry> entries_;
};

} // namespace hdpbench
