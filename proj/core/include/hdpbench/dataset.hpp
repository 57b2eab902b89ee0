#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdpbench {

enum class Label : std::uint8_t { NonDefective = 0, Defective = 1 };

inline bool is_defective(Label l) noexcept { return l == Label::Defective; }

enum class Granularity { Class, File, Function };

std::string_view to_string(Granularity g) noexcept;
Granularity parse_granularity(std::string_view text);

/// Column layout of one dataset group. When `metric_names` is left empty the
/// loader takes the names from the file header and validates `loc_metric`
/// against them.
struct MetricSchema {
    std::string group_name;
    std::vector<std::string> metric_names;
    std::string loc_metric;
    Granularity granularity = Granularity::Class;

    /// Throws Error(InvalidSchema) when names are empty or duplicated or the
    /// LOC metric is not one of them.
    void validate() const;

    std::size_t index_of(std::string_view metric) const;
    bool contains(std::string_view metric) const;
};

/// One project: a named metric matrix (one row per module) plus binary labels.
/// Immutable after construction; the constructor enforces every invariant.
class DefectDataset {
public:
    DefectDataset(std::string name, MetricSchema schema, Eigen::MatrixXd values,
                  std::vector<Label> labels, std::vector<std::string> module_ids);

    /// Convenience constructor that numbers modules "m0", "m1", ...
    DefectDataset(std::string name, MetricSchema schema, Eigen::MatrixXd values,
                  std::vector<Label> labels);

    const std::string& name() const noexcept { return name_; }
    const MetricSchema& schema() const noexcept { return schema_; }
    const Eigen::MatrixXd& values() const noexcept { return values_; }
    const std::vector<Label>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& module_ids() const noexcept { return module_ids_; }

    std::size_t n_modules() const noexcept { return labels_.size(); }
    std::size_t n_metrics() const noexcept { return schema_.metric_names.size(); }

    Eigen::VectorXd column(std::string_view metric) const;

    /// Copy of this dataset restricted to the given metrics, in the given order.
    /// The LOC designation is kept only if the LOC metric survives; otherwise
    /// the first kept metric stands in.
    DefectDataset select_metrics(std::span<const std::string> metrics) const;

private:
    std::string name_;
    MetricSchema schema_;
    Eigen::MatrixXd values_;
    std::vector<Label> labels_;
    std::vector<std::string> module_ids_;
};

enum class DataFormat { Csv, ArffSubset };

DataFormat parse_data_format(std::string_view text);
/// csv unless the extension is .arff
DataFormat format_from_extension(const std::filesystem::path& path);

/// Maps one raw class cell to a binary label. Accepts 0/1, true/false, Y/N,
/// yes/no, buggy/clean, defective/non-defective, and integer bug counts
/// (count > 0 is defective). Throws Error(UnrecognizedLabel) otherwise.
Label parse_label(std::string_view raw);

DefectDataset load_dataset(const std::filesystem::path& path, const MetricSchema& schema,
                           DataFormat format);

/// Parses from an in-memory document; `name` becomes the dataset name.
DefectDataset parse_dataset(std::string_view text, std::string name, const MetricSchema& schema,
                            DataFormat format);

struct DatasetStats {
    std::size_t n_modules = 0;
    std::size_t n_defective = 0;
    double pct_defective = 0.0;

    /// "39.81" style, two decimals, no percent sign.
    std::string pct_text() const;
};

DatasetStats dataset_stats(const DefectDataset& d);

/// Per-module LOC, i.e. the column the schema designates as the LOC metric.
std::vector<double> loc_values(const DefectDataset& d);

/// Ordered heterogeneous (source, target) pair.
struct CombinationPlan {
    std::string source;
    std::string target;

    friend bool operator==(const CombinationPlan&, const CombinationPlan&) = default;
};

/// Every ordered pair whose metric-name sets differ, sorted by target then
/// source name.
std::vector<CombinationPlan> enumerate_combinations(std::span<const DefectDataset> datasets);

/// Same enumeration on bare (name, metric names) descriptors.
struct DatasetSignature {
    std::string name;
    std::vector<std::string> metric_names;
};
std::vector<CombinationPlan> enumerate_combinations(std::span<const DatasetSignature> datasets);

/// Fixed two-decimal percentage text, e.g. format_percent(3, 31) == "9.68".
std::string format_percent(double numerator, double denominator);

} // namespace hdpbench
