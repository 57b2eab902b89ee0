#include "hdpbench/dataset.hpp"

#include "hdpbench/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace hdpbench {

std::string_view to_string(Granularity g) noexcept {
    switch (g) {
    case Granularity::Class: return "class";
    case Granularity::File: return "file";
    case Granularity::Function: return "function";
    }
    return "class";
}

Granularity parse_granularity(std::string_view text) {
    const std::string t = detail::lower(detail::trim(text));
    if (t == "class") return Granularity::Class;
    if (t == "file") return Granularity::File;
    if (t == "function" || t == "method" || t == "function/method") return Granularity::Function;
    throw Error(ErrorCode::InvalidSchema, "unknown granularity '" + std::string(text) + "'");
}

void MetricSchema::validate() const {
    if (metric_names.empty()) {
        throw Error(ErrorCode::InvalidSchema, "group '" + group_name + "' has no metrics");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& m : metric_names) {
        if (m.empty()) throw Error(ErrorCode::InvalidSchema, "empty metric name in group '" + group_name + "'");
        if (!seen.insert(m).second) {
            throw Error(ErrorCode::InvalidSchema, "duplicate metric '" + m + "' in group '" + group_name + "'");
        }
    }
    if (!seen.contains(loc_metric)) {
        throw Error(ErrorCode::InvalidSchema,
                    "LOC metric '" + loc_metric + "' is not a metric of group '" + group_name + "'");
    }
}

std::size_t MetricSchema::index_of(std::string_view metric) const {
    auto it = std::find(metric_names.begin(), metric_names.end(), metric);
    if (it == metric_names.end()) {
        throw Error(ErrorCode::UnknownMetric, "metric '" + std::string(metric) + "' not in group '" + group_name + "'");
    }
    return static_cast<std::size_t>(it - metric_names.begin());
}

bool MetricSchema::contains(std::string_view metric) const {
    return std::find(metric_names.begin(), metric_names.end(), metric) != metric_names.end();
}

namespace {

std::vector<std::string> default_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("m" + std::to_string(i));
    return ids;
}

} // namespace

DefectDataset::DefectDataset(std::string name, MetricSchema schema, Eigen::MatrixXd values,
                             std::vector<Label> labels, std::vector<std::string> module_ids)
    : name_(std::move(name)), schema_(std::move(schema)), values_(std::move(values)),
      labels_(std::move(labels)), module_ids_(std::move(module_ids)) {
    schema_.validate();
    if (labels_.empty()) throw Error(ErrorCode::ZeroModules, "dataset '" + name_ + "' has no modules");
    if (static_cast<std::size_t>(values_.rows()) != labels_.size() || module_ids_.size() != labels_.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "dataset '" + name_ + "': " + std::to_string(values_.rows()) + " rows, " +
                        std::to_string(labels_.size()) + " labels, " + std::to_string(module_ids_.size()) + " ids");
    }
    if (static_cast<std::size_t>(values_.cols()) != schema_.metric_names.size()) {
        throw Error(ErrorCode::MetricCountMismatch,
                    "dataset '" + name_ + "': " + std::to_string(values_.cols()) + " columns but schema has " +
                        std::to_string(schema_.metric_names.size()) + " metrics");
    }
    if (!values_.allFinite()) throw Error(ErrorCode::NonNumericCell, "dataset '" + name_ + "' has non-finite values");
}

DefectDataset::DefectDataset(std::string name, MetricSchema schema, Eigen::MatrixXd values,
                             std::vector<Label> labels)
    : DefectDataset(std::move(name), std::move(schema), std::move(values), labels,
                    default_ids(labels.size())) {}

Eigen::VectorXd DefectDataset::column(std::string_view metric) const {
    return values_.col(static_cast<Eigen::Index>(schema_.index_of(metric)));
}

DefectDataset DefectDataset::select_metrics(std::span<const std::string> metrics) const {
    if (metrics.empty()) throw Error(ErrorCode::InvalidArgument, "select_metrics: empty metric list");
    MetricSchema sub;
    sub.group_name = schema_.group_name;
    sub.granularity = schema_.granularity;
    Eigen::MatrixXd sub_values(values_.rows(), static_cast<Eigen::Index>(metrics.size()));
    for (std::size_t j = 0; j < metrics.size(); ++j) {
        sub.metric_names.push_back(metrics[j]);
        sub_values.col(static_cast<Eigen::Index>(j)) = values_.col(static_cast<Eigen::Index>(schema_.index_of(metrics[j])));
    }
    sub.loc_metric = sub.contains(schema_.loc_metric) ? schema_.loc_metric : sub.metric_names.front();
    return DefectDataset(name_, std::move(sub), std::move(sub_values), labels_, module_ids_);
}

DataFormat parse_data_format(std::string_view text) {
    const std::string t = detail::lower(detail::trim(text));
    if (t == "csv") return DataFormat::Csv;
    if (t == "arff" || t == "arff-subset") return DataFormat::ArffSubset;
    throw Error(ErrorCode::InvalidArgument, "unknown data format '" + std::string(text) + "'");
}

DataFormat format_from_extension(const std::filesystem::path& path) {
    return detail::lower(path.extension().string()) == ".arff" ? DataFormat::ArffSubset : DataFormat::Csv;
}

Label parse_label(std::string_view raw) {
    const std::string t = detail::lower(detail::unquote(detail::trim(raw)));
    static const std::unordered_set<std::string> defective{"true", "t", "y", "yes", "buggy", "defective", "bug"};
    static const std::unordered_set<std::string> clean{"false", "f", "n", "no", "clean", "non-defective",
                                                       "nondefective", "non_defective"};
    if (defective.contains(t)) return Label::Defective;
    if (clean.contains(t)) return Label::NonDefective;
    if (auto v = detail::parse_double(t)) {
        if (*v < 0 || std::floor(*v) != *v) {
            throw Error(ErrorCode::UnrecognizedLabel, "label value '" + std::string(raw) + "' is not a bug count");
        }
        return *v > 0 ? Label::Defective : Label::NonDefective;
    }
    throw Error(ErrorCode::UnrecognizedLabel, "cannot interpret label '" + std::string(raw) + "'");
}

namespace {

bool is_label_column(std::string_view header) {
    const std::string h = detail::lower(header);
    return h == "bug" || h == "bugs" || h == "label" || h == "defective" || h == "isdefective";
}

bool is_id_column(std::string_view header) {
    const std::string h = detail::lower(header);
    return h == "id" || h == "module" || h == "module_id" || h == "name";
}

struct RawTable {
    std::vector<std::string> metric_names;
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    std::vector<std::string> ids;
};

RawTable read_csv(std::string_view text, const std::string& origin) {
    RawTable table;
    std::vector<std::string_view> lines = detail::split_lines(text);
    std::size_t line_no = 0;
    auto next_content = [&]() -> std::optional<std::string_view> {
        while (line_no < lines.size()) {
            std::string_view l = detail::trim(lines[line_no++]);
            if (!l.empty()) return l;
        }
        return std::nullopt;
    };
    auto header_line = next_content();
    if (!header_line) throw Error(ErrorCode::MalformedInput, origin + ": missing header row");
    std::vector<std::string> header = detail::split_fields(*header_line, ',');

    std::optional<std::size_t> label_col;
    std::optional<std::size_t> id_col;
    std::vector<std::size_t> metric_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (is_label_column(header[c])) {
            if (label_col) throw Error(ErrorCode::MalformedInput, origin + ": more than one label column");
            label_col = c;
        } else if (is_id_column(header[c]) && !id_col) {
            id_col = c;
        } else {
            metric_cols.push_back(c);
            table.metric_names.push_back(header[c]);
        }
    }
    if (!label_col) {
        throw Error(ErrorCode::MissingLabelColumn,
                    origin + ": no column named bug, bugs, label, defective or isDefective");
    }

    while (auto line = next_content()) {
        std::vector<std::string> fields = detail::split_fields(*line, ',');
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::MalformedInput, origin + ":" + std::to_string(line_no) + ": expected " +
                                                       std::to_string(header.size()) + " fields, found " +
                                                       std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(metric_cols.size());
        for (std::size_t c : metric_cols) {
            auto v = detail::parse_double(fields[c]);
            if (!v || !std::isfinite(*v)) {
                throw Error(ErrorCode::NonNumericCell, origin + ":" + std::to_string(line_no) + ": column '" +
                                                           header[c] + "' holds '" + fields[c] + "'");
            }
            row.push_back(*v);
        }
        table.rows.push_back(std::move(row));
        table.labels.push_back(parse_label(fields[*label_col]));
        table.ids.push_back(id_col ? fields[*id_col] : "m" + std::to_string(table.ids.size()));
    }
    return table;
}

RawTable read_arff(std::string_view text, const std::string& origin) {
    RawTable table;
    std::vector<std::string> attributes;
    std::vector<bool> numeric;
    bool in_data = false;
    std::size_t line_no = 0;
    for (std::string_view raw : detail::split_lines(text)) {
        ++line_no;
        std::string_view line = detail::trim(raw);
        if (line.empty() || line.front() == '%') continue;
        if (!in_data) {
            const std::string lowered = detail::lower(line);
            if (lowered.starts_with("@relation")) continue;
            if (lowered.starts_with("@attribute")) {
                std::string_view rest = detail::trim(line.substr(10));
                std::string name;
                if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
                    const char q = rest.front();
                    auto close = rest.find(q, 1);
                    if (close == std::string_view::npos) {
                        throw Error(ErrorCode::MalformedInput, origin + ":" + std::to_string(line_no) + ": unterminated attribute name");
                    }
                    name = std::string(rest.substr(1, close - 1));
                    rest = detail::trim(rest.substr(close + 1));
                } else {
                    auto space = rest.find_first_of(" \t");
                    if (space == std::string_view::npos) {
                        throw Error(ErrorCode::MalformedInput, origin + ":" + std::to_string(line_no) + ": attribute without type");
                    }
                    name = std::string(rest.substr(0, space));
                    rest = detail::trim(rest.substr(space));
                }
                const std::string type = detail::lower(rest);
                attributes.push_back(name);
                numeric.push_back(type == "numeric" || type == "real" || type == "integer");
                continue;
            }
            if (lowered.starts_with("@data")) {
                if (attributes.size() < 2) {
                    throw Error(ErrorCode::MalformedInput, origin + ": need at least one metric and a class attribute");
                }
                for (std::size_t a = 0; a + 1 < attributes.size(); ++a) {
                    if (!numeric[a]) {
                        throw Error(ErrorCode::NonNumericCell, origin + ": attribute '" + attributes[a] + "' is not numeric");
                    }
                    table.metric_names.push_back(attributes[a]);
                }
                in_data = true;
                continue;
            }
            throw Error(ErrorCode::MalformedInput, origin + ":" + std::to_string(line_no) + ": unexpected line before @data");
        }
        std::vector<std::string> fields = detail::split_fields(line, ',');
        if (fields.size() != attributes.size()) {
            throw Error(ErrorCode::MalformedInput, origin + ":" + std::to_string(line_no) + ": expected " +
                                                       std::to_string(attributes.size()) + " values, found " +
                                                       std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(attributes.size() - 1);
        for (std::size_t a = 0; a + 1 < attributes.size(); ++a) {
            auto v = detail::parse_double(fields[a]);
            if (!v || !std::isfinite(*v)) {
                throw Error(ErrorCode::NonNumericCell, origin + ":" + std::to_string(line_no) + ": attribute '" +
                                                           attributes[a] + "' holds '" + fields[a] + "'");
            }
            row.push_back(*v);
        }
        table.rows.push_back(std::move(row));
        table.labels.push_back(parse_label(fields.back()));
        table.ids.push_back("m" + std::to_string(table.ids.size()));
    }
    if (!in_data) throw Error(ErrorCode::MalformedInput, origin + ": no @data section");
    return table;
}

} // namespace

DefectDataset parse_dataset(std::string_view text, std::string name, const MetricSchema& schema,
                            DataFormat format) {
    RawTable table = format == DataFormat::Csv ? read_csv(text, name) : read_arff(text, name);
    if (table.rows.empty()) throw Error(ErrorCode::ZeroModules, name + ": no data rows");

    MetricSchema resolved = schema;
    std::vector<std::size_t> source_col(table.metric_names.size());
    std::iota(source_col.begin(), source_col.end(), 0);
    if (schema.metric_names.empty()) {
        resolved.metric_names = table.metric_names;
    } else {
        if (schema.metric_names.size() != table.metric_names.size()) {
            throw Error(ErrorCode::MetricCountMismatch,
                        name + ": file has " + std::to_string(table.metric_names.size()) + " metrics, schema expects " +
                            std::to_string(schema.metric_names.size()));
        }
        std::unordered_map<std::string_view, std::size_t> in_file;
        for (std::size_t c = 0; c < table.metric_names.size(); ++c) in_file.emplace(table.metric_names[c], c);
        for (std::size_t j = 0; j < schema.metric_names.size(); ++j) {
            auto it = in_file.find(schema.metric_names[j]);
            if (it == in_file.end()) {
                throw Error(ErrorCode::UnknownMetric, name + ": schema metric '" + schema.metric_names[j] + "' missing from file");
            }
            source_col[j] = it->second;
        }
    }
    resolved.validate();

    Eigen::MatrixXd values(static_cast<Eigen::Index>(table.rows.size()),
                           static_cast<Eigen::Index>(resolved.metric_names.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        for (std::size_t j = 0; j < source_col.size(); ++j) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table.rows[i][source_col[j]];
        }
    }
    return DefectDataset(std::move(name), std::move(resolved), std::move(values), std::move(table.labels),
                         std::move(table.ids));
}

DefectDataset load_dataset(const std::filesystem::path& path, const MetricSchema& schema, DataFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str(), path.stem().string(), schema, format);
}

std::string format_percent(double numerator, double denominator) {
    const double pct = denominator > 0 ? 100.0 * numerator / denominator : 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", pct);
    return buf;
}

std::string DatasetStats::pct_text() const { return format_percent(static_cast<double>(n_defective), static_cast<double>(n_modules)); }

DatasetStats dataset_stats(const DefectDataset& d) {
    DatasetStats s;
    s.n_modules = d.n_modules();
    s.n_defective = static_cast<std::size_t>(std::count(d.labels().begin(), d.labels().end(), Label::Defective));
    s.pct_defective = 100.0 * static_cast<double>(s.n_defective) / static_cast<double>(s.n_modules);
    return s;
}

std::vector<double> loc_values(const DefectDataset& d) {
    Eigen::VectorXd col = d.column(d.schema().loc_metric);
    return {col.data(), col.data() + col.size()};
}

std::vector<CombinationPlan> enumerate_combinations(std::span<const DatasetSignature> datasets) {
    std::vector<std::set<std::string>> metric_sets;
    metric_sets.reserve(datasets.size());
    for (const auto& d : datasets) metric_sets.emplace_back(d.metric_names.begin(), d.metric_names.end());

    std::vector<CombinationPlan> plans;
    for (std::size_t t = 0; t < datasets.size(); ++t) {
        for (std::size_t s = 0; s < datasets.size(); ++s) {
            if (s == t || datasets[s].name == datasets[t].name) continue;
            if (metric_sets[s] == metric_sets[t]) continue;
            plans.push_back({datasets[s].name, datasets[t].name});
        }
    }
    std::sort(plans.begin(), plans.end(), [](const CombinationPlan& a, const CombinationPlan& b) {
        return std::tie(a.target, a.source) < std::tie(b.target, b.source);
    });
    return plans;
}

std::vector<CombinationPlan> enumerate_combinations(std::span<const DefectDataset> datasets) {
    std::vector<DatasetSignature> sigs;
    sigs.reserve(datasets.size());
    for (const auto& d : datasets) sigs.push_back({d.name(), d.schema().metric_names});
    return enumerate_combinations(std::span<const DatasetSignature>(sigs));
}

} // namespace hdpbench
