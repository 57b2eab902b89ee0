#pragma once

#include "hdpbench/dataset.hpp"
#include "hdpbench/measures.hpp"
#include "hdpbench/registry.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdpbench {

/// scenario1: every plan. scenario2: only the plans on which HDP1 succeeds.
enum class Scenario { Scenario1, Scenario2 };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view text);

/// Flat `key = value` experiment description:
///
///   manifest        = datasets.manifest      (relative to the config file)
///   methods         = HDP1,HDP5,UDP1,...     (default: the seven built-ins)
///   measures        = f1,auc,acc,pmi,popt,ifa
///   effort_fraction = 0.2
///   scenario        = scenario1 | scenario2
///   output_dir      = results                (relative to the config file)
///   seed            = 0
///   workers         = 1
struct ExperimentConfig {
    std::filesystem::path manifest;
    std::vector<std::string> methods;
    std::vector<Measure> measures;
    double effort_fraction = kDefaultEffortFraction;
    Scenario scenario = Scenario::Scenario1;
    std::filesystem::path output_dir = "results";
    std::uint64_t seed = 0;
    unsigned workers = 1;

    /// Defaults filled in: all built-in methods, the six default measures.
    ExperimentConfig();

    /// Throws Error(InvalidArgument) on an empty method or measure list, an
    /// effort fraction outside (0, 1] or zero workers.
    void validate() const;

    static ExperimentConfig parse(std::string_view text, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& path);
};

struct ResultRow {
    std::string method;
    std::string source;
    std::string target;
    Measure measure = Measure::F1;
    std::optional<double> value;
    /// Empty on success; otherwise "NoMatchedMetrics", "MethodError: ..." or
    /// "UndefinedMeasure".
    std::string failure;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr std::string_view kUndefinedMeasure = "UndefinedMeasure";

/// Binary decisions of one (pseudo-)method on one plan. `hits` has one
/// character per actually defective target module, in module order: '1' when
/// the method predicted it defective.
///
/// Methods whose predictions depend on the measure contribute the variant used
/// for the classification measures; per-measure methods contribute two
/// pseudo-methods, "<name>-A" (selected for AUC) and "<name>-F" (for F1).
struct DecisionRow {
    std::string method;
    std::string source;
    std::string target;
    ConfusionMatrix cm;
    std::string hits;

    friend bool operator==(const DecisionRow& a, const DecisionRow& b) {
        return a.method == b.method && a.source == b.source && a.target == b.target && a.cm.tp == b.cm.tp &&
               a.cm.fp == b.cm.fp && a.cm.tn == b.cm.tn && a.cm.fn == b.cm.fn && a.hits == b.hits;
    }
};

struct MethodSummary {
    std::string name;
    MethodKind kind = MethodKind::Supervised;
    /// Failed plans keyed by reason ("NoMatchedMetrics", "MethodError").
    std::map<std::string, std::size_t> failures;

    friend bool operator==(const MethodSummary&, const MethodSummary&) = default;
};

struct DatasetSummary {
    std::string name;
    std::string group;
    std::size_t modules = 0;
    std::size_t defective = 0;

    friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

struct RunSummary {
    Scenario scenario = Scenario::Scenario1;
    double effort_fraction = kDefaultEffortFraction;
    std::uint64_t seed = 0;
    std::size_t plans_enumerated = 0;
    std::size_t plans_evaluated = 0;
    std::vector<MethodSummary> methods;  // configured order
    std::vector<Measure> measures;       // configured order
    std::vector<DatasetSummary> datasets;

    std::size_t method_errors() const;
    const DatasetSummary& dataset(std::string_view name) const;
    const MethodSummary& method(std::string_view name) const;

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct ExperimentResult {
    /// Sorted by target, source, configured method order, configured measure
    /// order; exactly |plans| x |methods| x |measures| rows.
    std::vector<ResultRow> rows;
    std::vector<DecisionRow> decisions;
    RunSummary summary;
};

/// Runs every configured method on every plan of the scenario. Supervised
/// methods train on the source and score the target; unsupervised methods are
/// called with source == target, once per target, and their output is
/// repeated for every plan sharing that target. A method that throws or
/// returns misaligned predictions is recorded as a MethodError row; the run
/// carries on. Output does not depend on the worker count.
ExperimentResult run_experiment(std::span<const DefectDataset> datasets, const ExperimentConfig& cfg,
                                const MethodRegistry& registry = MethodRegistry::with_builtins());

/// Loads the manifest named by the config, then runs.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const MethodRegistry& registry = MethodRegistry::with_builtins());

// ---------------------------------------------------------------------------
// Persistence

inline constexpr std::string_view kResultsFile = "results.tsv";
inline constexpr std::string_view kDecisionsFile = "decisions.tsv";
inline constexpr std::string_view kSummaryFile = "summary.json";

/// results.tsv (method, source, target, measure, value, failure), decisions.tsv
/// and summary.json. Absent values are empty fields. Throws Error(Io) with
/// the path on failure.
void export_results(const ExperimentResult& result, const std::filesystem::path& dir);

ExperimentResult read_results(const std::filesystem::path& dir);

std::string results_tsv(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_results_tsv(std::string_view text);
std::string decisions_tsv(std::span<const DecisionRow> rows);
std::vector<DecisionRow> parse_decisions_tsv(std::string_view text);
std::string summary_json(const RunSummary& summary);
RunSummary parse_summary_json(std::string_view text);

} // namespace hdpbench
