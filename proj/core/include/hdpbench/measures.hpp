#pragma once

#include "hdpbench/dataset.hpp"
#include "hdpbench/prediction.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hdpbench {

enum class Measure { Precision, Recall, F1, Auc, Acc, Pmi, Popt, Ifa };

/// Stable identifier used in result files: precision, recall, f1, auc, acc,
/// pmi, popt, ifa.
std::string_view to_string(Measure m) noexcept;
/// Table heading: F1, AUC, ACC, PMI@20%, Popt, IFA, ...
std::string_view display_name(Measure m) noexcept;
Measure parse_measure(std::string_view text);

bool is_effort_aware(Measure m) noexcept;
/// IFA counts false alarms, so lower is better; everything else is higher-better.
bool higher_is_better(Measure m) noexcept;

/// F1, AUC, ACC, PMI, Popt, IFA
const std::vector<Measure>& default_measures();

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

/// Defective is the positive class. `truth` is aligned with `preds`; when
/// `truth_ids` is non-empty the module ids must agree position by position.
ConfusionMatrix confusion(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                          std::span<const std::string> truth_ids = {});

struct PrecisionRecallF1 {
    double precision = 0, recall = 0, f1 = 0;
};

/// 0/0 is taken as 0 throughout.
PrecisionRecallF1 prf1(const ConfusionMatrix& cm);

/// Probability that a random defective module outscores a random clean one,
/// ties counting one half. Absent when only one class is present.
std::optional<double> auc(std::span<const double> scores, std::span<const Label> truth);

enum class EffortOrdering { ByScore, Optimal, Worst };

struct EffortCurve {
    /// (cumulative effort fraction, cumulative defect fraction), from (0,0) to (1,1).
    std::vector<std::pair<double, double>> points;

    double area() const noexcept;
};

/// Inspection order of module indices. ByScore: score descending, stable.
/// Optimal: density (label / effort) descending, smaller effort first on ties.
/// Worst: density ascending, larger effort first on ties.
std::vector<std::size_t> inspection_order(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                                          EffortOrdering ordering);

/// Throws Error(NoDefects) when no module is defective.
EffortCurve effort_curve(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                         EffortOrdering ordering);

/// 1 - (area(optimal) - area(m)) / (area(optimal) - area(worst)); 1 when the
/// optimal and worst areas coincide. Absent when nothing is defective.
std::optional<double> popt(std::span<const ScoredPrediction> preds, std::span<const Label> truth);

/// Modules inspected in score order while cumulative effort stays within
/// fraction * total effort; the module that would cross the budget is not
/// inspected and inspection stops there.
std::size_t inspected_within_budget(std::span<const ScoredPrediction> preds, double effort_fraction);

/// Recall among the modules inspected within the budget. Absent when nothing
/// is defective.
std::optional<double> acc_at(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                             double effort_fraction);

/// Fraction of modules inspected within the budget.
double pmi_at(std::span<const ScoredPrediction> preds, double effort_fraction);

/// Clean modules ranked ahead of the first defective one. Absent when nothing
/// is defective.
std::optional<double> ifa(std::span<const ScoredPrediction> preds, std::span<const Label> truth);

inline constexpr double kDefaultEffortFraction = 0.20;

/// Dispatches one measure; undefined values come back as nullopt.
std::optional<double> evaluate(Measure m, std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                               double effort_fraction = kDefaultEffortFraction);

} // namespace hdpbench
