#pragma once

#include "hdpbench/dataset.hpp"
#include "hdpbench/prediction.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdpbench {

// ---------------------------------------------------------------------------
// Paired comparison

/// Remaining paired samples at or below this size get an exact p-value.
inline constexpr std::size_t kWilcoxonExactLimit = 12;

/// Two-sided Wilcoxon signed-rank p-value. Zero differences are dropped, tied
/// |differences| share their mid-rank. Exact enumeration up to
/// kWilcoxonExactLimit pairs, tie-corrected normal approximation above.
double wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y);

/// The normal-approximation path on its own (for cross-checks).
double wilcoxon_signed_rank_normal(std::span<const double> x, std::span<const double> y);

/// Benjamini-Hochberg step-up adjustment, positions preserved.
std::vector<double> bh_adjust(std::span<const double> pvals);

/// (#{x_i > y_j} - #{x_i < y_j}) / (|x| |y|)
double cliffs_delta(std::span<const double> x, std::span<const double> y);

inline constexpr double kSignificance = 0.05;
inline constexpr double kNegligibleDelta = 0.147;

enum class Outcome { Win, Tie, Loss };

std::string_view to_string(Outcome o) noexcept;

/// Win when the (adjusted) p-value is below 0.05 and delta >= 0.147, loss when
/// p < 0.05 and delta <= -0.147, tie otherwise. Without `adjusted_p` the raw
/// Wilcoxon p-value is used. Fewer than two pairs is a tie.
Outcome compare_pair(std::span<const double> x, std::span<const double> y,
                     std::optional<double> adjusted_p = std::nullopt);

struct WtlRecord {
    std::size_t win = 0, tie = 0, loss = 0;

    std::size_t total() const noexcept { return win + tie + loss; }
    /// "w/t/l"
    std::string text() const;
};

/// Paired samples for one comparison unit (a target project). Entries that
/// are absent on either side are dropped before testing.
struct PairedSample {
    std::vector<std::optional<double>> first;
    std::vector<std::optional<double>> second;
};

/// One Wilcoxon test per unit, BH across the units of the family, then
/// compare_pair per unit. `higher_better` = false flips the direction.
WtlRecord win_tie_loss(std::span<const PairedSample> units, bool higher_better = true);

// ---------------------------------------------------------------------------
// Scott-Knott

struct SkGroup {
    std::vector<std::string> methods;  // descending mean
};

struct SkRanking {
    std::vector<SkGroup> groups;         // descending mean
    std::map<std::string, double> means;

    /// 1-based rank of the group holding `method`.
    std::size_t rank_of(std::string_view method) const;
};

inline constexpr double kScottKnottAlpha = 0.05;

/// Classical Scott-Knott clustering of treatment means: best split by
/// between-group sum of squares, accepted when
/// lambda = pi / (2 (pi - 2)) * B0 / sigma0^2 exceeds the chi-square quantile
/// with k / (pi - 2) degrees of freedom, recursively.
SkRanking scott_knott(const std::map<std::string, std::vector<double>>& samples,
                      double alpha = kScottKnottAlpha);

// ---------------------------------------------------------------------------
// Diversity

struct ContingencyTable {
    std::size_t n_cc = 0, n_cw = 0, n_wc = 0, n_ww = 0;

    std::size_t total() const noexcept { return n_cc + n_cw + n_wc + n_ww; }
};

/// McNemar chi-square without continuity correction, 1 degree of freedom.
double mcnemar(const ContingencyTable& ct);

/// Counts over the actually defective modules; "correct" means predicted
/// defective.
ContingencyTable diversity_table(std::span<const ScoredPrediction> a, std::span<const ScoredPrediction> b,
                                 std::span<const Label> truth);

/// Same on bare predicted-label vectors.
ContingencyTable diversity_table(std::span<const Label> a, std::span<const Label> b, std::span<const Label> truth);

// ---------------------------------------------------------------------------
// Satisfactory performance

enum class Criterion { SC1, SC2 };

std::string_view to_string(Criterion c) noexcept;

/// SC1: precision > 0.75 and recall > 0.75. SC2: recall > 0.70 and precision > 0.50.
bool satisfactory(double precision, double recall, Criterion criterion);

/// 100 * satisfied / total
double satisfactory_ratio(std::size_t satisfied, std::size_t total);

struct PrecisionRecall {
    double precision = 0, recall = 0;
};

/// Percentage of combinations meeting the criterion; needs at least one.
double satisfactory_ratio(std::span<const PrecisionRecall> results, Criterion criterion);

} // namespace hdpbench
