#pragma once

#include "hdpbench/dataset.hpp"
#include "hdpbench/learner.hpp"
#include "hdpbench/prediction.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <string>
#include <vector>

namespace hdpbench {

// ---------------------------------------------------------------------------
// Metric selection

/// Equal-frequency discretisation into at most `bins` bins. Cut points are
/// order statistics, duplicates merged, so the result depends only on ranks.
/// Returns the bin index of every sample.
std::vector<int> equal_frequency_bins(std::span<const double> feature, int bins = 10);

/// Information gain of the labels given the discretised feature divided by the
/// feature's intrinsic value (entropy of the bin distribution). 0 when the
/// intrinsic value is 0.
double gain_ratio(std::span<const double> feature, std::span<const Label> labels);

/// Metrics ordered by gain ratio (descending, ties in schema order), keeping
/// ceil(fraction * m) of them.
std::vector<std::string> select_top_metrics(const DefectDataset& d, double fraction);

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov similarity

/// sup |ECDF_a - ECDF_b|
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// P(K > lambda) for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Asymptotic two-sample p-value with effective size n*m/(n+m).
double ks_pvalue(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Matching

struct MatchedPair {
    std::string source_metric;
    std::string target_metric;
    double score = 0.0;
};

struct MetricMatch {
    std::vector<MatchedPair> pairs;

    bool empty() const noexcept { return pairs.empty(); }
    double total_weight() const noexcept;
};

/// Maximum-total-weight matching in a bipartite graph given as a rows x cols
/// weight matrix. Edges with weight <= cutoff are absent. Returns, per row,
/// the matched column or -1.
std::vector<int> max_weight_matching(const Eigen::MatrixXd& weights, double cutoff);

inline constexpr double kKsCutoff = 0.05;
inline constexpr double kSelectedFraction = 0.15;

/// KS p-value between every selected source metric and every target metric,
/// then the maximum-weight matching over edges scoring above the cutoff.
MetricMatch match_metrics(const DefectDataset& source, const DefectDataset& target,
                          std::span<const std::string> selected, double cutoff = kKsCutoff);

/// Gain-ratio selection (top 15%), KS matching (cutoff 0.05), logistic
/// regression on the matched source metrics, scoring of the target on the
/// matched target metrics. Fails with NoMatchedMetrics on an empty matching.
HdpOutcome hdp1_predict(const DefectDataset& source, const DefectDataset& target,
                        const LogisticConfig& cfg = {});

// ---------------------------------------------------------------------------
// Distribution characteristics

inline constexpr std::size_t kDistributionFeatures = 14;
using DistributionVector = std::array<double, kDistributionFeatures>;

/// Names of the distribution_vector entries, in order.
const std::array<const char*, kDistributionFeatures>& distribution_feature_names();

/// mode, median, mean, harmonic mean, min, max, range, variation ratio,
/// interquartile range, variance, std, coefficient of variation, skewness,
/// kurtosis -- computed over the metric values of a single module.
DistributionVector distribution_vector(std::span<const double> row);

/// One distribution vector per module.
Eigen::MatrixXd distribution_features(const DefectDataset& d);

/// Re-represents every module by its distribution vector, trains on the
/// source and scores the target. Never fails.
HdpOutcome hdp5_predict(const DefectDataset& source, const DefectDataset& target,
                        const LogisticConfig& cfg = {});

} // namespace hdpbench
