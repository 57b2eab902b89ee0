#pragma once

#include "hdpbench/dataset.hpp"
#include "hdpbench/learner.hpp"
#include "hdpbench/measures.hpp"
#include "hdpbench/prediction.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace hdpbench {

inline constexpr double kClaCutoffPercentile = 50.0;

/// Per-module count of metrics whose value exceeds that metric's percentile
/// cutoff (linear-interpolation percentile).
std::vector<int> cla_counts(const DefectDataset& d, double cutoff_percentile = kClaCutoffPercentile);

/// CLA: score = K (the count above); defective iff K > median(K).
Predictions cla_predict(const DefectDataset& d, double cutoff_percentile = kClaCutoffPercentile);

/// Per-metric violation counts against CLA labels: a defective module whose
/// value is <= the metric's cutoff, or a clean module whose value is above it.
std::vector<std::size_t> clami_violations(const DefectDataset& d, std::span<const Label> cla_labels,
                                          double cutoff_percentile = kClaCutoffPercentile);

/// CLAMI: CLA labelling, keep the metrics with the fewest violations, drop
/// modules violating any kept metric, train logistic regression on what is
/// left and score every module. Falls back to the CLA output when either
/// class disappears.
Predictions clami_predict(const DefectDataset& d, double cutoff_percentile = kClaCutoffPercentile,
                          const LogisticConfig& cfg = {});

struct SpectralResult {
    Predictions predictions;
    Eigen::MatrixXd laplacian;  // empty when computed matrix-free
    Eigen::VectorXd eigenvector;
    double eigenvalue = 0.0;
    bool degenerate = false;
};

/// Problems larger than this run the matrix-free Lanczos path.
inline constexpr std::size_t kSpectralDenseLimit = 1000;

/// Spectral connectivity clustering: z-scored metrics, W(i,j) = max(0, z_i.z_j),
/// L_sym = I - D^-1/2 W D^-1/2, split by the sign of the second eigenvector;
/// the cluster with the larger mean row sum of z-scores is defective and each
/// module's score is its z-score row sum.
SpectralResult spectral_cluster(const DefectDataset& d, std::size_t dense_limit = kSpectralDenseLimit);

inline Predictions spectral_predict(const DefectDataset& d) { return spectral_cluster(d).predictions; }

enum class RankDirection { Down, Up };

/// ManualDown (score = LOC) or ManualUp (score = 1/LOC, LOC clamped to at
/// least 1); the top ceil(n/2)
/// modules in stable score order are predicted defective.
Predictions manual_rank(const DefectDataset& d, RankDirection direction);

/// Predictions ranking by an arbitrary score vector: top ceil(n/2) defective.
Predictions rank_top_half(const DefectDataset& d, const std::vector<double>& scores);

struct BestMetricChoice {
    std::string metric;
    RankDirection direction = RankDirection::Down;
    std::optional<double> value;
    Predictions predictions;
};

/// For every metric ranks modules by its value in both directions, scores the
/// ranking with `measure` against the true labels and keeps the best
/// (schema order, then Down, on ties).
BestMetricChoice best_metric_oracle(const DefectDataset& d, Measure measure,
                                    double effort_fraction = kDefaultEffortFraction);

} // namespace hdpbench
