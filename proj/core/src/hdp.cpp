#include "hdpbench/hdp.hpp"

#include "hdpbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hdpbench {

std::vector<int> equal_frequency_bins(std::span<const double> feature, int bins) {
    if (bins < 1) throw Error(ErrorCode::InvalidArgument, "equal_frequency_bins: bins must be positive");
    std::vector<double> sorted(feature.begin(), feature.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    std::vector<double> cuts;
    for (int k = 1; k < bins && n > 0; ++k) {
        const std::size_t idx = static_cast<std::size_t>(k) * n / static_cast<std::size_t>(bins);
        if (idx < n) cuts.push_back(sorted[idx]);
    }
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<int> out;
    out.reserve(feature.size());
    for (double x : feature) {
        out.push_back(static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin()));
    }
    return out;
}

namespace {

double entropy_of_counts(std::span<const double> counts, double total) {
    double h = 0;
    for (double c : counts) {
        if (c > 0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

} // namespace

double gain_ratio(std::span<const double> feature, std::span<const Label> labels) {
    if (feature.size() != labels.size()) {
        throw Error(ErrorCode::DimensionMismatch, "gain_ratio: feature and label lengths differ");
    }
    if (feature.size() < 2) throw Error(ErrorCode::InvalidArgument, "gain_ratio needs at least two samples");

    const std::vector<int> bin = equal_frequency_bins(feature);
    const int n_bins = *std::max_element(bin.begin(), bin.end()) + 1;
    std::vector<double> bin_total(static_cast<std::size_t>(n_bins), 0.0);
    std::vector<double> bin_defective(static_cast<std::size_t>(n_bins), 0.0);
    double defective = 0;
    for (std::size_t i = 0; i < bin.size(); ++i) {
        const auto b = static_cast<std::size_t>(bin[i]);
        bin_total[b] += 1;
        if (is_defective(labels[i])) {
            bin_defective[b] += 1;
            defective += 1;
        }
    }
    const double n = static_cast<double>(feature.size());
    const double intrinsic = entropy_of_counts(bin_total, n);
    if (intrinsic <= 0) return 0.0;

    const double class_counts[2] = {defective, n - defective};
    double conditional = 0;
    for (std::size_t b = 0; b < bin_total.size(); ++b) {
        if (bin_total[b] == 0) continue;
        const double cc[2] = {bin_defective[b], bin_total[b] - bin_defective[b]};
        conditional += bin_total[b] / n * entropy_of_counts(cc, bin_total[b]);
    }
    const double gain = entropy_of_counts(class_counts, n) - conditional;
    return std::clamp(gain / intrinsic, 0.0, 1.0);
}

std::vector<std::string> select_top_metrics(const DefectDataset& d, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "select_top_metrics: fraction must lie in (0, 1]");
    }
    const std::size_t m = d.n_metrics();
    std::vector<double> gain(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Eigen::VectorXd col = d.values().col(static_cast<Eigen::Index>(j));
        gain[j] = d.n_modules() >= 2 ? gain_ratio({col.data(), static_cast<std::size_t>(col.size())}, d.labels()) : 0.0;
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });

    // the epsilon keeps e.g. 0.15 * 20 at 3 despite binary rounding
    auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(m) - 1e-9));
    keep = std::clamp<std::size_t>(keep, 1, m);
    std::vector<std::string> out;
    out.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) out.push_back(d.schema().metric_names[order[k]]);
    return out;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "ks_statistic: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return d;
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (lambda < 1.18) {
        // Jacobi theta form of the CDF converges quickly for small lambda.
        double cdf = 0;
        const double scale = -pi * pi / (8.0 * lambda * lambda);
        for (int k = 1; k <= 50; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(odd * odd * scale);
            cdf += term;
            if (term < 1e-17) break;
        }
        cdf *= std::sqrt(2.0 * pi) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue(std::span<const double> a, std::span<const double> b) {
    const double d = ks_statistic(a, b);
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    return kolmogorov_survival(std::sqrt(n * m / (n + m)) * d);
}

double MetricMatch::total_weight() const noexcept {
    double total = 0;
    for (const auto& p : pairs) total += p.score;
    return total;
}

namespace {

Eigen::MatrixXd columns(const DefectDataset& d, std::span<const std::string> names) {
    Eigen::MatrixXd out(d.values().rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t j = 0; j < names.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = d.values().col(static_cast<Eigen::Index>(d.schema().index_of(names[j])));
    }
    return out;
}

std::vector<double> column_vector(const DefectDataset& d, std::size_t j) {
    const auto col = d.values().col(static_cast<Eigen::Index>(j));
    return {col.data(), col.data() + col.size()};
}

} // namespace

MetricMatch match_metrics(const DefectDataset& source, const DefectDataset& target,
                          std::span<const std::string> selected, double cutoff) {
    std::vector<std::vector<double>> source_cols;
    source_cols.reserve(selected.size());
    for (const auto& name : selected) source_cols.push_back(column_vector(source, source.schema().index_of(name)));
    std::vector<std::vector<double>> target_cols;
    target_cols.reserve(target.n_metrics());
    for (std::size_t t = 0; t < target.n_metrics(); ++t) target_cols.push_back(column_vector(target, t));

    Eigen::MatrixXd weights(static_cast<Eigen::Index>(selected.size()), static_cast<Eigen::Index>(target.n_metrics()));
    for (std::size_t s = 0; s < selected.size(); ++s) {
        for (std::size_t t = 0; t < target.n_metrics(); ++t) {
            weights(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) = ks_pvalue(source_cols[s], target_cols[t]);
        }
    }

    const std::vector<int> assignment = max_weight_matching(weights, cutoff);
    MetricMatch match;
    for (std::size_t s = 0; s < assignment.size(); ++s) {
        if (assignment[s] < 0) continue;
        match.pairs.push_back({selected[s], target.schema().metric_names[static_cast<std::size_t>(assignment[s])],
                               weights(static_cast<Eigen::Index>(s), assignment[s])});
    }
    return match;
}

HdpOutcome hdp1_predict(const DefectDataset& source, const DefectDataset& target, const LogisticConfig& cfg) {
    const std::vector<std::string> selected = select_top_metrics(source, kSelectedFraction);
    const MetricMatch match = match_metrics(source, target, selected, kKsCutoff);
    if (match.empty()) {
        return HdpOutcome::failure(FailureReason::NoMatchedMetrics);
    }
    std::vector<std::string> source_metrics, target_metrics;
    for (const auto& p : match.pairs) {
        source_metrics.push_back(p.source_metric);
        target_metrics.push_back(p.target_metric);
    }
    const LogisticModel model = train_logistic(columns(source, source_metrics), source.labels(), cfg);
    return HdpOutcome::success(predictions_from_proba(target, predict_proba(model, columns(target, target_metrics))));
}

HdpOutcome hdp5_predict(const DefectDataset& source, const DefectDataset& target, const LogisticConfig& cfg) {
    const LogisticModel model = train_logistic(distribution_features(source), source.labels(), cfg);
    return HdpOutcome::success(predictions_from_proba(target, predict_proba(model, distribution_features(target))));
}

} // namespace hdpbench
