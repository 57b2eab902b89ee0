#include "hdpbench/hdp.hpp"

#include "hdpbench/error.hpp"
#include "quantile.hpp"

#include <algorithm>
#include <cmath>

namespace hdpbench {

const std::array<const char*, kDistributionFeatures>& distribution_feature_names() {
    static const std::array<const char*, kDistributionFeatures> names{
        "mode", "median", "mean", "harmonic_mean", "min", "max", "range", "variation_ratio",
        "iqr", "variance", "std", "coefficient_of_variation", "skewness", "kurtosis"};
    return names;
}

DistributionVector distribution_vector(std::span<const double> row) {
    if (row.empty()) throw Error(ErrorCode::InvalidArgument, "distribution_vector: empty row");
    std::vector<double> sorted(row.begin(), row.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    // mode: most frequent value, smallest on ties (runs in a sorted copy)
    double mode = sorted.front();
    std::size_t best_run = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        if (j - i > best_run) {
            best_run = j - i;
            mode = sorted[i];
        }
        i = j;
    }

    double sum = 0;
    for (double v : sorted) sum += v;
    const double mean = sum / n;

    double harmonic = 0;
    if (sorted.front() > 0) {
        double inv = 0;
        for (double v : sorted) inv += 1.0 / v;
        harmonic = n / inv;
    }

    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : sorted) {
        const double c = v - mean;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    const double variance = sorted.size() > 1 ? m2 / (n - 1.0) : 0.0;
    const double std_dev = std::sqrt(variance);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    const bool flat = m2 == 0.0;

    DistributionVector out{};
    out[0] = mode;
    out[1] = detail::quantile_sorted(sorted, 0.5);
    out[2] = mean;
    out[3] = harmonic;
    out[4] = sorted.front();
    out[5] = sorted.back();
    out[6] = sorted.back() - sorted.front();
    out[7] = 1.0 - static_cast<double>(best_run) / n;
    out[8] = detail::quantile_sorted(sorted, 0.75) - detail::quantile_sorted(sorted, 0.25);
    out[9] = variance;
    out[10] = std_dev;
    out[11] = mean != 0.0 ? std_dev / mean : 0.0;
    out[12] = flat ? 0.0 : m3 / std::pow(m2, 1.5);
    out[13] = flat ? 0.0 : m4 / (m2 * m2) - 3.0;
    return out;
}

Eigen::MatrixXd distribution_features(const DefectDataset& d) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(d.n_modules()), static_cast<Eigen::Index>(kDistributionFeatures));
    std::vector<double> row(d.n_metrics());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = d.values()(i, static_cast<Eigen::Index>(j));
        const DistributionVector v = distribution_vector(row);
        for (std::size_t k = 0; k < kDistributionFeatures; ++k) out(i, static_cast<Eigen::Index>(k)) = v[k];
    }
    return out;
}

} // namespace hdpbench
