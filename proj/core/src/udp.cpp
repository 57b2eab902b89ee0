#include "hdpbench/udp.hpp"

#include "hdpbench/error.hpp"
#include "quantile.hpp"

#include <algorithm>
#include <numeric>

namespace hdpbench {

namespace {

void check_percentile(double p) {
    if (!(p > 0.0 && p < 100.0)) throw Error(ErrorCode::InvalidArgument, "cutoff percentile must lie in (0, 100)");
}

std::vector<double> metric_cutoffs(const DefectDataset& d, double cutoff_percentile) {
    std::vector<double> cutoffs(d.n_metrics());
    for (std::size_t j = 0; j < d.n_metrics(); ++j) {
        const auto col = d.values().col(static_cast<Eigen::Index>(j));
        cutoffs[j] = detail::quantile(std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
                                      cutoff_percentile / 100.0);
    }
    return cutoffs;
}

} // namespace

std::vector<int> cla_counts(const DefectDataset& d, double cutoff_percentile) {
    check_percentile(cutoff_percentile);
    const std::vector<double> cutoffs = metric_cutoffs(d, cutoff_percentile);
    std::vector<int> k(d.n_modules(), 0);
    for (std::size_t i = 0; i < d.n_modules(); ++i) {
        for (std::size_t j = 0; j < d.n_metrics(); ++j) {
            if (d.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > cutoffs[j]) ++k[i];
        }
    }
    return k;
}

Predictions cla_predict(const DefectDataset& d, double cutoff_percentile) {
    const std::vector<int> k = cla_counts(d, cutoff_percentile);
    std::vector<double> kd(k.begin(), k.end());
    const double median = detail::quantile(kd, 0.5);
    const std::vector<double> effort = module_efforts(d);
    Predictions out;
    out.reserve(d.n_modules());
    for (std::size_t i = 0; i < d.n_modules(); ++i) {
        out.push_back({d.module_ids()[i], kd[i], kd[i] > median ? Label::Defective : Label::NonDefective, effort[i]});
    }
    return out;
}

std::vector<std::size_t> clami_violations(const DefectDataset& d, std::span<const Label> cla_labels,
                                          double cutoff_percentile) {
    check_percentile(cutoff_percentile);
    if (cla_labels.size() != d.n_modules()) {
        throw Error(ErrorCode::DimensionMismatch, "clami_violations: label count differs from module count");
    }
    const std::vector<double> cutoffs = metric_cutoffs(d, cutoff_percentile);
    std::vector<std::size_t> violations(d.n_metrics(), 0);
    for (std::size_t j = 0; j < d.n_metrics(); ++j) {
        for (std::size_t i = 0; i < d.n_modules(); ++i) {
            const bool high = d.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > cutoffs[j];
            if (high != is_defective(cla_labels[i])) ++violations[j];
        }
    }
    return violations;
}

Predictions clami_predict(const DefectDataset& d, double cutoff_percentile, const LogisticConfig& cfg) {
    Predictions cla = cla_predict(d, cutoff_percentile);
    std::vector<Label> labels;
    labels.reserve(cla.size());
    for (const auto& p : cla) labels.push_back(p.predicted);

    const std::vector<std::size_t> violations = clami_violations(d, labels, cutoff_percentile);
    const std::size_t fewest = *std::min_element(violations.begin(), violations.end());
    std::vector<std::size_t> kept_metrics;
    for (std::size_t j = 0; j < violations.size(); ++j) {
        if (violations[j] == fewest) kept_metrics.push_back(j);
    }

    const std::vector<double> cutoffs = metric_cutoffs(d, cutoff_percentile);
    std::vector<std::size_t> kept_modules;
    for (std::size_t i = 0; i < d.n_modules(); ++i) {
        bool clean_row = true;
        for (std::size_t j : kept_metrics) {
            const bool high = d.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > cutoffs[j];
            if (high != is_defective(labels[i])) {
                clean_row = false;
                break;
            }
        }
        if (clean_row) kept_modules.push_back(i);
    }

    std::vector<Label> train_labels;
    train_labels.reserve(kept_modules.size());
    for (std::size_t i : kept_modules) train_labels.push_back(labels[i]);
    const auto defective = std::count(train_labels.begin(), train_labels.end(), Label::Defective);
    if (defective == 0 || static_cast<std::size_t>(defective) == train_labels.size()) return cla;

    Eigen::MatrixXd train(static_cast<Eigen::Index>(kept_modules.size()), static_cast<Eigen::Index>(kept_metrics.size()));
    Eigen::MatrixXd all(static_cast<Eigen::Index>(d.n_modules()), static_cast<Eigen::Index>(kept_metrics.size()));
    for (std::size_t c = 0; c < kept_metrics.size(); ++c) {
        const auto src = static_cast<Eigen::Index>(kept_metrics[c]);
        all.col(static_cast<Eigen::Index>(c)) = d.values().col(src);
        for (std::size_t r = 0; r < kept_modules.size(); ++r) {
            train(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                d.values()(static_cast<Eigen::Index>(kept_modules[r]), src);
        }
    }
    const LogisticModel model = train_logistic(train, train_labels, cfg);
    return predictions_from_proba(d, predict_proba(model, all));
}

Predictions rank_top_half(const DefectDataset& d, const std::vector<double>& scores) {
    if (scores.size() != d.n_modules()) {
        throw Error(ErrorCode::DimensionMismatch, "rank_top_half: score count differs from module count");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    const std::size_t top = (scores.size() + 1) / 2;

    const std::vector<double> effort = module_efforts(d);
    Predictions out;
    out.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.push_back({d.module_ids()[i], scores[i], Label::NonDefective, effort[i]});
    }
    for (std::size_t k = 0; k < top; ++k) out[order[k]].predicted = Label::Defective;
    return out;
}

Predictions manual_rank(const DefectDataset& d, RankDirection direction) {
    // Down ranks on raw LOC; only the reciprocal needs the clamp.
    if (direction == RankDirection::Down) return rank_top_half(d, loc_values(d));
    std::vector<double> scores = module_efforts(d);
    for (double& s : scores) s = 1.0 / s;
    return rank_top_half(d, scores);
}

namespace {

bool better(const std::optional<double>& candidate, const std::optional<double>& incumbent, Measure measure) {
    if (!candidate) return false;
    if (!incumbent) return true;
    return higher_is_better(measure) ? *candidate > *incumbent : *candidate < *incumbent;
}

} // namespace

BestMetricChoice best_metric_oracle(const DefectDataset& d, Measure measure, double effort_fraction) {
    BestMetricChoice best;
    bool have = false;
    for (std::size_t j = 0; j < d.n_metrics(); ++j) {
        const std::string& name = d.schema().metric_names[j];
        for (RankDirection dir : {RankDirection::Down, RankDirection::Up}) {
            Predictions preds;
            if (name == d.schema().loc_metric) {
                preds = manual_rank(d, dir);
            } else {
                const auto col = d.values().col(static_cast<Eigen::Index>(j));
                std::vector<double> scores(col.data(), col.data() + col.size());
                if (dir == RankDirection::Up) {
                    for (double& s : scores) s = -s;
                }
                preds = rank_top_half(d, scores);
            }
            std::optional<double> value = evaluate(measure, preds, d.labels(), effort_fraction);
            if (!have || better(value, best.value, measure)) {
                best = {name, dir, value, std::move(preds)};
                have = true;
            }
        }
    }
    return best;
}

} // namespace hdpbench
