#include "hdpbench/measures.hpp"

#include "hdpbench/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <numeric>

namespace hdpbench {

std::string_view to_string(Measure m) noexcept {
    switch (m) {
    case Measure::Precision: return "precision";
    case Measure::Recall: return "recall";
    case Measure::F1: return "f1";
    case Measure::Auc: return "auc";
    case Measure::Acc: return "acc";
    case Measure::Pmi: return "pmi";
    case Measure::Popt: return "popt";
    case Measure::Ifa: return "ifa";
    }
    return "f1";
}

std::string_view display_name(Measure m) noexcept {
    switch (m) {
    case Measure::Precision: return "Precision";
    case Measure::Recall: return "Recall";
    case Measure::F1: return "F1";
    case Measure::Auc: return "AUC";
    case Measure::Acc: return "ACC";
    case Measure::Pmi: return "PMI@20%";
    case Measure::Popt: return "Popt";
    case Measure::Ifa: return "IFA";
    }
    return "F1";
}

Measure parse_measure(std::string_view text) {
    std::string t = detail::lower(detail::trim(text));
    if (t == "pmi@20%") t = "pmi";
    for (Measure m : {Measure::Precision, Measure::Recall, Measure::F1, Measure::Auc, Measure::Acc, Measure::Pmi,
                      Measure::Popt, Measure::Ifa}) {
        if (t == to_string(m)) return m;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown measure '" + std::string(text) + "'");
}

bool is_effort_aware(Measure m) noexcept {
    return m == Measure::Acc || m == Measure::Pmi || m == Measure::Popt || m == Measure::Ifa;
}

bool higher_is_better(Measure m) noexcept { return m != Measure::Ifa; }

const std::vector<Measure>& default_measures() {
    static const std::vector<Measure> all{Measure::F1, Measure::Auc, Measure::Acc,
                                          Measure::Pmi, Measure::Popt, Measure::Ifa};
    return all;
}

namespace {

void check_sizes(std::size_t preds, std::size_t truth, const char* what) {
    if (preds != truth) {
        throw Error(ErrorCode::IdMismatch, std::string(what) + ": " + std::to_string(preds) + " predictions vs " +
                                               std::to_string(truth) + " labels");
    }
}

double ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

std::size_t count_defective(std::span<const Label> truth) {
    return static_cast<std::size_t>(std::count(truth.begin(), truth.end(), Label::Defective));
}

} // namespace

ConfusionMatrix confusion(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                          std::span<const std::string> truth_ids) {
    check_sizes(preds.size(), truth.size(), "confusion");
    if (!truth_ids.empty()) {
        check_sizes(preds.size(), truth_ids.size(), "confusion");
        for (std::size_t i = 0; i < preds.size(); ++i) {
            if (preds[i].module_id != truth_ids[i]) {
                throw Error(ErrorCode::IdMismatch, "confusion: prediction for '" + preds[i].module_id +
                                                       "' aligned with truth for '" + truth_ids[i] + "'");
            }
        }
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool actual = is_defective(truth[i]);
        const bool predicted = is_defective(preds[i].predicted);
        if (actual && predicted) ++cm.tp;
        else if (actual) ++cm.fn;
        else if (predicted) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

PrecisionRecallF1 prf1(const ConfusionMatrix& cm) {
    PrecisionRecallF1 r;
    r.precision = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
    r.recall = ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
    r.f1 = ratio(2.0 * r.precision * r.recall, r.precision + r.recall);
    return r;
}

std::optional<double> auc(std::span<const double> scores, std::span<const Label> truth) {
    check_sizes(scores.size(), truth.size(), "auc");
    const std::size_t n = scores.size();
    const std::size_t pos = count_defective(truth);
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) return std::nullopt;

    // Mann-Whitney: sum of mid-ranks of the positives
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1 .. j
        for (std::size_t k = i; k < j; ++k) {
            if (is_defective(truth[order[k]])) rank_sum += mid;
        }
        i = j;
    }
    const double p = static_cast<double>(pos);
    return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

double EffortCurve::area() const noexcept {
    double a = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        a += (points[i].first - points[i - 1].first) * (points[i].second + points[i - 1].second) / 2.0;
    }
    return a;
}

std::vector<std::size_t> inspection_order(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                                          EffortOrdering ordering) {
    check_sizes(preds.size(), truth.size(), "inspection_order");
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    auto density = [&](std::size_t i) { return (is_defective(truth[i]) ? 1.0 : 0.0) / preds[i].effort; };
    switch (ordering) {
    case EffortOrdering::ByScore:
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });
        break;
    case EffortOrdering::Optimal:
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double da = density(a), db = density(b);
            if (da != db) return da > db;
            return preds[a].effort < preds[b].effort;
        });
        break;
    case EffortOrdering::Worst:
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double da = density(a), db = density(b);
            if (da != db) return da < db;
            return preds[a].effort > preds[b].effort;
        });
        break;
    }
    return order;
}

EffortCurve effort_curve(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                         EffortOrdering ordering) {
    check_sizes(preds.size(), truth.size(), "effort_curve");
    const std::size_t defects = count_defective(truth);
    if (defects == 0) throw Error(ErrorCode::NoDefects, "effort_curve: no defective module");
    const std::vector<std::size_t> order = inspection_order(preds, truth, ordering);

    double total_effort = 0;
    for (std::size_t i : order) {
        if (!(preds[i].effort > 0)) throw Error(ErrorCode::InvalidArgument, "effort_curve: non-positive effort");
        total_effort += preds[i].effort;
    }
    EffortCurve curve;
    curve.points.reserve(order.size() + 1);
    curve.points.emplace_back(0.0, 0.0);
    double effort = 0;
    std::size_t found = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        effort += preds[order[k]].effort;
        if (is_defective(truth[order[k]])) ++found;
        if (k + 1 == order.size()) {
            curve.points.emplace_back(1.0, 1.0);
        } else {
            curve.points.emplace_back(effort / total_effort,
                                      static_cast<double>(found) / static_cast<double>(defects));
        }
    }
    return curve;
}

std::optional<double> popt(std::span<const ScoredPrediction> preds, std::span<const Label> truth) {
    check_sizes(preds.size(), truth.size(), "popt");
    if (count_defective(truth) == 0) return std::nullopt;
    const double model = effort_curve(preds, truth, EffortOrdering::ByScore).area();
    const double best = effort_curve(preds, truth, EffortOrdering::Optimal).area();
    const double worst = effort_curve(preds, truth, EffortOrdering::Worst).area();
    if (best == worst) return 1.0;
    return 1.0 - (best - model) / (best - worst);
}

std::size_t inspected_within_budget(std::span<const ScoredPrediction> preds, double effort_fraction) {
    if (!(effort_fraction > 0.0 && effort_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "effort fraction must lie in (0, 1]");
    }
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });
    double total = 0;
    for (std::size_t i : order) total += preds[i].effort;
    const double budget = effort_fraction * total;
    double spent = 0;
    std::size_t inspected = 0;
    for (std::size_t i : order) {
        if (spent + preds[i].effort > budget) break;
        spent += preds[i].effort;
        ++inspected;
    }
    return inspected;
}

std::optional<double> acc_at(std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                             double effort_fraction) {
    check_sizes(preds.size(), truth.size(), "acc_at");
    const std::size_t defects = count_defective(truth);
    if (defects == 0) return std::nullopt;
    const std::size_t inspected = inspected_within_budget(preds, effort_fraction);
    const std::vector<std::size_t> order = inspection_order(preds, truth, EffortOrdering::ByScore);
    std::size_t found = 0;
    for (std::size_t k = 0; k < inspected; ++k) {
        if (is_defective(truth[order[k]])) ++found;
    }
    return static_cast<double>(found) / static_cast<double>(defects);
}

double pmi_at(std::span<const ScoredPrediction> preds, double effort_fraction) {
    if (preds.empty()) return 0.0;
    return static_cast<double>(inspected_within_budget(preds, effort_fraction)) / static_cast<double>(preds.size());
}

std::optional<double> ifa(std::span<const ScoredPrediction> preds, std::span<const Label> truth) {
    check_sizes(preds.size(), truth.size(), "ifa");
    if (count_defective(truth) == 0) return std::nullopt;
    std::size_t false_alarms = 0;
    for (std::size_t i : inspection_order(preds, truth, EffortOrdering::ByScore)) {
        if (is_defective(truth[i])) break;
        ++false_alarms;
    }
    return static_cast<double>(false_alarms);
}

std::optional<double> evaluate(Measure m, std::span<const ScoredPrediction> preds, std::span<const Label> truth,
                               double effort_fraction) {
    switch (m) {
    case Measure::Precision: return prf1(confusion(preds, truth)).precision;
    case Measure::Recall: return prf1(confusion(preds, truth)).recall;
    case Measure::F1: return prf1(confusion(preds, truth)).f1;
    case Measure::Auc: {
        std::vector<double> scores;
        scores.reserve(preds.size());
        for (const auto& p : preds) scores.push_back(p.score);
        return auc(scores, truth);
    }
    case Measure::Acc: return acc_at(preds, truth, effort_fraction);
    case Measure::Pmi: return pmi_at(preds, effort_fraction);
    case Measure::Popt: return popt(preds, truth);
    case Measure::Ifa: return ifa(preds, truth);
    }
    return std::nullopt;
}

} // namespace hdpbench
