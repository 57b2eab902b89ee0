#include "hdpbench/stats.hpp"

#include "hdpbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hdpbench {

namespace {

struct SignedRanks {
    std::vector<double> ranks;  // mid-ranks of |d|
    std::vector<bool> positive;
    double tie_term = 0;        // sum over tie groups of t^3 - t
};

SignedRanks signed_ranks(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "wilcoxon: samples differ in length");
    std::vector<double> diff;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diff.push_back(d);
    }
    const std::size_t n = diff.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(diff[a]) < std::abs(diff[b]); });
    SignedRanks sr;
    sr.ranks.assign(n, 0.0);
    sr.positive.assign(n, false);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(diff[order[j]]) == std::abs(diff[order[i]])) ++j;
        const double mid = 0.5 * static_cast<double>(i + 1 + j);
        const double t = static_cast<double>(j - i);
        sr.tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) sr.ranks[order[k]] = mid;
        i = j;
    }
    for (std::size_t i = 0; i < n; ++i) sr.positive[i] = diff[i] > 0;
    return sr;
}

double normal_p(const SignedRanks& sr) {
    const double n = static_cast<double>(sr.ranks.size());
    double w_plus = 0;
    for (std::size_t i = 0; i < sr.ranks.size(); ++i) {
        if (sr.positive[i]) w_plus += sr.ranks[i];
    }
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - sr.tie_term / 48.0;
    if (var <= 0) return 1.0;
    const double z = (w_plus - mean) / std::sqrt(var);
    return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

// Exact null distribution of W+ by counting sign assignments. Mid-ranks are
// multiples of 1/2, so work with doubled ranks as integers.
double exact_p(const SignedRanks& sr) {
    std::vector<long> doubled;
    long total = 0, observed = 0;
    for (std::size_t i = 0; i < sr.ranks.size(); ++i) {
        const long r = std::lround(2.0 * sr.ranks[i]);
        doubled.push_back(r);
        total += r;
        if (sr.positive[i]) observed += r;
    }
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1.0;
    for (long r : doubled) {
        for (long s = total; s >= r; --s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - r)];
    }
    // |2 S - total| >= |2 observed - total|, all in integers
    const long threshold = std::labs(2 * observed - total);
    double extreme = 0;
    for (long s = 0; s <= total; ++s) {
        if (std::labs(2 * s - total) >= threshold) extreme += ways[static_cast<std::size_t>(s)];
    }
    return std::min(1.0, extreme / std::ldexp(1.0, static_cast<int>(doubled.size())));
}

} // namespace

double wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y) {
    const SignedRanks sr = signed_ranks(x, y);
    if (sr.ranks.empty()) return 1.0;
    return sr.ranks.size() <= kWilcoxonExactLimit ? exact_p(sr) : normal_p(sr);
}

double wilcoxon_signed_rank_normal(std::span<const double> x, std::span<const double> y) {
    const SignedRanks sr = signed_ranks(x, y);
    return sr.ranks.empty() ? 1.0 : normal_p(sr);
}

std::vector<double> bh_adjust(std::span<const double> pvals) {
    const std::size_t m = pvals.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });
    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t k = m; k-- > 0;) {
        const double candidate = pvals[order[k]] * static_cast<double>(m) / static_cast<double>(k + 1);
        running = std::min(running, candidate);
        // p * m / m can round below p
        adjusted[order[k]] = std::min(1.0, std::max(running, pvals[order[k]]));
    }
    return adjusted;
}

double cliffs_delta(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw Error(ErrorCode::InvalidArgument, "cliffs_delta: empty sample");
    std::vector<double> sorted(y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end());
    double more = 0, less = 0;
    for (double v : x) {
        less += static_cast<double>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), v));
        more += static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    }
    return (more - less) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
    case Outcome::Win: return "win";
    case Outcome::Tie: return "tie";
    case Outcome::Loss: return "loss";
    }
    return "tie";
}

Outcome compare_pair(std::span<const double> x, std::span<const double> y, std::optional<double> adjusted_p) {
    if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "compare_pair: samples are not paired");
    if (x.size() < 2) return Outcome::Tie;
    const double p = adjusted_p ? *adjusted_p : wilcoxon_signed_rank(x, y);
    if (!(p < kSignificance)) return Outcome::Tie;
    const double delta = cliffs_delta(x, y);
    if (delta >= kNegligibleDelta) return Outcome::Win;
    if (delta <= -kNegligibleDelta) return Outcome::Loss;
    return Outcome::Tie;
}

std::string WtlRecord::text() const {
    return std::to_string(win) + "/" + std::to_string(tie) + "/" + std::to_string(loss);
}

WtlRecord win_tie_loss(std::span<const PairedSample> units, bool higher_better) {
    struct Prepared {
        std::vector<double> x, y;
    };
    std::vector<Prepared> prepared(units.size());
    std::vector<std::size_t> testable;
    std::vector<double> raw_p;
    for (std::size_t u = 0; u < units.size(); ++u) {
        const auto& unit = units[u];
        if (unit.first.size() != unit.second.size()) {
            throw Error(ErrorCode::DimensionMismatch, "win_tie_loss: unit samples are not paired");
        }
        const double sign = higher_better ? 1.0 : -1.0;
        for (std::size_t i = 0; i < unit.first.size(); ++i) {
            if (unit.first[i] && unit.second[i]) {
                prepared[u].x.push_back(sign * *unit.first[i]);
                prepared[u].y.push_back(sign * *unit.second[i]);
            }
        }
        if (prepared[u].x.size() >= 2) {
            testable.push_back(u);
            raw_p.push_back(wilcoxon_signed_rank(prepared[u].x, prepared[u].y));
        }
    }
    const std::vector<double> adjusted = bh_adjust(raw_p);

    WtlRecord record;
    record.tie = units.size() - testable.size();
    for (std::size_t k = 0; k < testable.size(); ++k) {
        const Prepared& p = prepared[testable[k]];
        switch (compare_pair(p.x, p.y, adjusted[k])) {
        case Outcome::Win: ++record.win; break;
        case Outcome::Tie: ++record.tie; break;
        case Outcome::Loss: ++record.loss; break;
        }
    }
    return record;
}

double mcnemar(const ContingencyTable& ct) {
    const double b = static_cast<double>(ct.n_cw);
    const double c = static_cast<double>(ct.n_wc);
    if (b + c == 0) return 1.0;
    const double chi2 = (b - c) * (b - c) / (b + c);
    return std::min(1.0, std::erfc(std::sqrt(chi2 / 2.0)));
}

ContingencyTable diversity_table(std::span<const Label> a, std::span<const Label> b, std::span<const Label> truth) {
    if (a.size() != truth.size() || b.size() != truth.size()) {
        throw Error(ErrorCode::IdMismatch, "diversity_table: prediction vectors are not aligned with the labels");
    }
    ContingencyTable ct;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!is_defective(truth[i])) continue;
        const bool ca = is_defective(a[i]);
        const bool cb = is_defective(b[i]);
        if (ca && cb) ++ct.n_cc;
        else if (ca) ++ct.n_cw;
        else if (cb) ++ct.n_wc;
        else ++ct.n_ww;
    }
    return ct;
}

ContingencyTable diversity_table(std::span<const ScoredPrediction> a, std::span<const ScoredPrediction> b,
                                 std::span<const Label> truth) {
    if (a.size() != b.size()) throw Error(ErrorCode::IdMismatch, "diversity_table: prediction lists differ in length");
    std::vector<Label> la, lb;
    la.reserve(a.size());
    lb.reserve(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].module_id != b[i].module_id) {
            throw Error(ErrorCode::IdMismatch, "diversity_table: '" + a[i].module_id + "' vs '" + b[i].module_id + "'");
        }
        la.push_back(a[i].predicted);
        lb.push_back(b[i].predicted);
    }
    return diversity_table(la, lb, truth);
}

std::string_view to_string(Criterion c) noexcept { return c == Criterion::SC1 ? "SC1" : "SC2"; }

bool satisfactory(double precision, double recall, Criterion criterion) {
    if (criterion == Criterion::SC1) return precision > 0.75 && recall > 0.75;
    return recall > 0.70 && precision > 0.50;
}

double satisfactory_ratio(std::size_t satisfied, std::size_t total) {
    if (total == 0) throw Error(ErrorCode::InvalidArgument, "satisfactory_ratio: no combinations");
    return 100.0 * static_cast<double>(satisfied) / static_cast<double>(total);
}

double satisfactory_ratio(std::span<const PrecisionRecall> results, Criterion criterion) {
    const auto ok = std::count_if(results.begin(), results.end(), [&](const PrecisionRecall& r) {
        return satisfactory(r.precision, r.recall, criterion);
    });
    return satisfactory_ratio(static_cast<std::size_t>(ok), results.size());
}

} // namespace hdpbench
