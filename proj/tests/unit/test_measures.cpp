#include "fixtures.hpp"

#include "hdpbench/error.hpp"
#include "hdpbench/measures.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace hdpbench;
using namespace hdpbench::testing;

namespace {

double auc_brute_force(const std::vector<double>& s, const std::vector<Label>& y) {
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!is_defective(y[i])) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (is_defective(y[j])) continue;
            pairs += 1;
            wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
        }
    }
    return wins / pairs;
}

// Area under the cumulative (effort, defects) polyline for a given order.
double area_oracle(const Predictions& p, const std::vector<Label>& y, const std::vector<std::size_t>& order) {
    double total_effort = 0, total_defects = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        total_effort += p[i].effort;
        total_defects += is_defective(y[i]);
    }
    double x = 0, h = 0, area = 0;
    for (std::size_t i : order) {
        const double nx = x + p[i].effort / total_effort;
        const double nh = h + (is_defective(y[i]) ? 1.0 / total_defects : 0.0);
        area += (nx - x) * (h + nh) / 2;
        x = nx;
        h = nh;
    }
    return area;
}

double popt_oracle(const Predictions& p, const std::vector<Label>& y) {
    std::vector<std::size_t> by_score(p.size()), best(p.size()), worst(p.size());
    std::iota(by_score.begin(), by_score.end(), 0);
    best = worst = by_score;
    std::stable_sort(by_score.begin(), by_score.end(), [&](auto a, auto b) { return p[a].score > p[b].score; });
    // defective modules first (cheapest first), then clean modules (any order)
    std::stable_sort(best.begin(), best.end(), [&](auto a, auto b) {
        if (y[a] != y[b]) return is_defective(y[a]);
        return is_defective(y[a]) ? p[a].effort < p[b].effort : false;
    });
    std::stable_sort(worst.begin(), worst.end(), [&](auto a, auto b) {
        if (y[a] != y[b]) return !is_defective(y[a]);
        return is_defective(y[a]) ? p[a].effort > p[b].effort : false;
    });
    const double m = area_oracle(p, y, by_score), o = area_oracle(p, y, best), w = area_oracle(p, y, worst);
    return o == w ? 1.0 : 1.0 - (o - m) / (o - w);
}

Predictions with_scores_from_order(Predictions p, const std::vector<std::size_t>& order) {
    for (std::size_t r = 0; r < order.size(); ++r) p[order[r]].score = static_cast<double>(order.size() - r);
    return p;
}

} // namespace

TEST(Classification, ConfusionAndPrf1) {
    Predictions p(4);
    const std::vector<Label> y{Label::Defective, Label::Defective, Label::NonDefective, Label::NonDefective};
    p[0].predicted = Label::Defective;
    p[2].predicted = Label::Defective;
    const auto cm = confusion(p, y);
    EXPECT_EQ(cm.tp, 1u);
    EXPECT_EQ(cm.fp, 1u);
    EXPECT_EQ(cm.fn, 1u);
    EXPECT_EQ(cm.tn, 1u);
    const auto r = prf1(cm);
    EXPECT_DOUBLE_EQ(r.precision, 0.5);
    EXPECT_DOUBLE_EQ(r.recall, 0.5);
    EXPECT_DOUBLE_EQ(r.f1, 0.5);
    EXPECT_EQ(prf1(ConfusionMatrix{}).f1, 0.0);
}

TEST(Classification, IdMismatchDetected) {
    Predictions p(1);
    p[0].module_id = "a";
    const std::vector<Label> y{Label::Defective};
    const std::vector<std::string> ids{"b"};
    EXPECT_THROW(confusion(p, y, ids), Error);
}

TEST(Auc, MatchesPairCountingWithTies) {
    Rng rng(61);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(uniform_int(rng, 2, 20));
        const auto p = random_predictions(rng, n, trial % 2 ? 4 : 0);
        const auto y = random_labels(rng, n);
        std::vector<double> s;
        for (const auto& x : p) s.push_back(x.score);
        EXPECT_NEAR(*auc(s, y), auc_brute_force(s, y), 1e-12);
    }
    const std::vector<double> s{1, 2};
    EXPECT_FALSE(auc(s, std::vector<Label>{Label::Defective, Label::Defective}).has_value());
}

TEST(Popt, BoundsAndOracle) {
    Rng rng(62);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(uniform_int(rng, 2, 30));
        const auto p = random_predictions(rng, n, trial % 3 == 0 ? 3 : 0);
        const auto y = random_labels(rng, n);
        const double v = *popt(p, y);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_NEAR(v, popt_oracle(p, y), 1e-9);
        EXPECT_EQ(*popt(with_scores_from_order(p, inspection_order(p, y, EffortOrdering::Optimal)), y), 1.0);
        EXPECT_EQ(*popt(with_scores_from_order(p, inspection_order(p, y, EffortOrdering::Worst)), y), 0.0);
    }
}

TEST(Popt, UndefinedWithoutDefects) {
    Rng rng(63);
    const auto p = random_predictions(rng, 5);
    EXPECT_FALSE(popt(p, std::vector<Label>(5, Label::NonDefective)).has_value());
    EXPECT_THROW(effort_curve(p, std::vector<Label>(5, Label::NonDefective), EffortOrdering::ByScore), Error);
}

TEST(EffortCurve, EndsAtOneOne) {
    Rng rng(64);
    const auto p = random_predictions(rng, 9);
    const auto y = random_labels(rng, 9);
    const auto c = effort_curve(p, y, EffortOrdering::ByScore);
    ASSERT_EQ(c.points.size(), 10u);
    EXPECT_EQ(c.points.front(), (std::pair<double, double>{0, 0}));
    EXPECT_EQ(c.points.back(), (std::pair<double, double>{1, 1}));
}

TEST(Budget, StopsAtTheFirstModuleThatWouldCrossIt) {
    Predictions p(4);
    const double efforts[] = {10, 50, 5, 35};
    for (std::size_t i = 0; i < 4; ++i) {
        p[i].effort = efforts[i];
        p[i].score = 4.0 - static_cast<double>(i);
    }
    // budget 20 of 100: 10 fits, 50 would cross, inspection stops (5 is never reached)
    EXPECT_EQ(inspected_within_budget(p, 0.2), 1u);
    EXPECT_DOUBLE_EQ(pmi_at(p, 0.2), 0.25);
    EXPECT_EQ(inspected_within_budget(p, 1.0), 4u);
}

TEST(Budget, WorkedExample) {
    // 2000 modules, 40 defective; the 600 highest-ranked cost 1 each and hold
    // 10 defects; the rest cost 3000 - 600 in total.
    Predictions p(2000);
    std::vector<Label> y(2000, Label::NonDefective);
    for (std::size_t i = 0; i < 2000; ++i) {
        p[i].score = 2000.0 - static_cast<double>(i);
        p[i].effort = i < 600 ? 1.0 : (i < 1600 ? 2.0 : 1.0);
        if ((i < 600 && i % 60 == 0) || (i >= 600 && i % 46 == 1 && i < 600 + 46 * 30)) y[i] = Label::Defective;
    }
    ASSERT_EQ(std::count(y.begin(), y.end(), Label::Defective), 40);
    EXPECT_EQ(inspected_within_budget(p, 0.2), 600u);
    EXPECT_EQ(*acc_at(p, y, 0.2), 0.25);
    EXPECT_EQ(pmi_at(p, 0.2), 0.3);
}

TEST(Ifa, CountsCleanModulesBeforeFirstHit) {
    Predictions p(5);
    for (std::size_t i = 0; i < 5; ++i) p[i].score = 5.0 - static_cast<double>(i);
    const std::vector<Label> y{Label::NonDefective, Label::NonDefective, Label::Defective, Label::NonDefective,
                               Label::Defective};
    EXPECT_EQ(*ifa(p, y), 2.0);
    EXPECT_FALSE(ifa(p, std::vector<Label>(5, Label::NonDefective)).has_value());
}

TEST(Names, RoundTrip) {
    for (Measure m : {Measure::Precision, Measure::Recall, Measure::F1, Measure::Auc, Measure::Acc, Measure::Pmi,
                      Measure::Popt, Measure::Ifa}) {
        EXPECT_EQ(parse_measure(to_string(m)), m);
    }
    EXPECT_EQ(display_name(Measure::Pmi), "PMI@20%");
    EXPECT_FALSE(higher_is_better(Measure::Ifa));
    EXPECT_EQ(default_measures().size(), 6u);
}
