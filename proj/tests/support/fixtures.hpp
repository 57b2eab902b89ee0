#pragma once

// Shared test fixtures: seeded random instances and stand-ins for the five
// public dataset groups (metric counts, LOC metric names and granularity as
// published; values are synthetic).

#include "hdpbench/dataset.hpp"
#include "hdpbench/prediction.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace hdpbench::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double normal(Rng& rng, double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(rng);
}

/// Random labels with at least one module of each class (n >= 2).
inline std::vector<Label> random_labels(Rng& rng, std::size_t n, double rate = 0.4) {
    std::vector<Label> labels(n);
    for (auto& l : labels) l = uniform(rng) < rate ? Label::Defective : Label::NonDefective;
    const auto last = static_cast<int>(n) - 1;
    const auto a = static_cast<std::size_t>(uniform_int(rng, 0, last));
    auto b = static_cast<std::size_t>(uniform_int(rng, 0, last - 1));
    if (b >= a) ++b;
    labels[a] = Label::Defective;
    labels[b] = Label::NonDefective;
    return labels;
}

/// Predictions with random scores (ties likely when `tie_levels` > 0) and
/// random efforts in [1, 100].
inline Predictions random_predictions(Rng& rng, std::size_t n, int tie_levels = 0) {
    Predictions p(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i].module_id = "m" + std::to_string(i);
        p[i].score = tie_levels > 0 ? static_cast<double>(uniform_int(rng, 0, tie_levels)) : uniform(rng);
        p[i].predicted = uniform(rng) < 0.5 ? Label::Defective : Label::NonDefective;
        p[i].effort = static_cast<double>(uniform_int(rng, 1, 100));
    }
    return p;
}

struct StandinDataset {
    std::string name;
    std::size_t modules;
    std::size_t defective;
};

struct StandinGroup {
    std::string name;
    std::string loc_metric;
    Granularity granularity;
    std::vector<std::pair<std::size_t, std::vector<StandinDataset>>> schemas;  // metric count -> datasets
};

/// The 34 projects of the benchmark: group, metric-count sub-schema, module
/// and defect counts.
inline const std::vector<StandinGroup>& benchmark_groups() {
    static const std::vector<StandinGroup> groups{
        {"AEEEM", "ck_oo_numberOfLinesOfCode", Granularity::Class,
         {{61,
           {{"EQ", 324, 129}, {"JDT", 997, 206}, {"LC", 691, 64}, {"ML", 1862, 245}, {"PDE", 1492, 209}}}}},
        {"ReLink", "CountLineCode", Granularity::File,
         {{26, {{"Apache", 194, 98}, {"Safe", 56, 22}, {"Zxing", 399, 118}}}}},
        {"PROMISE", "loc", Granularity::Class,
         {{20,
           {{"ant-1.3", 125, 20},
            {"arc", 234, 27},
            {"camel-1.0", 339, 13},
            {"poi-1.5", 237, 141},
            {"redaktor", 176, 27},
            {"skarbonka", 45, 9},
            {"tomcat", 858, 77},
            {"velocity-1.4", 196, 147},
            {"xalan-2.4", 723, 110},
            {"xerces-1.2", 440, 71}}}}},
        {"NASA", "LOC_EXECUTABLE", Granularity::Function,
         {{37, {{"cm1", 344, 42}, {"mw1", 264, 27}, {"pc1", 759, 61}, {"pc3", 1125, 140}, {"pc4", 1399, 178}}},
          {21, {{"jm1", 9593, 1759}}},
          {36, {{"pc2", 1585, 16}}},
          {38, {{"pc5", 17001, 503}, {"mc1", 9277, 68}}},
          {39, {{"mc2", 127, 44}, {"kc3", 200, 36}}}}},
        {"SOFTLAB", "executable_loc", Granularity::Function,
         {{29, {{"ar1", 121, 9}, {"ar3", 63, 8}, {"ar4", 107, 20}, {"ar5", 36, 8}, {"ar6", 101, 15}}}}},
    };
    return groups;
}

/// Metric names of a group sub-schema: the LOC metric first, then
/// "<group>_<k>" fillers. Sub-schemas of one group share a prefix of names.
inline MetricSchema standin_schema(const StandinGroup& g, std::size_t n_metrics) {
    MetricSchema s;
    s.group_name = g.name;
    s.loc_metric = g.loc_metric;
    s.granularity = g.granularity;
    s.metric_names.push_back(g.loc_metric);
    for (std::size_t k = 1; k < n_metrics; ++k) s.metric_names.push_back(g.name + "_" + std::to_string(k));
    return s;
}

inline std::vector<DatasetSignature> benchmark_signatures() {
    std::vector<DatasetSignature> out;
    for (const auto& g : benchmark_groups()) {
        for (const auto& [n_metrics, datasets] : g.schemas) {
            const MetricSchema s = standin_schema(g, n_metrics);
            for (const auto& d : datasets) out.push_back({d.name, s.metric_names});
        }
    }
    return out;
}

/// Synthetic project: a latent size drives every metric; defective modules
/// are shifted upward. `scale` and `skew` vary the marginal distributions so
/// that different groups look different to a KS test.
inline DefectDataset synthetic_dataset(const std::string& name, const MetricSchema& schema, std::size_t n,
                                       std::size_t n_defective, std::uint64_t seed, double scale = 1.0,
                                       double skew = 1.0) {
    Rng rng(seed);
    std::vector<Label> labels(n, Label::NonDefective);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < std::min(n_defective, n); ++k) labels[idx[k]] = Label::Defective;

    const auto m = static_cast<Eigen::Index>(schema.metric_names.size());
    Eigen::MatrixXd values(static_cast<Eigen::Index>(n), m);
    std::vector<double> weight(static_cast<std::size_t>(m)), offset(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
        weight[static_cast<std::size_t>(j)] = uniform(rng, 0.3, 1.5);
        offset[static_cast<std::size_t>(j)] = uniform(rng, 0.0, 2.0);
    }
    const std::size_t loc = schema.index_of(schema.loc_metric);
    for (std::size_t i = 0; i < n; ++i) {
        const double size = normal(rng) + (is_defective(labels[i]) ? 0.9 : 0.0);
        for (Eigen::Index j = 0; j < m; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double latent = weight[jj] * size + 0.6 * normal(rng);
            double v = 0;
            if (jj == loc) {
                v = std::round(std::exp(3.5 + 0.8 * latent));
            } else if (jj % 3 == 0) {
                v = std::round(scale * std::exp(skew * (offset[jj] + 0.5 * latent)));
            } else {
                v = scale * (offset[jj] + latent) * skew;
            }
            values(static_cast<Eigen::Index>(i), j) = v;
        }
    }
    return DefectDataset(name, schema, std::move(values), std::move(labels));
}

/// All 34 projects as synthetic stand-ins, each capped at `max_modules`
/// modules (defect rate preserved, at least one module of each class).
inline std::vector<DefectDataset> benchmark_standins(std::size_t max_modules, std::uint64_t seed = 1) {
    std::vector<DefectDataset> out;
    std::uint64_t k = 0;
    double group_scale = 1.0;
    for (const auto& g : benchmark_groups()) {
        group_scale *= 3.0;
        for (const auto& [n_metrics, datasets] : g.schemas) {
            const MetricSchema s = standin_schema(g, n_metrics);
            for (const auto& d : datasets) {
                const std::size_t n = std::min(d.modules, max_modules);
                std::size_t def = static_cast<std::size_t>(
                    std::llround(static_cast<double>(n) * static_cast<double>(d.defective) / static_cast<double>(d.modules)));
                def = std::clamp<std::size_t>(def, 1, n - 1);
                out.push_back(synthetic_dataset(d.name, s, n, def, seed * 1000 + k++, group_scale, 1.0));
            }
        }
    }
    return out;
}

/// Four small heterogeneous projects from four different groups.
inline std::vector<DefectDataset> small_heterogeneous(std::uint64_t seed = 7, std::size_t modules = 120) {
    const auto& groups = benchmark_groups();
    std::vector<DefectDataset> out;
    const std::size_t pick[] = {0, 1, 2, 4};
    for (std::size_t k = 0; k < 4; ++k) {
        const StandinGroup& g = groups[pick[k]];
        const auto& [n_metrics, datasets] = g.schemas.front();
        const MetricSchema s = standin_schema(g, std::min<std::size_t>(n_metrics, 12 + 3 * k));
        out.push_back(synthetic_dataset(datasets.front().name, s, modules - 15 * k, (modules - 15 * k) / 3,
                                        seed * 100 + k, 1.0 + static_cast<double>(k), 1.0));
    }
    return out;
}

} // namespace hdpbench::testing
