#include "fixtures.hpp"

#include "hdpbench/hdp.hpp"
#include "hdpbench/learner.hpp"
#include "hdpbench/measures.hpp"
#include "hdpbench/udp.hpp"

#include <benchmark/benchmark.h>

using namespace hdpbench;
using namespace hdpbench::testing;

static void BM_KsPValue(benchmark::State& state) {
    Rng rng(1);
    std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
    for (auto& x : a) x = normal(rng);
    for (auto& x : b) x = normal(rng, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(ks_pvalue(a, b));
}
BENCHMARK(BM_KsPValue)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_Matching(benchmark::State& state) {
    Rng rng(2);
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Eigen::MatrixXd w(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) w(i, j) = uniform(rng);
    for (auto _ : state) benchmark::DoNotOptimize(max_weight_matching(w, kKsCutoff));
}
BENCHMARK(BM_Matching)->Arg(8)->Arg(32)->Arg(128);

static void BM_Logistic(benchmark::State& state) {
    Rng rng(3);
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Eigen::MatrixXd x(n, 8);
    std::vector<Label> y(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < 8; ++j) x(i, j) = normal(rng);
        y[static_cast<std::size_t>(i)] = x(i, 0) + normal(rng) > 0 ? Label::Defective : Label::NonDefective;
    }
    for (auto _ : state) benchmark::DoNotOptimize(train_logistic(x, y));
}
BENCHMARK(BM_Logistic)->Arg(200)->Arg(2000);

static void BM_Spectral(benchmark::State& state) {
    const auto d = synthetic_dataset("s", standin_schema(benchmark_groups()[2], 20),
                                     static_cast<std::size_t>(state.range(0)), state.range(0) / 4, 4);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_cluster(d));
}
BENCHMARK(BM_Spectral)->Arg(200)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

static void BM_Auc(benchmark::State& state) {
    Rng rng(5);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto p = random_predictions(rng, n, 20);
    const auto y = random_labels(rng, n);
    std::vector<double> s;
    for (const auto& x : p) s.push_back(x.score);
    for (auto _ : state) benchmark::DoNotOptimize(auc(s, y));
}
BENCHMARK(BM_Auc)->Arg(1000)->Arg(100000);
