#include "fixtures.hpp"

#include "hdpbench/error.hpp"
#include "hdpbench/harness.hpp"
#include "hdpbench/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace hdpbench;
using namespace hdpbench::testing;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("hdpbench_harness_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

ExperimentConfig config(std::vector<std::string> methods, unsigned workers = 1) {
    ExperimentConfig cfg;
    cfg.methods = std::move(methods);
    cfg.workers = workers;
    return cfg;
}

// Two projects whose metric values never overlap, so no KS test can match.
std::vector<DefectDataset> disjoint_pair() {
    const auto& groups = benchmark_groups();
    auto a = synthetic_dataset("lo", standin_schema(groups[0], 6), 80, 20, 3);
    auto b = synthetic_dataset("hi", standin_schema(groups[1], 6), 80, 20, 4);
    Eigen::MatrixXd shifted = b.values().array() + 1e7;
    return {a, DefectDataset("hi", b.schema(), shifted, b.labels(), b.module_ids())};
}

MethodRegistry with_constant_method() {
    MethodRegistry r = MethodRegistry::with_builtins();
    register_external_method(r, "CONST", [](const MethodContext& ctx) {
        Predictions p;
        const auto efforts = module_efforts(ctx.target);
        for (std::size_t i = 0; i < ctx.target.n_modules(); ++i) {
            p.push_back({ctx.target.module_ids()[i], 0.5, Label::NonDefective, efforts[i]});
        }
        return HdpOutcome::success(std::move(p));
    });
    return r;
}

std::string bundle_text(const ReportBundle& b) {
    std::string out;
    for (const auto& [name, content] : b.files) out += name + "\n" + content;
    return out;
}

} // namespace

TEST(Config, ParsesEveryKey) {
    const auto cfg = ExperimentConfig::parse("# experiment\n"
                                             "manifest = data/bench.manifest\n"
                                             "methods = HDP1, UDP1\n"
                                             "measures = auc,popt\n"
                                             "effort_fraction = 0.3\n"
                                             "scenario = scenario2\n"
                                             "output_dir = out\n"
                                             "seed = 42\n"
                                             "workers = 3\n",
                                             "/base");
    EXPECT_EQ(cfg.manifest, fs::path("/base/data/bench.manifest"));
    EXPECT_EQ(cfg.methods, (std::vector<std::string>{"HDP1", "UDP1"}));
    EXPECT_EQ(cfg.measures, (std::vector<Measure>{Measure::Auc, Measure::Popt}));
    EXPECT_DOUBLE_EQ(cfg.effort_fraction, 0.3);
    EXPECT_EQ(cfg.scenario, Scenario::Scenario2);
    EXPECT_EQ(cfg.output_dir, fs::path("/base/out"));
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(cfg.workers, 3u);
}

TEST(Config, DefaultsAndRejections) {
    const ExperimentConfig d;
    EXPECT_EQ(d.methods.size(), 7u);
    EXPECT_EQ(d.measures.size(), 6u);
    EXPECT_THROW(ExperimentConfig::parse("colour = blue\n"), Error);
    EXPECT_THROW(ExperimentConfig::parse("effort_fraction = 1.5\n"), Error);
    EXPECT_THROW(ExperimentConfig::parse("workers = 0\n"), Error);
    EXPECT_THROW(ExperimentConfig::parse("seed = -1\n"), Error);
    EXPECT_THROW(ExperimentConfig::parse("methods = ,\n"), Error);
}

TEST(Harness, RowCardinalityAndOrder) {
    const auto all = small_heterogeneous();
    const std::vector<DefectDataset> two{all[0], all[1]};
    const auto r = run_experiment(two, config({"HDP5", "UDP1"}));
    EXPECT_EQ(r.summary.plans_enumerated, 2u);
    EXPECT_EQ(r.summary.plans_evaluated, 2u);
    ASSERT_EQ(r.rows.size(), 2u * 2u * 6u);
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        const auto& a = r.rows[i - 1];
        const auto& b = r.rows[i];
        EXPECT_LE(std::tie(a.target, a.source), std::tie(b.target, b.source));
    }
    for (const auto& row : r.rows) {
        EXPECT_NE(row.source, row.target);
        EXPECT_EQ(row.value.has_value(), row.failure.empty());
    }
}

TEST(Harness, UnsupervisedOutputIsSharedAcrossSources) {
    const auto r = run_experiment(small_heterogeneous(), config({"UDP1", "UDP3"}));
    std::map<std::tuple<std::string, std::string, int>, std::set<std::optional<double>>> values;
    for (const auto& row : r.rows) values[{row.method, row.target, static_cast<int>(row.measure)}].insert(row.value);
    for (const auto& [key, v] : values) EXPECT_EQ(v.size(), 1u);
}

TEST(Harness, HdpFailureIsRecordedPerPlan) {
    const auto r = run_experiment(disjoint_pair(), config({"HDP1", "UDP1"}));
    std::size_t hdp_rows = 0;
    for (const auto& row : r.rows) {
        if (row.method != "HDP1") continue;
        ++hdp_rows;
        EXPECT_EQ(row.failure, "NoMatchedMetrics");
        EXPECT_FALSE(row.value.has_value());
    }
    EXPECT_EQ(hdp_rows, 2u * 6u);
    EXPECT_EQ(r.summary.method("HDP1").failures.at("NoMatchedMetrics"), 2u);
    EXPECT_EQ(r.summary.method_errors(), 0u);
}

TEST(Harness, Scenario2KeepsOnlyPlansHdp1Solves) {
    auto cfg = config({"HDP1", "UDP1"});
    cfg.scenario = Scenario::Scenario2;
    const auto none = run_experiment(disjoint_pair(), cfg);
    EXPECT_EQ(none.summary.plans_enumerated, 2u);
    EXPECT_EQ(none.summary.plans_evaluated, 0u);
    EXPECT_TRUE(none.rows.empty());

    // Property: scenario 2 evaluates exactly the plans with a successful HDP1 in scenario 1.
    const auto data = small_heterogeneous(11);
    const auto s1 = run_experiment(data, config({"HDP1", "UDP1"}));
    const auto s2 = run_experiment(data, cfg);
    std::set<std::pair<std::string, std::string>> solved, kept;
    for (const auto& row : s1.rows)
        if (row.method == "HDP1" && row.failure != "NoMatchedMetrics") solved.insert({row.source, row.target});
    for (const auto& row : s2.rows) kept.insert({row.source, row.target});
    EXPECT_EQ(solved, kept);
    EXPECT_EQ(s2.summary.plans_evaluated, kept.size());
}

TEST(Harness, DeterministicAcrossRunsAndWorkers) {
    const auto data = small_heterogeneous();
    const auto a = run_experiment(data, config(ExperimentConfig{}.methods, 1));
    const auto b = run_experiment(data, config(ExperimentConfig{}.methods, 1));
    const auto c = run_experiment(data, config(ExperimentConfig{}.methods, 4));
    EXPECT_EQ(results_tsv(a.rows), results_tsv(b.rows));
    EXPECT_EQ(results_tsv(a.rows), results_tsv(c.rows));
    EXPECT_EQ(decisions_tsv(a.decisions), decisions_tsv(c.decisions));
    EXPECT_EQ(summary_json(a.summary), summary_json(c.summary));
    EXPECT_EQ(bundle_text(build_report(a)), bundle_text(build_report(c)));
}

TEST(Persistence, RoundTripThroughFiles) {
    TempDir dir;
    const auto r = run_experiment(small_heterogeneous(), ExperimentConfig{});
    export_results(r, dir.path() / "nested");
    const auto back = read_results(dir.path() / "nested");
    EXPECT_EQ(back.rows, r.rows);
    EXPECT_EQ(back.decisions, r.decisions);
    EXPECT_EQ(back.summary, r.summary);
    // Report is a pure function of the exported files.
    EXPECT_EQ(bundle_text(build_report(back)), bundle_text(build_report(r)));
}

TEST(Persistence, EmptyRowsAndAbsentValues) {
    const std::string empty = results_tsv({});
    EXPECT_EQ(std::count(empty.begin(), empty.end(), '\n'), 1);
    EXPECT_TRUE(parse_results_tsv(empty).empty());

    std::vector<ResultRow> rows(2);
    rows[0] = {"UDP1", "a", "b", Measure::Auc, std::nullopt, std::string(kUndefinedMeasure)};
    rows[1] = {"UDP1", "a", "b", Measure::F1, 0.1 + 0.2, ""};
    const std::string text = results_tsv(rows);
    EXPECT_NE(text.find("UDP1\ta\tb\tauc\t\tUndefinedMeasure\n"), std::string::npos);
    EXPECT_EQ(parse_results_tsv(text), rows);
    EXPECT_THROW(parse_results_tsv("bogus\n"), Error);
}

TEST(Persistence, FreeTextIsSanitized) {
    std::vector<ResultRow> rows(1);
    rows[0] = {"X", "a", "b", Measure::F1, std::nullopt, "MethodError: bad\tthing\nhere"};
    const auto back = parse_results_tsv(results_tsv(rows));
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].failure, "MethodError: bad thing here");
}

TEST(Registry, ExternalMethodsRunLikeBuiltins) {
    const auto registry = with_constant_method();
    auto cfg = config({"CONST", "UDP1"});
    cfg.measures = {Measure::Auc};
    const auto r = run_experiment(small_heterogeneous(), cfg, registry);
    std::size_t seen = 0;
    for (const auto& row : r.rows) {
        if (row.method != "CONST") continue;
        ++seen;
        ASSERT_TRUE(row.value.has_value());
        EXPECT_EQ(*row.value, 0.5);
    }
    EXPECT_EQ(seen, 12u);
}

TEST(Registry, DuplicatesAndUnknownNames) {
    MethodRegistry r = MethodRegistry::with_builtins();
    try {
        register_external_method(r, "HDP1", [](const MethodContext&) { return HdpOutcome::success({}); });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateMethod);
    }
    try {
        r.get("NOPE");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownMethod);
    }
    EXPECT_THROW(run_experiment(small_heterogeneous(), config({"NOPE"})), Error);
}

TEST(Registry, ThrowingOrMisalignedMethodsBecomeMethodErrors) {
    MethodRegistry r = MethodRegistry::with_builtins();
    register_external_method(r, "BOOM", [](const MethodContext&) -> HdpOutcome { throw std::runtime_error("boom"); });
    register_external_method(r, "SHORT", [](const MethodContext&) { return HdpOutcome::success({}); });
    const auto res = run_experiment(small_heterogeneous(), config({"BOOM", "SHORT", "UDP1"}), r);
    for (const auto& row : res.rows) {
        if (row.method == "UDP1") continue;
        EXPECT_EQ(row.failure.rfind("MethodError", 0), 0u) << row.failure;
    }
    EXPECT_EQ(res.summary.method("BOOM").failures.at("MethodError"), 12u);
    EXPECT_EQ(res.summary.method("SHORT").failures.at("MethodError"), 12u);
    EXPECT_EQ(res.summary.method_errors(), 24u);
}

TEST(Report, ShapesAndFormats) {
    const auto r = run_experiment(small_heterogeneous(), ExperimentConfig{});
    const auto bundle = build_report(r);
    for (const char* name : {"scott_knott.tsv", "wtl_auc.tsv", "diversity.tsv", "unidentified.tsv",
                             "satisfactory.tsv", "report.md"}) {
        EXPECT_NO_THROW(bundle.file(name)) << name;
    }
    EXPECT_THROW(bundle.file("nothing.tsv"), Error);

    std::istringstream sat(bundle.file("satisfactory.tsv"));
    std::string line;
    std::getline(sat, line);
    const std::regex cell(R"((\d{1,3}\.\d\d%|-))");
    std::size_t rows = 0;
    while (std::getline(sat, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string f;
        std::getline(fields, f, '\t');
        while (std::getline(fields, f, '\t')) EXPECT_TRUE(std::regex_match(f, cell)) << f;
    }
    EXPECT_GT(rows, 0u);
}

TEST(Report, NeedsTwoMethods) {
    const auto r = run_experiment(small_heterogeneous(), config({"UDP1"}));
    try {
        build_report(r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientMethods);
    }
}
