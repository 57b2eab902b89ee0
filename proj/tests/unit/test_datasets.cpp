#include "fixtures.hpp"

#include "hdpbench/dataset.hpp"
#include "hdpbench/error.hpp"
#include "hdpbench/manifest.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace hdpbench;
using hdpbench::testing::Rng;

namespace {

MetricSchema schema_of(std::vector<std::string> names, std::string loc) {
    MetricSchema s;
    s.group_name = "G";
    s.metric_names = std::move(names);
    s.loc_metric = std::move(loc);
    return s;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Io;
}

} // namespace

TEST(Labels, AcceptedEncodings) {
    for (const char* s : {"1", "true", "TRUE", "Y", "yes", "buggy", "defective", "2", "17"}) {
        EXPECT_EQ(parse_label(s), Label::Defective) << s;
    }
    for (const char* s : {"0", "false", "N", "no", "clean", "non-defective"}) {
        EXPECT_EQ(parse_label(s), Label::NonDefective) << s;
    }
    EXPECT_EQ(code_of([] { parse_label("maybe"); }), ErrorCode::UnrecognizedLabel);
}

TEST(Csv, BugCountsBecomeBinary) {
    const auto d = parse_dataset("loc,wmc,bug\n10,1,0\n20,2,2\n30,3,0\n", "p", schema_of({}, "loc"), DataFormat::Csv);
    ASSERT_EQ(d.n_modules(), 3u);
    EXPECT_EQ(d.labels(), (std::vector<Label>{Label::NonDefective, Label::Defective, Label::NonDefective}));
    EXPECT_EQ(d.schema().metric_names, (std::vector<std::string>{"loc", "wmc"}));
    EXPECT_EQ(loc_values(d), (std::vector<double>{10, 20, 30}));
}

TEST(Csv, SchemaReordersColumns) {
    const auto d = parse_dataset("b,isDefective,a\n1,N,2\n3,Y,4\n", "p", schema_of({"a", "b"}, "a"), DataFormat::Csv);
    EXPECT_EQ(d.values()(0, 0), 2);
    EXPECT_EQ(d.values()(1, 1), 3);
}

TEST(Csv, ErrorsCarryCodes) {
    const auto s = schema_of({}, "loc");
    EXPECT_EQ(code_of([&] { parse_dataset("loc,bug\n", "p", s, DataFormat::Csv); }), ErrorCode::ZeroModules);
    EXPECT_EQ(code_of([&] { parse_dataset("loc,x\n1,2\n", "p", s, DataFormat::Csv); }), ErrorCode::MissingLabelColumn);
    EXPECT_EQ(code_of([&] { parse_dataset("loc,bug\nabc,1\n", "p", s, DataFormat::Csv); }),
              ErrorCode::NonNumericCell);
    EXPECT_EQ(code_of([&] { parse_dataset("loc,a,bug\n1,2,1\n", "p", schema_of({"loc"}, "loc"), DataFormat::Csv); }),
              ErrorCode::MetricCountMismatch);
}

TEST(Arff, LastAttributeIsTheClass) {
    const char* text = "@relation x\n@attribute loc numeric\n@attribute v numeric\n"
                       "@attribute defects {false,true}\n@data\n5,1,false\n7,2,true\n";
    const auto d = parse_dataset(text, "p", schema_of({}, "loc"), DataFormat::ArffSubset);
    EXPECT_EQ(d.n_modules(), 2u);
    EXPECT_EQ(d.labels()[1], Label::Defective);
}

TEST(Stats, PublishedCounts) {
    // EQ: 324 modules, 129 defective; velocity-1.4: 196 / 147
    for (auto [n, k, pct] : {std::tuple{324, 129, "39.81"}, std::tuple{196, 147, "75.00"}, std::tuple{10, 10, "100.00"}}) {
        Eigen::MatrixXd v = Eigen::MatrixXd::Ones(n, 1);
        std::vector<Label> labels(static_cast<std::size_t>(n), Label::NonDefective);
        for (int i = 0; i < k; ++i) labels[static_cast<std::size_t>(i)] = Label::Defective;
        const DefectDataset d("d", schema_of({"loc"}, "loc"), v, labels);
        const auto st = dataset_stats(d);
        EXPECT_EQ(st.n_modules, static_cast<std::size_t>(n));
        EXPECT_EQ(st.n_defective, static_cast<std::size_t>(k));
        EXPECT_EQ(st.pct_text(), pct);
    }
    EXPECT_EQ(format_percent(3, 31), "9.68");
}

TEST(Combinations, BenchmarkCounts) {
    const auto sigs = hdpbench::testing::benchmark_signatures();
    ASSERT_EQ(sigs.size(), 34u);
    const auto plans = enumerate_combinations(sigs);
    EXPECT_EQ(plans.size(), 962u);

    std::set<std::string> nasa{"cm1", "mw1", "pc1", "pc3", "pc4", "jm1", "pc2", "pc5", "mc1", "mc2", "kc3"};
    std::size_t internal = 0, eq = 0;
    for (const auto& p : plans) {
        internal += nasa.contains(p.source) && nasa.contains(p.target);
        eq += p.target == "EQ";
    }
    EXPECT_EQ(internal, 86u);
    EXPECT_EQ(eq, 29u);
    EXPECT_EQ(plans.size() - internal, 876u);
}

TEST(Combinations, IdenticalSchemasGiveNothing) {
    std::vector<DatasetSignature> s{{"a", {"x", "y"}}, {"b", {"y", "x"}}};
    EXPECT_TRUE(enumerate_combinations(s).empty());
}

// Property: the plan count equals the brute-force count, every plan is valid,
// and the order is (target, source).
TEST(Combinations, RandomSchemaSetsMatchBruteForce) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = hdpbench::testing::uniform_int(rng, 2, 8);
        std::vector<DatasetSignature> sigs;
        for (int i = 0; i < n; ++i) {
            DatasetSignature s{"d" + std::to_string(i), {}};
            const int width = hdpbench::testing::uniform_int(rng, 1, 3);
            for (int k = 0; k < width; ++k) s.metric_names.push_back("m" + std::to_string(hdpbench::testing::uniform_int(rng, 0, 3)));
            std::sort(s.metric_names.begin(), s.metric_names.end());
            s.metric_names.erase(std::unique(s.metric_names.begin(), s.metric_names.end()), s.metric_names.end());
            sigs.push_back(std::move(s));
        }
        std::size_t expected = 0;
        for (const auto& a : sigs) {
            for (const auto& b : sigs) {
                const std::set<std::string> sa(a.metric_names.begin(), a.metric_names.end());
                const std::set<std::string> sb(b.metric_names.begin(), b.metric_names.end());
                expected += sa != sb;
            }
        }
        const auto plans = enumerate_combinations(sigs);
        ASSERT_EQ(plans.size(), expected);
        for (std::size_t i = 0; i < plans.size(); ++i) {
            EXPECT_NE(plans[i].source, plans[i].target);
            if (i) {
                EXPECT_LT(std::tie(plans[i - 1].target, plans[i - 1].source), std::tie(plans[i].target, plans[i].source));
            }
        }
    }
}

TEST(Manifest, LoadsRelativePaths) {
    const auto dir = std::filesystem::temp_directory_path() / "hdpbench_manifest_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "a.csv") << "loc,x,bug\n1,2,0\n3,4,1\n";
    std::ofstream(dir / "b.csv") << "size,y,z,bug\n1,2,3,1\n3,4,5,0\n";
    std::ofstream(dir / "m.manifest") << "# two groups\n"
                                         "group.A.loc_metric = loc\ngroup.A.granularity = class\n"
                                         "group.B.loc_metric = size\ngroup.B.granularity = file\n"
                                         "dataset.a.group = A\ndataset.a.path = a.csv\n"
                                         "dataset.b.group = B\ndataset.b.path = b.csv\n";
    const auto m = DatasetManifest::load(dir / "m.manifest");
    const auto all = m.load_all();
    ASSERT_EQ(all.size(), 2u);
    EXPECT_EQ(all[1].schema().loc_metric, "size");
    EXPECT_EQ(all[1].schema().granularity, Granularity::File);
    EXPECT_EQ(enumerate_combinations(all).size(), 2u);
    std::filesystem::remove_all(dir);
}

TEST(Manifest, DuplicateKeyRejected) {
    EXPECT_EQ(code_of([] { parse_key_values("a = 1\na = 2\n"); }), ErrorCode::MalformedInput);
}
