// hdpbench: run experiments, build reports, inspect datasets and plans.

#include "hdpbench/dataset.hpp"
#include "hdpbench/error.hpp"
#include "hdpbench/harness.hpp"
#include "hdpbench/manifest.hpp"
#include "hdpbench/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using namespace hdpbench;

void print_failure_summary(const ExperimentResult& result, std::ostream& os) {
    os << "failure summary:\n";
    for (const auto& m : result.summary.methods) {
        for (const auto& [reason, count] : m.failures) os << "  " << m.name << '\t' << reason << '\t' << count << '\n';
    }
    std::size_t shown = 0;
    for (const auto& row : result.rows) {
        if (row.failure.rfind("MethodError", 0) != 0) continue;
        if (shown++ == 20) {
            os << "  ...\n";
            break;
        }
        os << "  " << row.method << ' ' << row.source << "=>" << row.target << ' ' << to_string(row.measure) << ": "
           << row.failure << '\n';
    }
}

int cmd_run(const std::string& config_path) {
    const ExperimentConfig cfg = ExperimentConfig::load(config_path);
    const ExperimentResult result = run_experiment(cfg);
    export_results(result, cfg.output_dir);
    if (result.summary.methods.size() >= 2) write_report(build_report(result), cfg.output_dir / "report");

    std::cout << "plans: " << result.summary.plans_evaluated << " evaluated of " << result.summary.plans_enumerated
              << "\nrows: " << result.rows.size() << "\noutput: " << cfg.output_dir.string() << '\n';
    if (result.summary.method_errors() > 0) {
        print_failure_summary(result, std::cerr);
        return 1;
    }
    return 0;
}

int cmd_report(const std::string& results_dir, const std::string& out_dir) {
    const ExperimentResult result = read_results(results_dir);
    const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(results_dir) / "report" : std::filesystem::path(out_dir);
    write_report(build_report(result), dir);
    std::cout << "report: " << dir.string() << '\n';
    return 0;
}

int cmd_stats(const std::string& dataset, const std::string& manifest_path, const std::string& loc_metric) {
    std::vector<DefectDataset> loaded;
    if (!manifest_path.empty()) {
        const DatasetManifest manifest = DatasetManifest::load(manifest_path);
        for (const auto& e : manifest.entries()) {
            if (e.name == dataset) loaded.push_back(manifest.load_entry(e));
        }
        if (loaded.empty()) throw Error(ErrorCode::InvalidArgument, "manifest has no dataset '" + dataset + "'");
    } else {
        if (loc_metric.empty()) throw Error(ErrorCode::InvalidArgument, "--loc is required without --manifest");
        MetricSchema schema;
        schema.group_name = "adhoc";
        schema.loc_metric = loc_metric;
        const std::filesystem::path path(dataset);
        loaded.push_back(load_dataset(path, schema, format_from_extension(path)));
    }
    const DefectDataset& d = loaded.front();
    const DatasetStats s = dataset_stats(d);
    std::cout << "dataset\t" << d.name() << "\ngroup\t" << d.schema().group_name << "\nmetrics\t" << d.n_metrics()
              << "\nmodules\t" << s.n_modules << "\ndefective\t" << s.n_defective << " (" << s.pct_text() << "%)"
              << "\nloc_metric\t" << d.schema().loc_metric << "\ngranularity\t" << to_string(d.schema().granularity)
              << '\n';
    return 0;
}

int cmd_combos(const std::string& manifest_path, bool quiet) {
    const DatasetManifest manifest = DatasetManifest::load(manifest_path);
    const std::vector<DefectDataset> datasets = manifest.load_all();
    const std::vector<CombinationPlan> plans = enumerate_combinations(datasets);
    if (!quiet) {
        for (const auto& p : plans) std::cout << p.source << "=>" << p.target << '\n';
    }
    std::map<std::string, std::size_t> per_target_group;
    std::map<std::string, std::string> group_of;
    for (const auto& d : datasets) group_of[d.name()] = d.schema().group_name;
    for (const auto& p : plans) ++per_target_group[group_of[p.target]];
    for (const auto& [g, n] : per_target_group) std::cout << "target group " << g << '\t' << n << '\n';
    std::cout << "total\t" << plans.size() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heterogeneous defect prediction benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
    run->add_option("config", config_path, "Experiment config (key = value)")->required()->check(CLI::ExistingFile);

    std::string results_dir, report_out;
    auto* report = app.add_subcommand("report", "Build the report tables from an exported results directory");
    report->add_option("results-dir", results_dir, "Directory holding results.tsv, decisions.tsv, summary.json")
        ->required()
        ->check(CLI::ExistingDirectory);
    report->add_option("-o,--out", report_out, "Output directory (default <results-dir>/report)");

    std::string dataset, stats_manifest, loc_metric;
    auto* stats = app.add_subcommand("stats", "Module and defect counts of one dataset");
    stats->add_option("dataset", dataset, "Dataset file, or dataset name with --manifest")->required();
    stats->add_option("-m,--manifest", stats_manifest, "Dataset manifest");
    stats->add_option("--loc", loc_metric, "LOC metric name (file mode)");

    std::string combos_manifest;
    bool quiet = false;
    auto* combos = app.add_subcommand("combos", "List the heterogeneous (source, target) plans of a manifest");
    combos->add_option("manifest", combos_manifest, "Dataset manifest")->required()->check(CLI::ExistingFile);
    combos->add_flag("-q,--quiet", quiet, "Only print the counts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path);
        if (*report) return cmd_report(results_dir, report_out);
        if (*stats) return cmd_stats(dataset, stats_manifest, loc_metric);
        if (*combos) return cmd_combos(combos_manifest, quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
