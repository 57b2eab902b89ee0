// Writes a small heterogeneous benchmark (CSV files, manifest, experiment
// config) into the given directory for the command line smoke test.

#include "fixtures.hpp"

#include <fstream>
#include <set>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    namespace fs = std::filesystem;
    using namespace hdpbench;
    if (argc != 2) {
        std::cerr << "usage: make_fixture_data <dir>\n";
        return 2;
    }
    const fs::path dir = argv[1];
    fs::create_directories(dir / "data");

    std::ostringstream manifest;
    std::set<std::string> groups;
    for (const DefectDataset& d : testing::small_heterogeneous(7, 80)) {
        const MetricSchema& s = d.schema();
        if (groups.insert(s.group_name).second) {
            manifest << "group." << s.group_name << ".loc_metric = " << s.loc_metric << "\n"
                     << "group." << s.group_name << ".granularity = " << to_string(s.granularity) << "\n";
        }
        manifest << "dataset." << d.name() << ".group = " << s.group_name << "\n"
                 << "dataset." << d.name() << ".path = data/" << d.name() << ".csv\n";

        std::ofstream csv(dir / "data" / (d.name() + ".csv"));
        csv.precision(17);
        csv << "id";
        for (const auto& m : s.metric_names) csv << ',' << m;
        csv << ",bug\n";
        for (std::size_t i = 0; i < d.n_modules(); ++i) {
            csv << d.module_ids()[i];
            for (Eigen::Index j = 0; j < d.values().cols(); ++j) csv << ',' << d.values()(static_cast<Eigen::Index>(i), j);
            csv << ',' << (is_defective(d.labels()[i]) ? 1 : 0) << '\n';
        }
    }
    std::ofstream(dir / "bench.manifest") << manifest.str();
    std::ofstream(dir / "experiment.cfg") << "manifest = bench.manifest\n"
                                             "output_dir = out\n"
                                             "workers = 2\n";
    return 0;
}
