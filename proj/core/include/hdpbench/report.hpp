#pragma once

#include "hdpbench/harness.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hdpbench {

/// Report files, in the order they are written. Each table is a TSV file;
/// report.md renders all of them as Markdown.
///
///   scott_knott.tsv    rank groups per scenario, scope (all / target group) and measure
///   wtl_<measure>.tsv  win/tie/loss, supervised methods x unsupervised methods
///   diversity.tsv      McNemar-significant plans / compared plans, per target group
///   unidentified.tsv   defective modules missed by every HDP / every UDP / both, per plan
///   satisfactory.tsv   SC1 / SC2 ratios per method and target group
struct ReportBundle {
    std::vector<std::pair<std::string, std::string>> files;

    /// Throws Error(InvalidArgument) for an unknown name.
    const std::string& file(std::string_view name) const;
};

/// Pure function of the exported results; needs at least two methods
/// (Error(InsufficientMethods) otherwise).
ReportBundle build_report(const ExperimentResult& result);

void write_report(const ReportBundle& bundle, const std::filesystem::path& dir);

} // namespace hdpbench
