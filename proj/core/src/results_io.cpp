#include "hdpbench/error.hpp"
#include "hdpbench/harness.hpp"
#include "text_util.hpp"

#include <json.hpp>

namespace hdpbench {

namespace {

constexpr std::string_view kResultsHeader = "method\tsource\ttarget\tmeasure\tvalue\tfailure";
constexpr std::string_view kDecisionsHeader = "method\tsource\ttarget\ttp\tfp\ttn\tfn\thits";

// Tabs and line breaks inside free text would break the record structure.
std::string sanitize(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

std::vector<std::vector<std::string>> records(std::string_view text, std::string_view header, std::size_t fields,
                                              std::string_view what) {
    auto lines = detail::split_lines(text);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != header) {
        throw Error(ErrorCode::MalformedInput, std::string(what) + ": missing or unexpected header");
    }
    std::vector<std::vector<std::string>> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto f = detail::split_exact(lines[i], '\t');
        if (f.size() != fields) {
            throw Error(ErrorCode::MalformedInput, std::string(what) + " line " + std::to_string(i + 1) + ": expected " +
                                                       std::to_string(fields) + " fields, got " +
                                                       std::to_string(f.size()));
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::size_t parse_count(const std::string& s, std::string_view what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::MalformedInput, std::string(what) + ": '" + s + "' is not a count");
    }
    return v;
}

} // namespace

std::string results_tsv(std::span<const ResultRow> rows) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.method + '\t' + r.source + '\t' + r.target + '\t' + std::string(to_string(r.measure)) + '\t';
        if (r.value) out += detail::format_double(*r.value);
        out += '\t' + sanitize(r.failure) + '\n';
    }
    return out;
}

std::vector<ResultRow> parse_results_tsv(std::string_view text) {
    std::vector<ResultRow> rows;
    for (auto& f : records(text, kResultsHeader, 6, kResultsFile)) {
        ResultRow r{std::move(f[0]), std::move(f[1]), std::move(f[2]), parse_measure(f[3]), std::nullopt,
                    std::move(f[5])};
        if (!f[4].empty()) {
            r.value = detail::parse_double(f[4]);
            if (!r.value) throw Error(ErrorCode::MalformedInput, "results: '" + f[4] + "' is not a number");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string decisions_tsv(std::span<const DecisionRow> rows) {
    std::string out(kDecisionsHeader);
    out += '\n';
    for (const auto& d : rows) {
        out += d.method + '\t' + d.source + '\t' + d.target + '\t' + std::to_string(d.cm.tp) + '\t' +
               std::to_string(d.cm.fp) + '\t' + std::to_string(d.cm.tn) + '\t' + std::to_string(d.cm.fn) + '\t' +
               d.hits + '\n';
    }
    return out;
}

std::vector<DecisionRow> parse_decisions_tsv(std::string_view text) {
    std::vector<DecisionRow> rows;
    for (auto& f : records(text, kDecisionsHeader, 8, kDecisionsFile)) {
        DecisionRow d;
        d.method = std::move(f[0]);
        d.source = std::move(f[1]);
        d.target = std::move(f[2]);
        d.cm.tp = parse_count(f[3], kDecisionsFile);
        d.cm.fp = parse_count(f[4], kDecisionsFile);
        d.cm.tn = parse_count(f[5], kDecisionsFile);
        d.cm.fn = parse_count(f[6], kDecisionsFile);
        d.hits = std::move(f[7]);
        if (d.hits.find_first_not_of("01") != std::string::npos || d.hits.size() != d.cm.tp + d.cm.fn) {
            throw Error(ErrorCode::MalformedInput, "decisions: hit string disagrees with tp + fn");
        }
        rows.push_back(std::move(d));
    }
    return rows;
}

std::string summary_json(const RunSummary& s) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["scenario"] = to_string(s.scenario);
    j["effort_fraction"] = s.effort_fraction;
    j["seed"] = s.seed;
    j["plans"] = {{"enumerated", s.plans_enumerated}, {"evaluated", s.plans_evaluated}};
    j["measures"] = ordered_json::array();
    for (Measure m : s.measures) j["measures"].push_back(to_string(m));
    j["methods"] = ordered_json::array();
    for (const auto& m : s.methods) {
        ordered_json failures = ordered_json::object();
        for (const auto& [reason, count] : m.failures) failures[reason] = count;
        j["methods"].push_back({{"name", m.name}, {"kind", to_string(m.kind)}, {"failures", failures}});
    }
    j["datasets"] = ordered_json::array();
    for (const auto& d : s.datasets) {
        j["datasets"].push_back(
            {{"name", d.name}, {"group", d.group}, {"modules", d.modules}, {"defective", d.defective}});
    }
    return j.dump(2) + '\n';
}

RunSummary parse_summary_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        RunSummary s;
        s.scenario = parse_scenario(j.at("scenario").get<std::string>());
        s.effort_fraction = j.at("effort_fraction").get<double>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.plans_enumerated = j.at("plans").at("enumerated").get<std::size_t>();
        s.plans_evaluated = j.at("plans").at("evaluated").get<std::size_t>();
        for (const auto& m : j.at("measures")) s.measures.push_back(parse_measure(m.get<std::string>()));
        for (const auto& m : j.at("methods")) {
            MethodSummary ms{m.at("name").get<std::string>(), parse_method_kind(m.at("kind").get<std::string>()), {}};
            for (const auto& [reason, count] : m.at("failures").items()) ms.failures[reason] = count.get<std::size_t>();
            s.methods.push_back(std::move(ms));
        }
        for (const auto& d : j.at("datasets")) {
            s.datasets.push_back({d.at("name").get<std::string>(), d.at("group").get<std::string>(),
                                  d.at("modules").get<std::size_t>(), d.at("defective").get<std::size_t>()});
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("summary: ") + e.what());
    }
}

void export_results(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
    detail::write_text_file(dir / kResultsFile, results_tsv(result.rows));
    detail::write_text_file(dir / kDecisionsFile, decisions_tsv(result.decisions));
    detail::write_text_file(dir / kSummaryFile, summary_json(result.summary));
}

ExperimentResult read_results(const std::filesystem::path& dir) {
    ExperimentResult r;
    r.rows = parse_results_tsv(detail::read_text_file(dir / kResultsFile));
    r.decisions = parse_decisions_tsv(detail::read_text_file(dir / kDecisionsFile));
    r.summary = parse_summary_json(detail::read_text_file(dir / kSummaryFile));
    return r;
}

} // namespace hdpbench
