#include "hdpbench/report.hpp"

#include "hdpbench/error.hpp"
#include "hdpbench/stats.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace hdpbench {

namespace {

using Table = std::vector<std::vector<std::string>>;

std::string to_tsv(const Table& t) {
    std::string out;
    for (const auto& row : t) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += '\t';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string to_markdown(const Table& t) {
    if (t.empty()) return "_no data_\n";
    std::string out;
    auto line = [&](const std::vector<std::string>& row) {
        out += '|';
        for (const auto& cell : row) out += ' ' + cell + " |";
        out += '\n';
    };
    line(t.front());
    out += '|';
    for (std::size_t i = 0; i < t.front().size(); ++i) out += " --- |";
    out += '\n';
    for (std::size_t r = 1; r < t.size(); ++r) line(t[r]);
    return out;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string percent(double numerator, double denominator) {
    return denominator > 0 ? format_percent(numerator, denominator) + "%" : std::string("-");
}

using PlanKey = std::pair<std::string, std::string>;  // (target, source)

struct Index {
    const ExperimentResult& r;
    std::vector<std::string> groups;                       // first-appearance order
    std::map<std::string, std::string, std::less<>> group_of;
    std::vector<std::string> supervised, unsupervised;     // result-row methods
    std::vector<std::string> decision_methods;             // pseudo-methods, method order
    std::map<std::string, MethodKind, std::less<>> decision_kind;
    std::set<PlanKey> plans;
    // (method, measure, target, source) -> value or absent
    std::map<std::tuple<std::string, Measure, std::string, std::string>, std::optional<double>> values;
    std::map<std::tuple<std::string, std::string, std::string>, const DecisionRow*> decisions;

    explicit Index(const ExperimentResult& result) : r(result) {
        for (const auto& d : r.summary.datasets) {
            group_of[d.name] = d.group;
            if (std::find(groups.begin(), groups.end(), d.group) == groups.end()) groups.push_back(d.group);
        }
        for (const auto& m : r.summary.methods) {
            (m.kind == MethodKind::Supervised ? supervised : unsupervised).push_back(m.name);
        }
        for (const auto& row : r.rows) {
            plans.insert({row.target, row.source});
            values[{row.method, row.measure, row.target, row.source}] = row.value;
        }
        for (const auto& d : r.decisions) decisions[{d.method, d.target, d.source}] = &d;
        for (const auto& m : r.summary.methods) {
            for (const std::string& candidate : {m.name, m.name + "-A", m.name + "-F"}) {
                const bool present = std::any_of(r.decisions.begin(), r.decisions.end(),
                                                 [&](const DecisionRow& d) { return d.method == candidate; });
                if (present) {
                    decision_methods.push_back(candidate);
                    decision_kind[candidate] = m.kind;
                }
            }
        }
    }

    const std::string& group(const std::string& dataset) const {
        auto it = group_of.find(dataset);
        if (it == group_of.end()) throw Error(ErrorCode::MalformedInput, "report: no group for '" + dataset + "'");
        return it->second;
    }

    std::optional<double> value(const std::string& method, Measure m, const PlanKey& plan) const {
        auto it = values.find({method, m, plan.first, plan.second});
        return it == values.end() ? std::nullopt : it->second;
    }

    const DecisionRow* decision(const std::string& method, const PlanKey& plan) const {
        auto it = decisions.find({method, plan.first, plan.second});
        return it == decisions.end() ? nullptr : it->second;
    }

    bool has_method(std::string_view name) const {
        return std::any_of(r.summary.methods.begin(), r.summary.methods.end(),
                           [&](const MethodSummary& m) { return m.name == name; });
    }

    // Plans on which HDP1 produced predictions.
    std::set<PlanKey> hdp1_plans() const {
        if (!has_method(kHdp1)) return r.summary.scenario == Scenario::Scenario2 ? plans : std::set<PlanKey>{};
        std::set<PlanKey> out;
        for (const auto& p : plans) {
            if (decision(std::string(kHdp1), p)) out.insert(p);
        }
        return out;
    }
};

Table scott_knott_table(const Index& ix) {
    Table t{{"scenario", "scope", "measure", "rank", "method", "mean"}};
    struct ScenarioPlans {
        std::string name;
        std::set<PlanKey> plans;
        bool include_hdp1;
    };
    std::vector<ScenarioPlans> scenarios{{"scenario1", ix.plans, false}, {"scenario2", ix.hdp1_plans(), true}};

    std::vector<std::string> scopes{"all"};
    scopes.insert(scopes.end(), ix.groups.begin(), ix.groups.end());

    for (const auto& sc : scenarios) {
        if (sc.plans.empty()) continue;
        for (const auto& scope : scopes) {
            for (Measure m : ix.r.summary.measures) {
                std::map<std::string, std::vector<double>> samples;
                std::map<std::string, double> display_mean;
                for (const auto& method : ix.r.summary.methods) {
                    if (!sc.include_hdp1 && method.name == kHdp1) continue;
                    std::vector<double> v;
                    for (const auto& plan : sc.plans) {
                        if (scope != "all" && ix.group(plan.first) != scope) continue;
                        if (auto x = ix.value(method.name, m, plan)) v.push_back(*x);
                    }
                    if (v.empty()) continue;
                    double sum = 0;
                    for (double x : v) sum += x;
                    display_mean[method.name] = sum / static_cast<double>(v.size());
                    // rank 1 is the best group, so lower-is-better measures are negated
                    if (!higher_is_better(m)) {
                        for (double& x : v) x = -x;
                    }
                    samples[method.name] = std::move(v);
                }
                if (samples.empty()) continue;
                const SkRanking ranking = scott_knott(samples);
                for (std::size_t g = 0; g < ranking.groups.size(); ++g) {
                    for (const auto& method : ranking.groups[g].methods) {
                        t.push_back({sc.name, scope, std::string(display_name(m)), std::to_string(g + 1), method,
                                     fixed(display_mean.at(method), 4)});
                    }
                }
            }
        }
    }
    return t;
}

Table wtl_table(const Index& ix, Measure m) {
    Table t;
    std::vector<std::string> header{"HDP\\UDP"};
    header.insert(header.end(), ix.unsupervised.begin(), ix.unsupervised.end());
    t.push_back(header);

    std::map<std::string, std::vector<std::string>> sources_of;  // target -> sources
    for (const auto& [target, source] : ix.plans) sources_of[target].push_back(source);

    for (const auto& hdp : ix.supervised) {
        std::vector<std::string> row{hdp};
        for (const auto& udp : ix.unsupervised) {
            std::vector<PairedSample> units;
            for (const auto& [target, sources] : sources_of) {
                PairedSample unit;
                for (const auto& source : sources) {
                    unit.first.push_back(ix.value(hdp, m, {target, source}));
                    unit.second.push_back(ix.value(udp, m, {target, source}));
                }
                units.push_back(std::move(unit));
            }
            row.push_back(win_tie_loss(units, higher_is_better(m)).text());
        }
        t.push_back(std::move(row));
    }
    return t;
}

ContingencyTable contingency(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::MalformedInput, "report: hit strings differ in length");
    ContingencyTable ct;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool ca = a[i] == '1', cb = b[i] == '1';
        if (ca && cb) ++ct.n_cc;
        else if (ca) ++ct.n_cw;
        else if (cb) ++ct.n_wc;
        else ++ct.n_ww;
    }
    return ct;
}

Table diversity_table_of(const Index& ix) {
    Table t;
    std::vector<std::string> header{"family", "method1", "method2"};
    header.insert(header.end(), ix.groups.begin(), ix.groups.end());
    header.push_back("Summary");
    t.push_back(header);

    std::vector<std::string> hdp, udp;
    for (const auto& m : ix.decision_methods) {
        (ix.decision_kind.at(m) == MethodKind::Supervised ? hdp : udp).push_back(m);
    }
    std::vector<std::tuple<std::string, std::string, std::string>> pairs;
    for (const auto& a : hdp) {
        for (const auto& b : udp) pairs.emplace_back("HDP-UDP", a, b);
    }
    for (std::size_t i = 0; i < hdp.size(); ++i) {
        for (std::size_t j = i + 1; j < hdp.size(); ++j) pairs.emplace_back("HDP-HDP", hdp[i], hdp[j]);
    }
    for (std::size_t i = 0; i < udp.size(); ++i) {
        for (std::size_t j = i + 1; j < udp.size(); ++j) pairs.emplace_back("UDP-UDP", udp[i], udp[j]);
    }

    for (const auto& [family, a, b] : pairs) {
        std::map<std::string, std::pair<std::size_t, std::size_t>> cells;  // group -> (significant, compared)
        std::pair<std::size_t, std::size_t> total{0, 0};
        for (const auto& plan : ix.plans) {
            const DecisionRow* da = ix.decision(a, plan);
            const DecisionRow* db = ix.decision(b, plan);
            if (!da || !db) continue;
            const bool significant = mcnemar(contingency(da->hits, db->hits)) < kSignificance;
            auto& cell = cells[ix.group(plan.first)];
            cell.first += significant;
            ++cell.second;
            total.first += significant;
            ++total.second;
        }
        std::vector<std::string> row{family, a, b};
        for (const auto& g : ix.groups) {
            const auto c = cells[g];
            row.push_back(std::to_string(c.first) + "/" + std::to_string(c.second));
        }
        row.push_back(std::to_string(total.first) + "/" + std::to_string(total.second));
        t.push_back(std::move(row));
    }
    return t;
}

Table unidentified_table(const Index& ix) {
    Table t{{"Source=>Target", "=0 by HDP", "Proportion", "=0 by UM", "Proportion", "=0 by ALL", "Proportion"}};
    for (const auto& plan : ix.hdp1_plans()) {
        std::string hdp_any, udp_any;
        for (const auto& m : ix.decision_methods) {
            const DecisionRow* d = ix.decision(m, plan);
            if (!d) continue;
            std::string& acc = ix.decision_kind.at(m) == MethodKind::Supervised ? hdp_any : udp_any;
            if (acc.empty()) acc.assign(d->hits.size(), '0');
            if (acc.size() != d->hits.size()) throw Error(ErrorCode::MalformedInput, "report: hit strings differ");
            for (std::size_t i = 0; i < acc.size(); ++i) {
                if (d->hits[i] == '1') acc[i] = '1';
            }
        }
        const DatasetSummary& target = ix.r.summary.dataset(plan.first);
        const std::size_t n_def = target.defective;
        if (hdp_any.empty()) hdp_any.assign(n_def, '0');
        if (udp_any.empty()) udp_any.assign(n_def, '0');
        std::size_t miss_hdp = 0, miss_udp = 0, miss_all = 0;
        for (std::size_t i = 0; i < n_def; ++i) {
            const bool h = hdp_any[i] == '1', u = udp_any[i] == '1';
            miss_hdp += !h;
            miss_udp += !u;
            miss_all += !h && !u;
        }
        // proportions relative to the target's module count
        const auto n = static_cast<double>(target.modules);
        t.push_back({plan.second + "=>" + plan.first, std::to_string(miss_hdp),
                     percent(static_cast<double>(miss_hdp), n), std::to_string(miss_udp),
                     percent(static_cast<double>(miss_udp), n), std::to_string(miss_all),
                     percent(static_cast<double>(miss_all), n)});
    }
    return t;
}

Table satisfactory_table(const Index& ix) {
    std::vector<std::string> header{"method"};
    std::vector<std::string> scopes = ix.groups;
    scopes.push_back("All");
    for (const auto& g : scopes) {
        for (Criterion c : {Criterion::SC1, Criterion::SC2}) header.push_back(g + " " + std::string(to_string(c)));
    }
    Table t{header};
    for (const auto& m : ix.decision_methods) {
        std::map<std::string, std::vector<PrecisionRecall>> per_scope;
        for (const auto& plan : ix.plans) {
            const DecisionRow* d = ix.decision(m, plan);
            if (!d) continue;
            const PrecisionRecallF1 pr = prf1(d->cm);
            per_scope[ix.group(plan.first)].push_back({pr.precision, pr.recall});
            per_scope["All"].push_back({pr.precision, pr.recall});
        }
        std::vector<std::string> row{m};
        for (const auto& g : scopes) {
            for (Criterion c : {Criterion::SC1, Criterion::SC2}) {
                const auto& v = per_scope[g];
                row.push_back(v.empty() ? std::string("-") : fixed(satisfactory_ratio(v, c), 2) + "%");
            }
        }
        t.push_back(std::move(row));
    }
    return t;
}

} // namespace

const std::string& ReportBundle::file(std::string_view name) const {
    for (const auto& [n, content] : files) {
        if (n == name) return content;
    }
    throw Error(ErrorCode::InvalidArgument, "report has no file '" + std::string(name) + "'");
}

ReportBundle build_report(const ExperimentResult& result) {
    if (result.summary.methods.size() < 2) {
        throw Error(ErrorCode::InsufficientMethods, "a report compares at least two methods");
    }
    const Index ix(result);
    ReportBundle bundle;
    std::string md = "# Benchmark report\n\n";
    md += "Scenario: " + std::string(to_string(result.summary.scenario)) + ". Plans evaluated: " +
          std::to_string(result.summary.plans_evaluated) + " of " + std::to_string(result.summary.plans_enumerated) +
          ".\n\n";

    auto add = [&](const std::string& name, const std::string& title, const Table& t) {
        bundle.files.emplace_back(name, to_tsv(t));
        md += "## " + title + "\n\n" + to_markdown(t) + "\n";
    };

    add("scott_knott.tsv", "Scott-Knott ranking", scott_knott_table(ix));
    for (Measure m : result.summary.measures) {
        add("wtl_" + std::string(to_string(m)) + ".tsv", "Win/tie/loss: " + std::string(display_name(m)),
            wtl_table(ix, m));
    }
    add("diversity.tsv", "Prediction diversity (McNemar p < 0.05 / compared plans)", diversity_table_of(ix));
    add("unidentified.tsv", "Defective modules no method identifies", unidentified_table(ix));
    add("satisfactory.tsv", "Satisfactory performance ratios", satisfactory_table(ix));
    bundle.files.emplace_back("report.md", std::move(md));
    return bundle;
}

void write_report(const ReportBundle& bundle, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
    for (const auto& [name, content] : bundle.files) detail::write_text_file(dir / name, content);
}

} // namespace hdpbench
