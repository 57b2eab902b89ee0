#include "hdpbench/harness.hpp"

#include "hdpbench/error.hpp"
#include "hdpbench/manifest.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace hdpbench {

namespace {

// Runs fn(0..n-1) on up to `workers` threads. The first exception is rethrown
// after every thread has joined.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// The measure a method is invoked with for a given evaluated measure. Methods
// that ignore the measure always see F1; effort-aware-dependent methods see F1
// or ACC as representatives of the two families.
Measure variant_measure(MeasureDependence dep, Measure m) {
    switch (dep) {
    case MeasureDependence::None: return Measure::F1;
    case MeasureDependence::EffortAware: return is_effort_aware(m) ? Measure::Acc : Measure::F1;
    case MeasureDependence::PerMeasure: return m;
    }
    return m;
}

struct DecisionVariant {
    Measure measure;
    std::string suffix;
};

std::vector<DecisionVariant> decision_variants(MeasureDependence dep) {
    if (dep == MeasureDependence::PerMeasure) return {{Measure::Auc, "-A"}, {Measure::F1, "-F"}};
    return {{Measure::F1, ""}};
}

HdpOutcome invoke(const MethodInfo& method, const MethodContext& ctx) {
    try {
        HdpOutcome out = method.fn(ctx);
        if (!out.ok()) return out;
        const Predictions& preds = out.predictions();
        if (preds.size() != ctx.target.n_modules()) {
            return HdpOutcome::failure(FailureReason::MethodError,
                                       "returned " + std::to_string(preds.size()) + " predictions for " +
                                           std::to_string(ctx.target.n_modules()) + " modules");
        }
        for (std::size_t i = 0; i < preds.size(); ++i) {
            if (preds[i].module_id != ctx.target.module_ids()[i]) {
                return HdpOutcome::failure(FailureReason::MethodError,
                                           "prediction " + std::to_string(i) + " is for module '" +
                                               preds[i].module_id + "'");
            }
        }
        return out;
    } catch (const std::exception& e) {
        return HdpOutcome::failure(FailureReason::MethodError, e.what());
    }
}

// Outcomes of one method on one plan, keyed by the measure it was invoked with.
using OutcomeSet = std::vector<std::pair<Measure, HdpOutcome>>;

const HdpOutcome& lookup(const OutcomeSet& set, Measure m) {
    for (const auto& [key, outcome] : set) {
        if (key == m) return outcome;
    }
    throw Error(ErrorCode::InvalidArgument, "internal: missing method variant");
}

void add_variant(OutcomeSet& set, Measure m, const std::function<HdpOutcome(Measure)>& compute) {
    for (const auto& entry : set) {
        if (entry.first == m) return;
    }
    set.emplace_back(m, compute(m));
}

std::vector<Measure> needed_variants(const MethodInfo& info, std::span<const Measure> measures) {
    std::vector<Measure> out;
    auto push = [&](Measure m) {
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    };
    for (Measure m : measures) push(variant_measure(info.dependence, m));
    for (const auto& v : decision_variants(info.dependence)) push(variant_measure(info.dependence, v.measure));
    return out;
}

std::string hit_string(const Predictions& preds, std::span<const Label> truth) {
    std::string hits;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (is_defective(truth[i])) hits.push_back(is_defective(preds[i].predicted) ? '1' : '0');
    }
    return hits;
}

struct PlanOutput {
    bool evaluated = false;
    std::vector<ResultRow> rows;
    std::vector<DecisionRow> decisions;
    std::vector<std::pair<std::size_t, std::string>> failures;  // (method index, reason)
};

} // namespace

std::size_t RunSummary::method_errors() const {
    std::size_t n = 0;
    for (const auto& m : methods) {
        auto it = m.failures.find(std::string(to_string(FailureReason::MethodError)));
        if (it != m.failures.end()) n += it->second;
    }
    return n;
}

const DatasetSummary& RunSummary::dataset(std::string_view name) const {
    for (const auto& d : datasets) {
        if (d.name == name) return d;
    }
    throw Error(ErrorCode::InvalidArgument, "summary: unknown dataset '" + std::string(name) + "'");
}

const MethodSummary& RunSummary::method(std::string_view name) const {
    for (const auto& m : methods) {
        if (m.name == name) return m;
    }
    throw Error(ErrorCode::UnknownMethod, "summary: unknown method '" + std::string(name) + "'");
}

ExperimentResult run_experiment(std::span<const DefectDataset> datasets, const ExperimentConfig& cfg,
                                const MethodRegistry& registry) {
    cfg.validate();
    std::vector<const MethodInfo*> methods;
    for (const auto& name : cfg.methods) {
        const MethodInfo& info = registry.get(name);
        if (std::find(methods.begin(), methods.end(), &info) != methods.end()) {
            throw Error(ErrorCode::DuplicateMethod, "config lists method '" + name + "' twice");
        }
        methods.push_back(&info);
    }
    const MethodInfo* gate = cfg.scenario == Scenario::Scenario2 ? &registry.get(kHdp1) : nullptr;

    std::map<std::string, std::size_t, std::less<>> index_of;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        if (!index_of.emplace(datasets[i].name(), i).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate dataset name '" + datasets[i].name() + "'");
        }
    }
    const std::vector<CombinationPlan> plans = enumerate_combinations(datasets);

    // Unsupervised methods: one call per (method, target, variant).
    struct UnsupervisedTask {
        std::size_t method;
        std::size_t target;
        Measure variant;
    };
    std::vector<UnsupervisedTask> tasks;
    {
        std::vector<bool> is_target(datasets.size(), false);
        for (const auto& p : plans) is_target[index_of.find(p.target)->second] = true;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            if (methods[m]->kind != MethodKind::Unsupervised) continue;
            for (std::size_t t = 0; t < datasets.size(); ++t) {
                if (!is_target[t]) continue;
                for (Measure v : needed_variants(*methods[m], cfg.measures)) tasks.push_back({m, t, v});
            }
        }
    }
    std::vector<std::optional<HdpOutcome>> task_out(tasks.size());
    parallel_for(tasks.size(), cfg.workers, [&](std::size_t k) {
        const auto& task = tasks[k];
        const DefectDataset& target = datasets[task.target];
        task_out[k] = invoke(*methods[task.method], {target, target, task.variant, cfg.effort_fraction, cfg.seed});
    });
    auto unsupervised = [&](std::size_t m, std::size_t t, Measure v) -> const HdpOutcome& {
        for (std::size_t k = 0; k < tasks.size(); ++k) {
            if (tasks[k].method == m && tasks[k].target == t && tasks[k].variant == v) return *task_out[k];
        }
        throw Error(ErrorCode::InvalidArgument, "internal: unsupervised outcome not computed");
    };

    std::vector<PlanOutput> outputs(plans.size());
    parallel_for(plans.size(), cfg.workers, [&](std::size_t p) {
        const std::size_t si = index_of.find(plans[p].source)->second;
        const std::size_t ti = index_of.find(plans[p].target)->second;
        const DefectDataset& source = datasets[si];
        const DefectDataset& target = datasets[ti];
        PlanOutput& out = outputs[p];

        std::optional<HdpOutcome> gate_outcome;
        if (gate) {
            gate_outcome = invoke(*gate, {source, target, Measure::F1, cfg.effort_fraction, cfg.seed});
            if (!gate_outcome->ok()) return;
        }
        out.evaluated = true;

        for (std::size_t m = 0; m < methods.size(); ++m) {
            const MethodInfo& info = *methods[m];
            OutcomeSet set;
            for (Measure v : needed_variants(info, cfg.measures)) {
                add_variant(set, v, [&](Measure variant) -> HdpOutcome {
                    if (info.kind == MethodKind::Unsupervised) return unsupervised(m, ti, variant);
                    if (gate_outcome && &info == gate) return *gate_outcome;
                    return invoke(info, {source, target, variant, cfg.effort_fraction, cfg.seed});
                });
            }

            bool failed_recorded = false;
            for (Measure measure : cfg.measures) {
                const HdpOutcome& outcome = lookup(set, variant_measure(info.dependence, measure));
                ResultRow row{info.name, source.name(), target.name(), measure, std::nullopt, {}};
                if (!outcome.ok()) {
                    row.failure = outcome.failure_text();
                    if (!failed_recorded) {
                        out.failures.emplace_back(m, std::string(to_string(outcome.reason())));
                        failed_recorded = true;
                    }
                } else {
                    try {
                        row.value = evaluate(measure, outcome.predictions(), target.labels(), cfg.effort_fraction);
                        if (!row.value) row.failure = std::string(kUndefinedMeasure);
                    } catch (const std::exception& e) {
                        row.failure = std::string(to_string(FailureReason::MethodError)) + ": " + e.what();
                        if (!failed_recorded) {
                            out.failures.emplace_back(m, row.failure.substr(0, row.failure.find(':')));
                            failed_recorded = true;
                        }
                    }
                }
                out.rows.push_back(std::move(row));
            }

            for (const auto& variant : decision_variants(info.dependence)) {
                const HdpOutcome& outcome = lookup(set, variant_measure(info.dependence, variant.measure));
                if (!outcome.ok()) continue;
                DecisionRow d{info.name + variant.suffix, source.name(), target.name(),
                              confusion(outcome.predictions(), target.labels()),
                              hit_string(outcome.predictions(), target.labels())};
                out.decisions.push_back(std::move(d));
            }
        }
    });

    ExperimentResult result;
    RunSummary& s = result.summary;
    s.scenario = cfg.scenario;
    s.effort_fraction = cfg.effort_fraction;
    s.seed = cfg.seed;
    s.plans_enumerated = plans.size();
    s.measures = cfg.measures;
    for (const MethodInfo* info : methods) s.methods.push_back({info->name, info->kind, {}});
    for (const auto& d : datasets) {
        const DatasetStats st = dataset_stats(d);
        s.datasets.push_back({d.name(), d.schema().group_name, st.n_modules, st.n_defective});
    }
    for (auto& out : outputs) {
        if (!out.evaluated) continue;
        ++s.plans_evaluated;
        for (auto& [m, reason] : out.failures) ++s.methods[m].failures[reason];
        std::move(out.rows.begin(), out.rows.end(), std::back_inserter(result.rows));
        std::move(out.decisions.begin(), out.decisions.end(), std::back_inserter(result.decisions));
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const MethodRegistry& registry) {
    if (cfg.manifest.empty()) throw Error(ErrorCode::InvalidArgument, "config: no manifest");
    const DatasetManifest manifest = DatasetManifest::load(cfg.manifest);
    const std::vector<DefectDataset> datasets = manifest.load_all();
    return run_experiment(datasets, cfg, registry);
}

} // namespace hdpbench
