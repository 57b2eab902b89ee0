#include "hdpbench/registry.hpp"

#include "hdpbench/error.hpp"
#include "hdpbench/hdp.hpp"
#include "hdpbench/udp.hpp"

#include <algorithm>

namespace hdpbench {

std::string_view to_string(MethodKind k) noexcept {
    return k == MethodKind::Supervised ? "supervised" : "unsupervised";
}

MethodKind parse_method_kind(std::string_view text) {
    if (text == "supervised") return MethodKind::Supervised;
    if (text == "unsupervised") return MethodKind::Unsupervised;
    throw Error(ErrorCode::MalformedInput, "unknown method kind '" + std::string(text) + "'");
}

MethodRegistry MethodRegistry::with_builtins() {
    MethodRegistry r;
    r.add({"HDP1", MethodKind::Supervised, MeasureDependence::None,
           [](const MethodContext& c) { return hdp1_predict(c.source, c.target); }});
    r.add({"HDP5", MethodKind::Supervised, MeasureDependence::None,
           [](const MethodContext& c) { return hdp5_predict(c.source, c.target); }});
    r.add({"UDP1", MethodKind::Unsupervised, MeasureDependence::None,
           [](const MethodContext& c) { return HdpOutcome::success(cla_predict(c.target)); }});
    r.add({"UDP2", MethodKind::Unsupervised, MeasureDependence::None,
           [](const MethodContext& c) { return HdpOutcome::success(clami_predict(c.target)); }});
    r.add({"UDP3", MethodKind::Unsupervised, MeasureDependence::None,
           [](const MethodContext& c) { return HdpOutcome::success(spectral_predict(c.target)); }});
    // ManualDown for the classification measures, ManualUp for the effort-aware ones
    r.add({"UDP4", MethodKind::Unsupervised, MeasureDependence::EffortAware, [](const MethodContext& c) {
               const auto dir = is_effort_aware(c.measure) ? RankDirection::Up : RankDirection::Down;
               return HdpOutcome::success(manual_rank(c.target, dir));
           }});
    r.add({"UDP5", MethodKind::Unsupervised, MeasureDependence::PerMeasure, [](const MethodContext& c) {
               return HdpOutcome::success(best_metric_oracle(c.target, c.measure, c.effort_fraction).predictions);
           }});
    return r;
}

const MethodInfo& MethodRegistry::add(MethodInfo info) {
    if (info.name.empty()) throw Error(ErrorCode::InvalidArgument, "method name is empty");
    if (!info.fn) throw Error(ErrorCode::InvalidArgument, "method '" + info.name + "' has no implementation");
    if (contains(info.name)) throw Error(ErrorCode::DuplicateMethod, "method '" + info.name + "' already registered");
    methods_.push_back(std::move(info));
    return methods_.back();
}

const MethodInfo& MethodRegistry::get(std::string_view name) const {
    auto it = std::find_if(methods_.begin(), methods_.end(), [&](const MethodInfo& m) { return m.name == name; });
    if (it == methods_.end()) throw Error(ErrorCode::UnknownMethod, "no method named '" + std::string(name) + "'");
    return *it;
}

bool MethodRegistry::contains(std::string_view name) const noexcept {
    return std::any_of(methods_.begin(), methods_.end(), [&](const MethodInfo& m) { return m.name == name; });
}

std::vector<std::string> MethodRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(methods_.size());
    for (const auto& m : methods_) out.push_back(m.name);
    return out;
}

const MethodInfo& register_external_method(MethodRegistry& registry, std::string name, MethodFn fn, MethodKind kind) {
    return registry.add({std::move(name), kind, MeasureDependence::None, std::move(fn)});
}

} // namespace hdpbench
