#pragma once

#include "hdpbench/dataset.hpp"
#include "hdpbench/measures.hpp"
#include "hdpbench/prediction.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hdpbench {

enum class MethodKind { Supervised, Unsupervised };

std::string_view to_string(MethodKind k) noexcept;
MethodKind parse_method_kind(std::string_view text);

/// How a method's predictions depend on the measure being computed.
///   None        one prediction set per plan
///   EffortAware one set for the non-effort-aware measures, another for the
///               effort-aware ones
///   PerMeasure  a separate prediction set per measure
enum class MeasureDependence { None, EffortAware, PerMeasure };

struct MethodContext {
    const DefectDataset& source;
    const DefectDataset& target;
    Measure measure;
    double effort_fraction;
    std::uint64_t seed;
};

using MethodFn = std::function<HdpOutcome(const MethodContext&)>;

struct MethodInfo {
    std::string name;
    MethodKind kind = MethodKind::Supervised;
    MeasureDependence dependence = MeasureDependence::None;
    MethodFn fn;
};

class MethodRegistry {
public:
    /// HDP1, HDP5, UDP1 (CLA), UDP2 (CLAMI), UDP3 (spectral),
    /// UDP4 (ManualDown / ManualUp), UDP5 (best single metric).
    static MethodRegistry with_builtins();

    /// Throws Error(DuplicateMethod) when the name is taken.
    const MethodInfo& add(MethodInfo info);
    /// Throws Error(UnknownMethod).
    const MethodInfo& get(std::string_view name) const;
    bool contains(std::string_view name) const noexcept;
    std::vector<std::string> names() const;

private:
    std::deque<MethodInfo> methods_;  // stable references
};

/// Extension point for heterogeneous methods defined outside the library.
/// The method takes part in harness runs exactly like the built-ins.
const MethodInfo& register_external_method(MethodRegistry& registry, std::string name, MethodFn fn,
                                           MethodKind kind = MethodKind::Supervised);

inline constexpr std::string_view kHdp1 = "HDP1";

} // namespace hdpbench
