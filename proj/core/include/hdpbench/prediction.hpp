#pragma once

#include "hdpbench/dataset.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hdpbench {

/// Output of any method for one target module. Higher score means inspect
/// earlier; effort is the module's LOC (clamped to at least 1).
struct ScoredPrediction {
    std::string module_id;
    double score = 0.0;
    Label predicted = Label::NonDefective;
    double effort = 1.0;
};

using Predictions = std::vector<ScoredPrediction>;

/// LOC per module with values below 1 clamped to 1, so efforts stay positive.
std::vector<double> module_efforts(const DefectDataset& d);

/// Predictions for every module of `target` from a probability vector,
/// thresholded at 0.5.
Predictions predictions_from_proba(const DefectDataset& target, const Eigen::VectorXd& proba);

enum class FailureReason { NoMatchedMetrics, MethodError };

std::string_view to_string(FailureReason r) noexcept;

/// Either one prediction per target module or the reason the method could not
/// produce any.
class HdpOutcome {
public:
    static HdpOutcome success(Predictions p) { return HdpOutcome(std::move(p)); }
    static HdpOutcome failure(FailureReason reason, std::string detail = {}) {
        return HdpOutcome(Failed{reason, std::move(detail)});
    }

    bool ok() const noexcept { return std::holds_alternative<Predictions>(state_); }
    const Predictions& predictions() const;
    FailureReason reason() const;
    const std::string& detail() const;
    /// "NoMatchedMetrics" or "MethodError: <detail>"
    std::string failure_text() const;

private:
    struct Failed {
        FailureReason reason;
        std::string detail;
    };
    explicit HdpOutcome(Predictions p) : state_(std::move(p)) {}
    explicit HdpOutcome(Failed f) : state_(std::move(f)) {}

    std::variant<Predictions, Failed> state_;
};

} // namespace hdpbench
