#include "hdpbench/prediction.hpp"

#include "hdpbench/error.hpp"

#include <algorithm>

namespace hdpbench {

std::vector<double> module_efforts(const DefectDataset& d) {
    std::vector<double> loc = loc_values(d);
    for (double& v : loc) v = std::max(v, 1.0);
    return loc;
}

Predictions predictions_from_proba(const DefectDataset& target, const Eigen::VectorXd& proba) {
    if (static_cast<std::size_t>(proba.size()) != target.n_modules()) {
        throw Error(ErrorCode::DimensionMismatch, "predictions_from_proba: score count differs from module count");
    }
    const std::vector<double> effort = module_efforts(target);
    Predictions out;
    out.reserve(target.n_modules());
    for (std::size_t i = 0; i < target.n_modules(); ++i) {
        const double p = proba(static_cast<Eigen::Index>(i));
        out.push_back({target.module_ids()[i], p, p > 0.5 ? Label::Defective : Label::NonDefective, effort[i]});
    }
    return out;
}

std::string_view to_string(FailureReason r) noexcept {
    switch (r) {
    case FailureReason::NoMatchedMetrics: return "NoMatchedMetrics";
    case FailureReason::MethodError: return "MethodError";
    }
    return "MethodError";
}

const Predictions& HdpOutcome::predictions() const {
    if (!ok()) throw Error(ErrorCode::InvalidArgument, "outcome has no predictions: " + failure_text());
    return std::get<Predictions>(state_);
}

FailureReason HdpOutcome::reason() const {
    if (ok()) throw Error(ErrorCode::InvalidArgument, "outcome is a success");
    return std::get<Failed>(state_).reason;
}

const std::string& HdpOutcome::detail() const {
    static const std::string empty;
    return ok() ? empty : std::get<Failed>(state_).detail;
}

std::string HdpOutcome::failure_text() const {
    if (ok()) return {};
    const auto& f = std::get<Failed>(state_);
    std::string text(to_string(f.reason));
    if (!f.detail.empty()) text += ": " + f.detail;
    return text;
}

} // namespace hdpbench
