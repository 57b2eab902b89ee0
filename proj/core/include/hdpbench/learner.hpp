#pragma once

#include "hdpbench/dataset.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace hdpbench {

struct StandardizationParams {
    Eigen::VectorXd means;
    Eigen::VectorXd stds;

    Eigen::Index n_features() const noexcept { return means.size(); }
};

/// Column means and sample (n-1) standard deviations. Needs at least two rows.
StandardizationParams zscore_fit(const Eigen::MatrixXd& X);

/// (x - mean) / std per cell; columns whose std is 0 map to 0.
Eigen::MatrixXd zscore_apply(const StandardizationParams& params, const Eigen::MatrixXd& X);

struct LogisticConfig {
    double l2_strength = 1e-4;
    int max_iters = 5000;
    double tolerance = 1e-8;
};

struct LogisticModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
    StandardizationParams standardization;

    Eigen::Index n_features() const noexcept { return weights.size(); }
};

/// L2-regularised mean log-loss on already standardised inputs:
///   (1/n) sum_i [log(1 + e^{z_i}) - y_i z_i] + (l2/2) |w|^2,  z_i = w.x_i + b.
/// The bias is not penalised.
class LogisticObjective {
public:
    LogisticObjective(Eigen::MatrixXd Z, Eigen::VectorXd y, double l2);

    double value(const Eigen::VectorXd& w, double b) const;
    /// Gradient packed as [d/dw ..., d/db].
    Eigen::VectorXd gradient(const Eigen::VectorXd& w, double b) const;

private:
    Eigen::MatrixXd Z_;
    Eigen::VectorXd y_;
    double l2_;
};

struct LogisticFit {
    LogisticModel model;
    std::vector<double> loss_history;  // objective after each accepted step, starting at the zero model
    int iterations = 0;
    bool converged = false;
};

/// Full-batch gradient descent with Armijo backtracking from zero weights.
/// A single-class `y` yields the constant model whose score is the
/// Laplace-smoothed class prior.
LogisticFit fit_logistic(const Eigen::MatrixXd& X, std::span<const Label> y, const LogisticConfig& cfg = {});

inline LogisticModel train_logistic(const Eigen::MatrixXd& X, std::span<const Label> y,
                                    const LogisticConfig& cfg = {}) {
    return fit_logistic(X, y, cfg).model;
}

/// Scores strictly inside (0, 1).
Eigen::VectorXd predict_proba(const LogisticModel& m, const Eigen::MatrixXd& X);

inline constexpr double kDecisionThreshold = 0.5;

} // namespace hdpbench
