#include "hdpbench/learner.hpp"

#include "hdpbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdpbench {

StandardizationParams zscore_fit(const Eigen::MatrixXd& X) {
    if (X.rows() < 2) throw Error(ErrorCode::InvalidArgument, "zscore_fit needs at least two rows");
    StandardizationParams p;
    const double n = static_cast<double>(X.rows());
    p.means = X.colwise().mean().transpose();
    p.stds.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double ss = (X.col(j).array() - p.means(j)).square().sum();
        p.stds(j) = std::sqrt(ss / (n - 1.0));
    }
    return p;
}

Eigen::MatrixXd zscore_apply(const StandardizationParams& params, const Eigen::MatrixXd& X) {
    if (X.cols() != params.n_features()) {
        throw Error(ErrorCode::DimensionMismatch, "zscore_apply: " + std::to_string(X.cols()) +
                                                      " columns, params for " + std::to_string(params.n_features()));
    }
    Eigen::MatrixXd Z(X.rows(), X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        if (params.stds(j) > 0) Z.col(j) = (X.col(j).array() - params.means(j)) / params.stds(j);
        else Z.col(j).setZero();
    }
    return Z;
}

namespace {

// log(1 + e^z) without overflow
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double clamp_open_unit(double p) {
    constexpr double lo = std::numeric_limits<double>::min();
    const double hi = std::nextafter(1.0, 0.0);
    return std::clamp(p, lo, hi);
}

Eigen::VectorXd to_targets(std::span<const Label> y) {
    Eigen::VectorXd t(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) t(static_cast<Eigen::Index>(i)) = is_defective(y[i]) ? 1.0 : 0.0;
    return t;
}

} // namespace

LogisticObjective::LogisticObjective(Eigen::MatrixXd Z, Eigen::VectorXd y, double l2)
    : Z_(std::move(Z)), y_(std::move(y)), l2_(l2) {
    if (Z_.rows() != y_.size()) throw Error(ErrorCode::DimensionMismatch, "objective: rows and targets differ");
}

double LogisticObjective::value(const Eigen::VectorXd& w, double b) const {
    const Eigen::VectorXd z = (Z_ * w).array() + b;
    double loss = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) loss += softplus(z(i)) - y_(i) * z(i);
    return loss / static_cast<double>(z.size()) + 0.5 * l2_ * w.squaredNorm();
}

Eigen::VectorXd LogisticObjective::gradient(const Eigen::VectorXd& w, double b) const {
    const Eigen::VectorXd z = (Z_ * w).array() + b;
    Eigen::VectorXd residual(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) residual(i) = sigmoid(z(i)) - y_(i);
    const double n = static_cast<double>(z.size());
    Eigen::VectorXd g(w.size() + 1);
    g.head(w.size()) = Z_.transpose() * residual / n + l2_ * w;
    g(w.size()) = residual.sum() / n;
    return g;
}

LogisticFit fit_logistic(const Eigen::MatrixXd& X, std::span<const Label> y, const LogisticConfig& cfg) {
    if (static_cast<std::size_t>(X.rows()) != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "train_logistic: " + std::to_string(X.rows()) + " rows but " +
                                                      std::to_string(y.size()) + " labels");
    }
    if (y.empty()) throw Error(ErrorCode::InvalidArgument, "train_logistic: no training examples");
    if (!X.allFinite()) throw Error(ErrorCode::InvalidArgument, "train_logistic: non-finite feature value");

    LogisticFit fit;
    LogisticModel& model = fit.model;
    if (X.rows() >= 2) {
        model.standardization = zscore_fit(X);
    } else {
        model.standardization.means = X.row(0).transpose();
        model.standardization.stds = Eigen::VectorXd::Zero(X.cols());
    }
    model.weights = Eigen::VectorXd::Zero(X.cols());

    const auto positives = static_cast<double>(std::count(y.begin(), y.end(), Label::Defective));
    const auto n = static_cast<double>(y.size());
    if (positives == 0 || positives == n) {
        const double prior = (positives + 1.0) / (n + 2.0);
        model.bias = std::log(prior / (1.0 - prior));
        fit.converged = true;
        return fit;
    }

    const LogisticObjective objective(zscore_apply(model.standardization, X), to_targets(y), cfg.l2_strength);
    const Eigen::Index d = X.cols();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
    double f = objective.value(theta.head(d), theta(d));
    fit.loss_history.push_back(f);
    Eigen::VectorXd g = objective.gradient(theta.head(d), theta(d));

    constexpr double armijo = 1e-4;
    double step = 1.0;
    Eigen::VectorXd prev_theta, prev_g;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const double gnorm2 = g.squaredNorm();
        if (std::sqrt(gnorm2) < cfg.tolerance) {
            fit.converged = true;
            break;
        }
        // Barzilai-Borwein guess, then backtrack until sufficient decrease.
        if (prev_theta.size() > 0) {
            const Eigen::VectorXd s = theta - prev_theta;
            const Eigen::VectorXd yk = g - prev_g;
            const double sy = s.dot(yk);
            if (sy > 0) step = s.squaredNorm() / sy;
        }
        Eigen::VectorXd candidate;
        double f_candidate = 0;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            candidate = theta - step * g;
            f_candidate = objective.value(candidate.head(d), candidate(d));
            if (f_candidate <= f - armijo * step * gnorm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // no representable descent step left
        prev_theta = theta;
        prev_g = g;
        theta = std::move(candidate);
        f = f_candidate;
        g = objective.gradient(theta.head(d), theta(d));
        fit.loss_history.push_back(f);
        fit.iterations = iter + 1;
    }
    if (!fit.converged && g.norm() < cfg.tolerance) fit.converged = true;

    model.weights = theta.head(d);
    model.bias = theta(d);
    return fit;
}

Eigen::VectorXd predict_proba(const LogisticModel& m, const Eigen::MatrixXd& X) {
    if (X.cols() != m.n_features()) {
        throw Error(ErrorCode::DimensionMismatch, "predict_proba: " + std::to_string(X.cols()) +
                                                      " features, model trained on " + std::to_string(m.n_features()));
    }
    const Eigen::VectorXd z = (zscore_apply(m.standardization, X) * m.weights).array() + m.bias;
    Eigen::VectorXd p(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) p(i) = clamp_open_unit(sigmoid(z(i)));
    return p;
}

} // namespace hdpbench
