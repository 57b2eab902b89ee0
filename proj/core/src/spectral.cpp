#include "hdpbench/udp.hpp"

#include "hdpbench/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace hdpbench {

namespace {

// W x for W(i,j) = max(0, z_i.z_j), zero diagonal, without materialising W.
class SimilarityOperator {
public:
    explicit SimilarityOperator(const Eigen::MatrixXd& Z) : Z_(Z) {}

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        const Eigen::Index n = Z_.rows();
        Eigen::VectorXd out(n);
        for (Eigen::Index start = 0; start < n; start += kBlock) {
            const Eigen::Index rows = std::min(kBlock, n - start);
            Eigen::MatrixXd block = Z_.middleRows(start, rows) * Z_.transpose();
            block = block.cwiseMax(0.0);
            for (Eigen::Index r = 0; r < rows; ++r) block(r, start + r) = 0.0;
            out.segment(start, rows) = block * x;
        }
        return out;
    }

private:
    static constexpr Eigen::Index kBlock = 256;
    const Eigen::MatrixXd& Z_;
};

Eigen::VectorXd inverse_sqrt_degrees(const Eigen::VectorXd& degree) {
    Eigen::VectorXd out(degree.size());
    for (Eigen::Index i = 0; i < degree.size(); ++i) out(i) = degree(i) > 0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
    return out;
}

// Unit vector along D^{1/2} 1, the trivial eigenvector of L_sym.
Eigen::VectorXd trivial_eigenvector(const Eigen::VectorXd& degree) {
    Eigen::VectorXd u = degree.cwiseSqrt();
    return u / u.norm();
}

// Second eigenvector of L_sym via Lanczos on N = D^-1/2 W D^-1/2, deflated
// against the trivial eigenvector (full reorthogonalisation).
std::pair<Eigen::VectorXd, double> lanczos_second(const SimilarityOperator& W, const Eigen::VectorXd& dinv,
                                                  const Eigen::VectorXd& trivial) {
    const Eigen::Index n = dinv.size();
    const Eigen::Index steps = std::min<Eigen::Index>(n - 1, 150);
    Eigen::MatrixXd Q(n, steps);
    Eigen::VectorXd alpha(steps), beta(steps);

    Eigen::VectorXd q(n);
    for (Eigen::Index i = 0; i < n; ++i) q(i) = 1.0 + static_cast<double>(i % 7) / 7.0 + static_cast<double>(i % 3) / 11.0;
    q -= trivial.dot(q) * trivial;
    q.normalize();

    Eigen::Index k = 0;
    for (; k < steps; ++k) {
        Q.col(k) = q;
        Eigen::VectorXd w = dinv.cwiseProduct(W.apply(dinv.cwiseProduct(q)));
        alpha(k) = q.dot(w);
        w -= trivial.dot(w) * trivial;
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j <= k; ++j) w -= Q.col(j).dot(w) * Q.col(j);
        }
        beta(k) = w.norm();
        if (beta(k) < 1e-12) {
            ++k;
            break;
        }
        q = w / beta(k);
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        T(i, i) = alpha(i);
        if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
    const Eigen::VectorXd y = tri.eigenvectors().col(k - 1);  // largest Ritz value of N
    Eigen::VectorXd v = Q.leftCols(k) * y;
    v.normalize();
    return {v, 1.0 - tri.eigenvalues()(k - 1)};
}

} // namespace

SpectralResult spectral_cluster(const DefectDataset& d, std::size_t dense_limit) {
    const std::size_t n = d.n_modules();
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "spectral clustering needs at least two modules");

    const Eigen::MatrixXd Z = zscore_apply(zscore_fit(d.values()), d.values());
    const Eigen::VectorXd row_sum = Z.rowwise().sum();

    SpectralResult result;
    const std::vector<double> effort = module_efforts(d);
    result.predictions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.predictions.push_back({d.module_ids()[i], row_sum(static_cast<Eigen::Index>(i)), Label::NonDefective, effort[i]});
    }

    Eigen::VectorXd v;
    if (n <= dense_limit) {
        Eigen::MatrixXd W = (Z * Z.transpose()).cwiseMax(0.0);
        W.diagonal().setZero();
        const Eigen::VectorXd degree = W.rowwise().sum();
        if (degree.maxCoeff() <= 0) {
            result.degenerate = true;
            return result;
        }
        const Eigen::VectorXd dinv = inverse_sqrt_degrees(degree);
        result.laplacian = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) -
                           dinv.asDiagonal() * W * dinv.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(result.laplacian);
        const Eigen::VectorXd trivial = trivial_eigenvector(degree);
        // within the span of the two smallest eigenvectors take the direction
        // orthogonal to the trivial one (matters when the graph is disconnected)
        Eigen::VectorXd w0 = solver.eigenvectors().col(0);
        Eigen::VectorXd w1 = solver.eigenvectors().col(1);
        w0 -= trivial.dot(w0) * trivial;
        w1 -= trivial.dot(w1) * trivial;
        v = w1.norm() >= w0.norm() ? w1 : w0;
        v.normalize();
        result.eigenvalue = v.dot(result.laplacian * v);
    } else {
        const SimilarityOperator W(Z);
        const Eigen::VectorXd degree = W.apply(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
        if (degree.maxCoeff() <= 0) {
            result.degenerate = true;
            return result;
        }
        std::tie(v, result.eigenvalue) = lanczos_second(W, inverse_sqrt_degrees(degree), trivial_eigenvector(degree));
    }
    result.eigenvector = v;

    double pos_sum = 0, neg_sum = 0;
    std::size_t pos_n = 0, neg_n = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        if (v(idx) > 0) {
            pos_sum += row_sum(idx);
            ++pos_n;
        } else {
            neg_sum += row_sum(idx);
            ++neg_n;
        }
    }
    if (pos_n == 0 || neg_n == 0) return result;  // one cluster: nothing singled out
    const double pos_mean = pos_sum / static_cast<double>(pos_n);
    const double neg_mean = neg_sum / static_cast<double>(neg_n);
    if (pos_mean == neg_mean) return result;
    const bool positive_defective = pos_mean > neg_mean;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = v(static_cast<Eigen::Index>(i)) > 0;
        if (positive == positive_defective) result.predictions[i].predicted = Label::Defective;
    }
    return result;
}

} // namespace hdpbench
