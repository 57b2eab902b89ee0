#include "hdpbench/hdp.hpp"

#include <limits>
#include <vector>

namespace hdpbench {

namespace {

// Kuhn-Munkres with potentials, O(n^2 m). cost is n x m with n <= m; returns
// the column assigned to each row.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

} // namespace

std::vector<int> max_weight_matching(const Eigen::MatrixXd& weights, double cutoff) {
    const Eigen::Index rows = weights.rows();
    const Eigen::Index cols = weights.cols();
    std::vector<int> result(rows, -1);
    if (rows == 0 || cols == 0) return result;

    // absent edges get weight 0; with all kept weights positive the optimal
    // assignment restricted to kept edges is a maximum-weight matching
    const Eigen::MatrixXd kept = (weights.array() > cutoff).select(weights.array(), 0.0).matrix();

    if (rows <= cols) {
        result = min_cost_assignment(-kept);
    } else {
        const Eigen::MatrixXd transposed = -kept.transpose();
        const std::vector<int> a = min_cost_assignment(transposed);
        for (Eigen::Index c = 0; c < cols; ++c) result[a[c]] = static_cast<int>(c);
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
        int& c = result[r];
        if (c >= 0 && !(weights(r, c) > cutoff)) c = -1;
    }
    return result;
}

} // namespace hdpbench
