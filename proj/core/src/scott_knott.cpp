#include "hdpbench/stats.hpp"

#include "hdpbench/error.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <numeric>

namespace hdpbench {

namespace {

struct Treatment {
    std::string name;
    double mean = 0;
};

struct Context {
    double nu = 0;            // pooled within-treatment degrees of freedom
    double mean_var = 0;      // MSE / harmonic-mean sample size
    double alpha = kScottKnottAlpha;
};

void partition(const std::vector<Treatment>& t, std::size_t lo, std::size_t hi, const Context& ctx,
               std::vector<SkGroup>& out) {
    const std::size_t k = hi - lo;
    auto emit = [&] {
        SkGroup g;
        for (std::size_t i = lo; i < hi; ++i) g.methods.push_back(t[i].name);
        out.push_back(std::move(g));
    };
    if (k < 2) {
        emit();
        return;
    }

    double total = 0;
    for (std::size_t i = lo; i < hi; ++i) total += t[i].mean;
    const double grand = total / static_cast<double>(k);

    double b0 = -1;
    std::size_t cut = lo + 1;
    double left = 0;
    for (std::size_t c = lo + 1; c < hi; ++c) {
        left += t[c - 1].mean;
        const double k1 = static_cast<double>(c - lo);
        const double k2 = static_cast<double>(hi - c);
        const double right = total - left;
        const double b = left * left / k1 + right * right / k2 - total * total / static_cast<double>(k);
        if (b > b0) {
            b0 = b;
            cut = c;
        }
    }
    b0 = std::max(b0, 0.0);

    double ss = 0;
    for (std::size_t i = lo; i < hi; ++i) ss += (t[i].mean - grand) * (t[i].mean - grand);
    const double sigma2 = (ss + ctx.nu * ctx.mean_var) / (static_cast<double>(k) + ctx.nu);

    bool split = false;
    if (sigma2 <= 0) {
        split = b0 > 0;
    } else {
        const double pi = boost::math::constants::pi<double>();
        const double lambda = pi / (2.0 * (pi - 2.0)) * b0 / sigma2;
        const boost::math::chi_squared_distribution<double> chi2(static_cast<double>(k) / (pi - 2.0));
        split = lambda > boost::math::quantile(chi2, 1.0 - ctx.alpha);
    }
    if (!split) {
        emit();
        return;
    }
    partition(t, lo, cut, ctx, out);
    partition(t, cut, hi, ctx, out);
}

} // namespace

std::size_t SkRanking::rank_of(std::string_view method) const {
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (const auto& m : groups[g].methods) {
            if (m == method) return g + 1;
        }
    }
    throw Error(ErrorCode::UnknownMethod, "scott_knott: no method named '" + std::string(method) + "'");
}

SkRanking scott_knott(const std::map<std::string, std::vector<double>>& samples, double alpha) {
    if (samples.empty()) throw Error(ErrorCode::InsufficientMethods, "scott_knott: no treatments");
    if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidArgument, "scott_knott: alpha must lie in (0, 1)");

    SkRanking ranking;
    std::vector<Treatment> treatments;
    double sse = 0, nu = 0, inv_n = 0;
    for (const auto& [name, values] : samples) {
        if (values.empty()) throw Error(ErrorCode::InvalidArgument, "scott_knott: treatment '" + name + "' is empty");
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        for (double v : values) sse += (v - mean) * (v - mean);
        nu += static_cast<double>(values.size() - 1);
        inv_n += 1.0 / static_cast<double>(values.size());
        treatments.push_back({name, mean});
        ranking.means[name] = mean;
    }
    std::stable_sort(treatments.begin(), treatments.end(),
                     [](const Treatment& a, const Treatment& b) { return a.mean > b.mean; });

    Context ctx;
    ctx.alpha = alpha;
    ctx.nu = nu;
    if (nu > 0) {
        const double harmonic_n = static_cast<double>(treatments.size()) / inv_n;
        ctx.mean_var = (sse / nu) / harmonic_n;
    }
    partition(treatments, 0, treatments.size(), ctx, ranking.groups);
    return ranking;
}

} // namespace hdpbench
