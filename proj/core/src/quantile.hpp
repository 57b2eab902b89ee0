#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace hdpbench::detail {

/// Linear-interpolation quantile (Hyndman-Fan type 7) of an ascending sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.size() == 1) return sorted.front();
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::span<const double> values, double q) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, q);
}

} // namespace hdpbench::detail
