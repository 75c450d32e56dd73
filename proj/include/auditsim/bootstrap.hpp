#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "auditsim/common.hpp"

namespace auditsim {

inline double sample_mean(const std::vector<double>& values)
{
    if (values.empty())
        throw std::invalid_argument("sample_mean: empty sample");
    double sum = 0;
    for (double v : values)
        sum += v;
    return sum / static_cast<double>(values.size());
}

/// Unbiased sample standard deviation.
inline double sample_stddev(const std::vector<double>& values)
{
    if (values.size() < 2)
        return 0.0;
    double mean = sample_mean(values);
    double acc = 0;
    for (double v : values)
        acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

/// Linear-interpolation quantile of a sorted sample (q in [0, 1]).
inline double sorted_quantile(const std::vector<double>& sorted, double q)
{
    if (sorted.empty())
        throw std::invalid_argument("sorted_quantile: empty sample");
    if (sorted.size() == 1)
        return sorted.front();
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

struct ConfidenceInterval {
    double low = 0;
    double high = 0;

    double width() const { return high - low; }
    bool contains(double x) const { return low <= x && x <= high; }
};

/// Percentile-method bootstrap interval for the mean. Deterministic under
/// the seed; the resample count trades precision for time.
inline ConfidenceInterval bootstrap_mean_ci(const std::vector<double>& values, double level,
                                            int resamples, std::uint64_t seed)
{
    if (values.empty())
        throw std::invalid_argument("bootstrap_mean_ci: empty sample");
    if (level <= 0.0 || level >= 1.0)
        throw std::invalid_argument("bootstrap_mean_ci: level must be in (0, 1)");
    if (resamples < 1)
        throw std::invalid_argument("bootstrap_mean_ci: need at least one resample");

    RandomStream rng(HashChain(seed).feed("bootstrap").feed(values.size()).digest());
    const std::size_t n = values.size();
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(resamples));
    for (int b = 0; b < resamples; ++b) {
        double sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            sum += values[rng.next_u64() % n];
        means.push_back(sum / static_cast<double>(n));
    }
    std::sort(means.begin(), means.end());
    double alpha = (1.0 - level) / 2.0;
    return {sorted_quantile(means, alpha), sorted_quantile(means, 1.0 - alpha)};
}

} // namespace auditsim
