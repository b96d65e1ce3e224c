#include "laundergraph/burst.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace laundergraph {

BinnedSeries bin_series(std::span<const std::int64_t> timestamps, std::span<const double> amounts,
                        std::int64_t bin_width) {
    if (bin_width <= 0) throw std::invalid_argument("bin_series: bin width must be positive");
    if (timestamps.size() != amounts.size()) {
        throw std::invalid_argument("bin_series: timestamps and amounts differ in length");
    }
    BinnedSeries series;
    series.bin_width = bin_width;
    if (timestamps.empty()) return series;
    const auto [lo, hi] = std::minmax_element(timestamps.begin(), timestamps.end());
    auto floor_div = [](std::int64_t a, std::int64_t b) {
        return a >= 0 ? a / b : -((-a + b - 1) / b);
    };
    series.origin = floor_div(*lo, bin_width) * bin_width;
    const auto bins = static_cast<std::size_t>((*hi - series.origin) / bin_width) + 1;
    series.counts.assign(bins, 0.0);
    series.amounts.assign(bins, 0.0);
    for (std::size_t i = 0; i < timestamps.size(); ++i) {
        const auto b = static_cast<std::size_t>((timestamps[i] - series.origin) / bin_width);
        series.counts[b] += 1.0;
        series.amounts[b] += amounts[i];
    }
    return series;
}

std::vector<std::vector<double>> haar_details(std::span<const double> values) {
    const std::size_t n = std::bit_ceil(std::max<std::size_t>(values.size(), 1));
    std::vector<double> approx(n, 0.0);
    std::copy(values.begin(), values.end(), approx.begin());
    std::vector<std::vector<double>> levels;
    const double scale = 1.0 / std::sqrt(2.0);
    for (std::size_t len = n; len >= 2; len /= 2) {
        std::vector<double> detail(len / 2);
        std::vector<double> coarser(len / 2);
        for (std::size_t i = 0; i < len / 2; ++i) {
            coarser[i] = (approx[2 * i] + approx[2 * i + 1]) * scale;
            detail[i] = (approx[2 * i] - approx[2 * i + 1]) * scale;
        }
        levels.push_back(std::move(detail));
        approx = std::move(coarser);
    }
    return levels;
}

std::vector<Burst> burst_detect(const BinnedSeries& series, double c) {
    const auto& counts = series.counts;
    if (counts.size() < 2) throw std::invalid_argument("burst_detect: need at least two bins");
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (total == 0.0) return {};

    const std::size_t padded = std::bit_ceil(counts.size());
    std::vector<double> x(padded, 0.0);
    std::copy(counts.begin(), counts.end(), x.begin());
    std::vector<double> prefix(padded + 1, 0.0);
    for (std::size_t i = 0; i < padded; ++i) prefix[i + 1] = prefix[i] + x[i];

    std::vector<bool> marked(counts.size(), false);
    const auto levels = haar_details(x);
    for (std::size_t j = 0; j < levels.size(); ++j) {
        const auto& detail = levels[j];
        const std::size_t m = detail.size();
        if (m < 2) continue;
        long double sum = 0.0L, sum_sq = 0.0L;
        for (double d : detail) {
            sum += std::fabs(d);
            sum_sq += static_cast<long double>(d) * d;
        }
        const std::size_t width = std::size_t{1} << (j + 1);
        for (std::size_t i = 0; i < m; ++i) {
            const long double mag = std::fabs(detail[i]);
            const long double others = static_cast<long double>(m - 1);
            const long double mean = (sum - mag) / others;
            const long double var = std::max(0.0L, (sum_sq - mag * mag) / others - mean * mean);
            if (mag <= mean + c * std::sqrt(var)) continue;
            // Padding bins are not observations, so the reference mean only
            // covers the real bins under the support.
            const std::size_t lo = i * width;
            const std::size_t hi = std::min(lo + width, counts.size());
            if (lo >= hi) continue;
            const double support_mean = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
            for (std::size_t b = lo; b < hi; ++b) {
                if (x[b] > support_mean) marked[b] = true;
            }
        }
    }

    const double mean_count = total / static_cast<double>(counts.size());
    std::vector<Burst> bursts;
    for (std::size_t b = 0; b < counts.size();) {
        if (!marked[b]) {
            ++b;
            continue;
        }
        Burst burst{b, b, 0.0};
        double peak = 0.0;
        while (b < counts.size() && marked[b]) {
            peak = std::max(peak, counts[b]);
            burst.end_bin = b++;
        }
        burst.intensity = peak / mean_count;
        bursts.push_back(burst);
    }
    return bursts;
}

}  // namespace laundergraph
