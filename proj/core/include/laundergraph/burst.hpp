#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace laundergraph {

struct BinnedSeries {
    std::int64_t bin_width = 86400;
    std::int64_t origin = 0;
    std::vector<double> counts;
    std::vector<double> amounts;
};

/// Bins events into contiguous fixed-width buckets starting at the bucket
/// that holds the earliest timestamp. Empty input yields an empty series.
BinnedSeries bin_series(std::span<const std::int64_t> timestamps, std::span<const double> amounts,
                        std::int64_t bin_width);

struct Burst {
    std::size_t start_bin = 0;  // inclusive
    std::size_t end_bin = 0;    // inclusive
    double intensity = 0.0;     // max count in the run / mean count of the series

    bool operator==(const Burst&) const = default;
};

/// Orthonormal Haar detail coefficients of `values` zero-padded to a power of
/// two. Level j (index j - 1) holds n / 2^j coefficients; coefficient i
/// covers bins [i * 2^j, (i + 1) * 2^j).
std::vector<std::vector<double>> haar_details(std::span<const double> values);

/// Flags coefficient i of a level when |d_i| exceeds mean + c * stddev of the
/// magnitudes of the other coefficients on that level (levels with a single
/// coefficient carry no reference and are skipped). Inside a flagged
/// coefficient's support the bins above the mean count of the support's
/// unpadded bins are marked.
/// Marked bins merge into maximal runs.
///
/// Throws std::invalid_argument for fewer than two bins.
std::vector<Burst> burst_detect(const BinnedSeries& series, double c);

}  // namespace laundergraph
