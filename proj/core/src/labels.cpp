#include "laundergraph/labels.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

#include "laundergraph/error.hpp"

namespace laundergraph {

LabeledParties assign_labels(const TransactionGraph& graph, std::span<const PartyIndex> tagged,
                             const LabelingConfig& config) {
    if (config.negative_sample_size == 0) throw std::invalid_argument("assign_labels: sample size must be >= 1");
    const std::size_t n = graph.party_count();
    std::vector<char> positive(n, 0);
    for (PartyIndex t : tagged) {
        if (t >= n) throw std::out_of_range("assign_labels: tagged party index out of range");
        positive[t] = 1;
        for (PartyIndex q : graph.transaction_neighbours(t)) positive[q] = 1;
        for (const auto& s : graph.supplementary_neighbours(t)) {
            if (s.weight >= config.w_min) positive[s.party] = 1;
        }
    }

    LabeledParties out;
    std::vector<PartyIndex> pool;
    for (PartyIndex p = 0; p < n; ++p) (positive[p] ? out.positives : pool).push_back(p);
    if (config.negative_sample_size > pool.size()) {
        throw Error("assign_labels: requested " + std::to_string(config.negative_sample_size) +
                    " negatives but only " + std::to_string(pool.size()) + " non-positive parties exist");
    }
    std::mt19937_64 rng(config.seed);
    out.negatives.reserve(config.negative_sample_size);
    std::sample(pool.begin(), pool.end(), std::back_inserter(out.negatives), config.negative_sample_size, rng);
    return out;
}

}  // namespace laundergraph
