#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "laundergraph/graph.hpp"

namespace laundergraph {

struct LabelingConfig {
    std::size_t negative_sample_size = 20000;
    std::uint64_t seed = 1;
    double w_min = 0.01;  // supplementary edges lighter than this do not make a neighbour
};

struct LabeledParties {
    std::vector<PartyIndex> positives;  // sorted
    std::vector<PartyIndex> negatives;  // sorted
};

/// Positives are the tagged parties plus every transaction or (sufficiently
/// heavy) supplementary neighbour. Negatives are a uniform sample without
/// replacement from the remaining parties. Throws laundergraph::Error when
/// fewer non-positive parties exist than requested, std::out_of_range for an
/// unknown tagged party.
LabeledParties assign_labels(const TransactionGraph& graph, std::span<const PartyIndex> tagged,
                             const LabelingConfig& config);

}  // namespace laundergraph
