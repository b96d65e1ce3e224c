#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laundergraph/graph.hpp"

namespace laundergraph {

/// Constraints for near-k-step extraction. Entry i of n_max / w_min applies
/// to expansion round i + 1.
struct ExtractionParams {
    int k = 3;
    std::vector<std::size_t> n_max{40, 40, 40};
    std::vector<double> w_min{0.01, 0.01, 0.01};
    bool component_shortcut = true;

    /// Broadcasts length-1 vectors to length k. Throws std::invalid_argument
    /// when the result violates the invariants.
    static ExtractionParams make(int k, std::vector<std::size_t> n_max, std::vector<double> w_min,
                                 bool component_shortcut = true);

    void validate() const;
    double min_weight() const;

    bool operator==(const ExtractionParams&) const = default;
};

struct Community {
    PartyIndex seed = 0;
    std::vector<PartyIndex> members;                // sorted
    std::vector<EdgeIndex> transactions;            // induced, sorted
    std::vector<SupplementaryEdge> supplementary;   // induced and above threshold, sorted by (a, b)
    ExtractionParams params;
    ComponentId component = 0;
    bool shortcut = false;
    std::vector<PartyIndex> lineage;                // seeds merged into this community, sorted

    bool contains(PartyIndex p) const;
    bool operator==(const Community&) const = default;
};

/// Breadth-first expansion from `seed` for params.k rounds. In round i a
/// frontier party's transaction neighbours are added unless the party is a
/// gate (more than n_max[i] distinct transaction neighbours); supplementary
/// neighbours are added when the edge weight is at least w_min[i], gate or
/// not. Gates are kept as members. The round-i frontier is every party that
/// ends a legal walk of i - 1 steps, so widening any limit never loses a member. With component_shortcut, a component whose
/// diameter is at most k is returned whole.
///
/// Throws std::out_of_range for an unknown seed.
Community extract(const TransactionGraph& graph, PartyIndex seed, const ExtractionParams& params);

/// Rebuilds the induced edge sets for an arbitrary member set. Supplementary
/// edges below params.min_weight() are dropped.
Community induced_community(const TransactionGraph& graph, PartyIndex seed,
                            std::vector<PartyIndex> members, const ExtractionParams& params);

/// Collapses communities with identical member sets, keeping the lowest seed
/// and the union of lineages; output sorted by seed, then members.
std::vector<Community> deduplicate(std::vector<Community> communities);

double jaccard(std::span<const PartyIndex> a, std::span<const PartyIndex> b);

/// Unions pairs with Jaccard >= theta until none remain. Pairs are scanned in
/// (seed, seed) order; the union keeps the smaller seed and its params.
std::vector<Community> merge_overlapping(const TransactionGraph& graph,
                                         std::vector<Community> communities, double theta);

/// Longest shortest path over the community's induced edges, direction
/// ignored. Throws laundergraph::Error when the community is empty or
/// disconnected.
int diameter(const TransactionGraph& graph, const Community& community);

struct SeedError {
    PartyIndex seed;
    std::string message;
};

struct BatchResult {
    std::vector<Community> communities;  // deduplicated, sorted by seed
    std::vector<SeedError> errors;
};

/// extract over every seed on `workers` threads followed by deduplicate.
/// The result does not depend on the worker count.
BatchResult extract_batch(const TransactionGraph& graph, std::span<const PartyIndex> seeds,
                          const ExtractionParams& params, unsigned workers = 1);

/// One JSON object per community for analyst handoff and fixtures.
std::string to_json_line(const TransactionGraph& graph, const Community& community,
                         std::optional<int> label = std::nullopt);

struct CommunityRecord {
    Community community;
    std::optional<int> label;
};

/// Inverse of to_json_line against the same graph. Throws FormatError.
CommunityRecord community_from_json(const TransactionGraph& graph, std::string_view line);

}  // namespace laundergraph
