#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "laundergraph/evidence.hpp"
#include "laundergraph/records.hpp"
#include "laundergraph/types.hpp"

namespace laundergraph {

using ComponentId = std::uint32_t;

// Partition of parties into connected components over transaction and
// supplementary edges, direction ignored. Blocks are ordered by their
// smallest member and each block is sorted.
struct ComponentMap {
    std::vector<ComponentId> component_of;
    std::vector<std::vector<PartyIndex>> blocks;
};

struct SupplementaryNeighbour {
    PartyIndex party;
    double weight;
    std::uint32_t edge;  // index into supplementary_edges()
};

struct GraphSummary {
    std::size_t parties = 0;
    std::size_t transaction_edges = 0;
    std::size_t supplementary_edges = 0;
    std::size_t self_loops = 0;
    std::size_t components = 0;
    std::size_t largest_component = 0;
    std::size_t evidence_keys = 0;
    double total_amount = 0.0;
    double total_supplementary_weight = 0.0;

    bool operator==(const GraphSummary&) const = default;
};

template <typename T>
struct Csr {
    std::vector<std::uint32_t> offsets{0};
    std::vector<T> items;

    std::span<const T> row(std::size_t i) const {
        return {items.data() + offsets[i], items.data() + offsets[i + 1]};
    }
};

/// Immutable typed multigraph. All queries are side-effect free and safe to
/// call from concurrent readers.
class TransactionGraph {
public:
    TransactionGraph();
    /// Takes fully formed tables; validates endpoints and derives adjacency.
    TransactionGraph(std::vector<Party> parties, std::vector<TransactionEdge> transactions,
                     std::vector<SupplementaryEdge> supplementary, EvidenceIndex evidence);

    std::size_t party_count() const noexcept { return parties_.size(); }
    const Party& party(PartyIndex p) const { return parties_.at(p); }
    std::span<const Party> parties() const noexcept { return parties_; }
    std::optional<PartyIndex> find(std::string_view id) const;
    /// Throws std::out_of_range for unknown ids.
    PartyIndex index_of(std::string_view id) const;

    std::span<const TransactionEdge> transactions() const noexcept { return transactions_; }
    const TransactionEdge& transaction(EdgeIndex e) const { return transactions_.at(e); }
    std::span<const SupplementaryEdge> supplementary_edges() const noexcept { return supplementary_; }
    const EvidenceIndex& evidence() const noexcept { return evidence_; }

    std::span<const EdgeIndex> out_edges(PartyIndex p) const { return out_.row(checked(p)); }
    std::span<const EdgeIndex> in_edges(PartyIndex p) const { return in_.row(checked(p)); }
    /// Distinct transaction counterparties in either direction, sorted, self excluded.
    std::span<const PartyIndex> transaction_neighbours(PartyIndex p) const {
        return neighbours_.row(checked(p));
    }
    std::size_t transaction_neighbour_count(PartyIndex p) const {
        return transaction_neighbours(p).size();
    }
    std::span<const SupplementaryNeighbour> supplementary_neighbours(PartyIndex p) const {
        return supplementary_adj_.row(checked(p));
    }

    const ComponentMap& components() const noexcept { return components_; }
    ComponentId component_of(PartyIndex p) const { return components_.component_of.at(p); }

    /// True when the component stays connected using transaction edges plus
    /// supplementary edges of weight >= min_weight, and its diameter over
    /// those edges is at most max_steps. Memoized per (component, steps, weight).
    bool component_diameter_at_most(ComponentId c, int max_steps, double min_weight) const;

    GraphSummary summary() const;

private:
    std::size_t checked(PartyIndex p) const;

    std::vector<Party> parties_;
    std::unordered_map<std::string, PartyIndex> index_;
    std::vector<TransactionEdge> transactions_;
    std::vector<SupplementaryEdge> supplementary_;
    EvidenceIndex evidence_;

    Csr<EdgeIndex> out_;
    Csr<EdgeIndex> in_;
    Csr<PartyIndex> neighbours_;
    Csr<SupplementaryNeighbour> supplementary_adj_;
    ComponentMap components_;

    struct DiameterCache;
    std::shared_ptr<DiameterCache> diameter_cache_;
};

/// Partition over transaction + supplementary edges, direction ignored.
ComponentMap connected_components(const TransactionGraph& graph);

inline std::size_t transaction_neighbour_count(const TransactionGraph& graph, PartyIndex p) {
    return graph.transaction_neighbour_count(p);
}

/// Single-writer, append-only accumulator that produces frozen graphs.
/// Supplementary weights are refreshed only for evidence touched since the
/// previous freeze.
class GraphBuilder {
public:
    GraphBuilder() = default;
    /// Resumes appending on top of an existing frozen graph.
    explicit GraphBuilder(const TransactionGraph& graph);

    /// Throws std::invalid_argument on duplicate id or out-of-range age.
    PartyIndex add_party(const PartyRecord& record);
    bool has_party(std::string_view id) const { return index_.contains(std::string(id)); }
    std::optional<PartyIndex> find(std::string_view id) const;

    /// Appends one edge per (sender, receiver) pair and records the report's
    /// evidence. Rejects the whole report (std::invalid_argument, no state
    /// change) on unknown parties, negative amount or empty sides.
    std::vector<EdgeIndex> add_transaction(const ReportRecord& report);

    std::size_t party_count() const noexcept { return parties_.size(); }
    std::size_t transaction_count() const noexcept { return transactions_.size(); }
    const EvidenceIndex& evidence() const noexcept { return evidence_; }

    TransactionGraph freeze();

private:
    void refresh_supplementary();

    std::vector<Party> parties_;
    std::unordered_map<std::string, PartyIndex> index_;
    std::vector<TransactionEdge> transactions_;
    EvidenceIndex evidence_;
    std::map<std::pair<PartyIndex, PartyIndex>, SupplementaryEdge> supplementary_;
    std::unordered_set<EvidenceId> dirty_;
    bool rebuild_all_ = true;
};

}  // namespace laundergraph
