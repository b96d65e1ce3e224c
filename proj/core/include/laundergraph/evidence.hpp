#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "laundergraph/types.hpp"

namespace laundergraph {

/// Strength of the link between p and q through one piece of evidence:
///
///   (n_p / d_e) * (n_q / (d_e - n_p))
///
/// i.e. the probability of drawing p from the transactions that mention the
/// evidence, then q from what remains. When n_p == d_e the second factor is
/// taken as 1. The result is clamped to [0, 1].
///
/// Throws std::invalid_argument when d_e == 0 or a count exceeds d_e.
double evidence_weight(std::uint64_t n_p, std::uint64_t n_q, std::uint64_t d_e);

/// Per-evidence transaction counts d_e and per-(party, evidence) counts n(p,e).
class EvidenceIndex {
public:
    struct Association {
        PartyIndex party;
        std::uint64_t count;
    };
    struct PartyEvidence {
        EvidenceId evidence;
        std::uint64_t count;
    };

    EvidenceId intern(const EvidenceKey& key);
    std::optional<EvidenceId> find(const EvidenceKey& key) const;

    /// Accounts for one transaction. Every distinct key bumps d_e once and
    /// every distinct (party, key) pair bumps n(p,e) once. Returns the
    /// distinct evidence ids touched, in first-seen order.
    std::vector<EvidenceId> record_transaction(
        std::span<const std::pair<PartyIndex, EvidenceKey>> associations);

    /// Raw insertion used by snapshot load; counts are taken verbatim.
    EvidenceId add_key(const EvidenceKey& key, std::uint64_t transaction_count);
    void add_association(PartyIndex party, EvidenceId evidence, std::uint64_t count);

    std::size_t size() const noexcept { return keys_.size(); }
    const EvidenceKey& key(EvidenceId id) const { return keys_.at(id); }
    std::uint64_t transaction_count(EvidenceId id) const { return totals_.at(id); }
    std::uint64_t association_count(PartyIndex party, EvidenceId id) const;

    std::span<const Association> parties_of(EvidenceId id) const { return parties_.at(id); }
    std::span<const PartyEvidence> evidence_of(PartyIndex party) const;

    std::size_t association_total() const noexcept;

    bool operator==(const EvidenceIndex& other) const;

private:
    void bump(PartyIndex party, EvidenceId id, std::uint64_t by);

    std::vector<EvidenceKey> keys_;
    std::unordered_map<EvidenceKey, EvidenceId, EvidenceKeyHash> lookup_;
    std::vector<std::uint64_t> totals_;
    std::vector<std::vector<Association>> parties_;
    std::vector<std::vector<PartyEvidence>> by_party_;
};

struct SupplementaryLink {
    double weight = 0.0;
    std::optional<EvidenceId> evidence;  // empty when p and q share nothing
};

/// Maximum over shared evidence of the weight evaluated in both orderings.
SupplementaryLink pair_supplementary_link(PartyIndex p, PartyIndex q, const EvidenceIndex& index);

inline double pair_supplementary_weight(PartyIndex p, PartyIndex q, const EvidenceIndex& index) {
    return pair_supplementary_link(p, q, index).weight;
}

/// One edge per unordered pair of parties sharing any evidence, sorted by (a, b).
std::vector<SupplementaryEdge> build_supplementary_edges(const EvidenceIndex& index);

}  // namespace laundergraph
