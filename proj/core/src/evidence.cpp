#include "laundergraph/evidence.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace laundergraph {

double evidence_weight(std::uint64_t n_p, std::uint64_t n_q, std::uint64_t d_e) {
    if (d_e == 0) {
        throw std::invalid_argument("evidence_weight: evidence has no transactions (d_e = 0)");
    }
    if (n_p > d_e || n_q > d_e) {
        throw std::invalid_argument("evidence_weight: association count exceeds d_e (n_p=" +
                                    std::to_string(n_p) + ", n_q=" + std::to_string(n_q) +
                                    ", d_e=" + std::to_string(d_e) + ")");
    }
    const double first = static_cast<double>(n_p) / static_cast<double>(d_e);
    const double second =
        n_p == d_e ? 1.0 : static_cast<double>(n_q) / static_cast<double>(d_e - n_p);
    return std::clamp(first * second, 0.0, 1.0);
}

EvidenceId EvidenceIndex::intern(const EvidenceKey& key) {
    if (auto it = lookup_.find(key); it != lookup_.end()) return it->second;
    return add_key(key, 0);
}

std::optional<EvidenceId> EvidenceIndex::find(const EvidenceKey& key) const {
    if (auto it = lookup_.find(key); it != lookup_.end()) return it->second;
    return std::nullopt;
}

EvidenceId EvidenceIndex::add_key(const EvidenceKey& key, std::uint64_t transaction_count) {
    if (lookup_.contains(key)) {
        throw std::invalid_argument("duplicate evidence key '" + key.value + "'");
    }
    const auto id = static_cast<EvidenceId>(keys_.size());
    keys_.push_back(key);
    lookup_.emplace(key, id);
    totals_.push_back(transaction_count);
    parties_.emplace_back();
    return id;
}

void EvidenceIndex::bump(PartyIndex party, EvidenceId id, std::uint64_t by) {
    auto& holders = parties_[id];
    auto it = std::find_if(holders.begin(), holders.end(),
                           [&](const Association& a) { return a.party == party; });
    if (it == holders.end()) {
        holders.push_back({party, by});
    } else {
        it->count += by;
    }
    if (by_party_.size() <= party) by_party_.resize(static_cast<std::size_t>(party) + 1);
    auto& held = by_party_[party];
    auto jt = std::find_if(held.begin(), held.end(),
                           [&](const PartyEvidence& e) { return e.evidence == id; });
    if (jt == held.end()) {
        held.push_back({id, by});
    } else {
        jt->count += by;
    }
}

void EvidenceIndex::add_association(PartyIndex party, EvidenceId evidence, std::uint64_t count) {
    if (evidence >= keys_.size()) throw std::out_of_range("unknown evidence id");
    bump(party, evidence, count);
    if (association_count(party, evidence) > totals_[evidence]) {
        throw std::invalid_argument("association count exceeds evidence transaction count");
    }
}

std::vector<EvidenceId> EvidenceIndex::record_transaction(
    std::span<const std::pair<PartyIndex, EvidenceKey>> associations) {
    std::vector<EvidenceId> touched;
    std::vector<std::pair<PartyIndex, EvidenceId>> seen;
    for (const auto& [party, key] : associations) {
        const EvidenceId id = intern(key);
        if (std::find(touched.begin(), touched.end(), id) == touched.end()) {
            touched.push_back(id);
            ++totals_[id];
        }
        const std::pair<PartyIndex, EvidenceId> pair{party, id};
        if (std::find(seen.begin(), seen.end(), pair) == seen.end()) {
            seen.push_back(pair);
            bump(party, id, 1);
        }
    }
    return touched;
}

std::uint64_t EvidenceIndex::association_count(PartyIndex party, EvidenceId id) const {
    for (const auto& e : evidence_of(party)) {
        if (e.evidence == id) return e.count;
    }
    return 0;
}

std::span<const EvidenceIndex::PartyEvidence> EvidenceIndex::evidence_of(PartyIndex party) const {
    if (party >= by_party_.size()) return {};
    return by_party_[party];
}

std::size_t EvidenceIndex::association_total() const noexcept {
    std::size_t total = 0;
    for (const auto& holders : parties_) total += holders.size();
    return total;
}

bool EvidenceIndex::operator==(const EvidenceIndex& other) const {
    if (keys_ != other.keys_ || totals_ != other.totals_) return false;
    for (std::size_t id = 0; id < parties_.size(); ++id) {
        const auto& lhs = parties_[id];
        const auto& rhs = other.parties_[id];
        if (lhs.size() != rhs.size()) return false;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            if (lhs[i].party != rhs[i].party || lhs[i].count != rhs[i].count) return false;
        }
    }
    return true;
}

SupplementaryLink pair_supplementary_link(PartyIndex p, PartyIndex q, const EvidenceIndex& index) {
    SupplementaryLink best;
    if (p == q) return best;
    for (const auto& held : index.evidence_of(p)) {
        const std::uint64_t n_q = index.association_count(q, held.evidence);
        if (n_q == 0) continue;
        const std::uint64_t d_e = index.transaction_count(held.evidence);
        const double w = std::max(evidence_weight(held.count, n_q, d_e),
                                  evidence_weight(n_q, held.count, d_e));
        if (!best.evidence || w > best.weight ||
            (w == best.weight && held.evidence < *best.evidence)) {
            best.weight = w;
            best.evidence = held.evidence;
        }
    }
    return best;
}

std::vector<SupplementaryEdge> build_supplementary_edges(const EvidenceIndex& index) {
    std::map<std::pair<PartyIndex, PartyIndex>, SupplementaryEdge> edges;
    for (EvidenceId e = 0; e < index.size(); ++e) {
        const auto holders = index.parties_of(e);
        const std::uint64_t d_e = index.transaction_count(e);
        for (std::size_t i = 0; i < holders.size(); ++i) {
            for (std::size_t j = i + 1; j < holders.size(); ++j) {
                const auto& p = holders[i];
                const auto& q = holders[j];
                const double w = std::max(evidence_weight(p.count, q.count, d_e),
                                          evidence_weight(q.count, p.count, d_e));
                const PartyIndex a = std::min(p.party, q.party);
                const PartyIndex b = std::max(p.party, q.party);
                auto [it, inserted] = edges.try_emplace({a, b}, SupplementaryEdge{a, b, w, e});
                // Keys are visited in id order, so strict > keeps the lowest id on ties.
                if (!inserted && w > it->second.weight) {
                    it->second.weight = w;
                    it->second.best_evidence = e;
                }
            }
        }
    }
    std::vector<SupplementaryEdge> out;
    out.reserve(edges.size());
    for (auto& [pair, edge] : edges) out.push_back(edge);
    return out;
}

}  // namespace laundergraph
