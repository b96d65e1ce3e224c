#include "laundergraph/graph.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace laundergraph {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), 0u);
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

template <typename T, typename Key>
Csr<T> bucket(std::size_t rows, const std::vector<std::pair<Key, T>>& entries) {
    Csr<T> csr;
    csr.offsets.assign(rows + 1, 0);
    for (const auto& [row, item] : entries) ++csr.offsets[static_cast<std::size_t>(row) + 1];
    for (std::size_t i = 0; i < rows; ++i) csr.offsets[i + 1] += csr.offsets[i];
    csr.items.resize(entries.size());
    std::vector<std::uint32_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
    for (const auto& [row, item] : entries) csr.items[cursor[row]++] = item;
    return csr;
}

}  // namespace

struct TransactionGraph::DiameterCache {
    std::mutex mutex;
    std::map<std::tuple<ComponentId, int, std::uint64_t>, bool> results;
};

TransactionGraph::TransactionGraph() : diameter_cache_(std::make_shared<DiameterCache>()) {}

TransactionGraph::TransactionGraph(std::vector<Party> parties,
                                   std::vector<TransactionEdge> transactions,
                                   std::vector<SupplementaryEdge> supplementary,
                                   EvidenceIndex evidence)
    : parties_(std::move(parties)),
      transactions_(std::move(transactions)),
      supplementary_(std::move(supplementary)),
      evidence_(std::move(evidence)),
      diameter_cache_(std::make_shared<DiameterCache>()) {
    const std::size_t n = parties_.size();
    index_.reserve(n);
    for (PartyIndex p = 0; p < n; ++p) {
        if (!index_.emplace(parties_[p].id, p).second) {
            throw std::invalid_argument("duplicate party id '" + parties_[p].id + "'");
        }
    }

    std::vector<std::pair<PartyIndex, EdgeIndex>> out_entries;
    std::vector<std::pair<PartyIndex, EdgeIndex>> in_entries;
    std::vector<std::pair<PartyIndex, PartyIndex>> pairs;
    out_entries.reserve(transactions_.size());
    in_entries.reserve(transactions_.size());
    pairs.reserve(transactions_.size() * 2);
    for (EdgeIndex e = 0; e < transactions_.size(); ++e) {
        const auto& t = transactions_[e];
        if (t.src >= n || t.dst >= n) {
            throw std::invalid_argument("transaction edge endpoint out of range (report " +
                                        t.report_id + ")");
        }
        out_entries.emplace_back(t.src, e);
        in_entries.emplace_back(t.dst, e);
        if (t.src != t.dst) {
            pairs.emplace_back(t.src, t.dst);
            pairs.emplace_back(t.dst, t.src);
        }
    }
    out_ = bucket(n, out_entries);
    in_ = bucket(n, in_entries);

    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    neighbours_ = bucket(n, pairs);

    std::vector<std::pair<PartyIndex, SupplementaryNeighbour>> supp_entries;
    supp_entries.reserve(supplementary_.size() * 2);
    for (std::uint32_t i = 0; i < supplementary_.size(); ++i) {
        const auto& s = supplementary_[i];
        if (s.a >= n || s.b >= n || s.a == s.b) {
            throw std::invalid_argument("malformed supplementary edge");
        }
        supp_entries.push_back({s.a, {s.b, s.weight, i}});
        supp_entries.push_back({s.b, {s.a, s.weight, i}});
    }
    std::sort(supp_entries.begin(), supp_entries.end(), [](const auto& x, const auto& y) {
        return std::tie(x.first, x.second.party) < std::tie(y.first, y.second.party);
    });
    supplementary_adj_ = bucket(n, supp_entries);

    components_ = connected_components(*this);
}

std::size_t TransactionGraph::checked(PartyIndex p) const {
    if (p >= parties_.size()) {
        throw std::out_of_range("unknown party index " + std::to_string(p));
    }
    return p;
}

std::optional<PartyIndex> TransactionGraph::find(std::string_view id) const {
    if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
    return std::nullopt;
}

PartyIndex TransactionGraph::index_of(std::string_view id) const {
    if (auto p = find(id)) return *p;
    throw std::out_of_range("unknown party '" + std::string(id) + "'");
}

ComponentMap connected_components(const TransactionGraph& graph) {
    const std::size_t n = graph.party_count();
    DisjointSets sets(n);
    for (const auto& t : graph.transactions()) sets.unite(t.src, t.dst);
    for (const auto& s : graph.supplementary_edges()) sets.unite(s.a, s.b);

    ComponentMap map;
    map.component_of.assign(n, 0);
    std::vector<std::int64_t> id_of_root(n, -1);
    for (PartyIndex p = 0; p < n; ++p) {
        const auto root = sets.find(p);
        if (id_of_root[root] < 0) {
            id_of_root[root] = static_cast<std::int64_t>(map.blocks.size());
            map.blocks.emplace_back();
        }
        const auto c = static_cast<ComponentId>(id_of_root[root]);
        map.component_of[p] = c;
        map.blocks[c].push_back(p);
    }
    return map;
}

bool TransactionGraph::component_diameter_at_most(ComponentId c, int max_steps,
                                                  double min_weight) const {
    const auto key = std::make_tuple(c, max_steps, std::bit_cast<std::uint64_t>(min_weight));
    {
        std::lock_guard lock(diameter_cache_->mutex);
        if (auto it = diameter_cache_->results.find(key); it != diameter_cache_->results.end()) {
            return it->second;
        }
    }

    const auto& block = components_.blocks.at(c);
    const std::size_t m = block.size();
    auto local = [&](PartyIndex p) {
        return static_cast<std::size_t>(std::lower_bound(block.begin(), block.end(), p) -
                                        block.begin());
    };
    std::vector<int> dist(m);
    std::vector<std::size_t> queue(m);
    // Eccentricity of block[source], or -1 if the filtered block is disconnected.
    auto eccentricity = [&](std::size_t source, int limit) {
        std::fill(dist.begin(), dist.end(), -1);
        std::size_t head = 0, tail = 0, reached = 1;
        dist[source] = 0;
        queue[tail++] = source;
        int ecc = 0;
        while (head < tail) {
            const std::size_t u = queue[head++];
            if (dist[u] > limit) return dist[u];
            auto visit = [&](PartyIndex v) {
                const std::size_t lv = local(v);
                if (dist[lv] < 0) {
                    dist[lv] = dist[u] + 1;
                    ecc = std::max(ecc, dist[lv]);
                    queue[tail++] = lv;
                    ++reached;
                }
            };
            for (PartyIndex v : transaction_neighbours(block[u])) visit(v);
            for (const auto& s : supplementary_neighbours(block[u])) {
                if (s.weight >= min_weight) visit(s.party);
            }
        }
        return reached == m ? ecc : -1;
    };

    bool result = true;
    if (m > 1) {
        const int first = eccentricity(0, m);
        if (first < 0 || first > max_steps) {
            result = false;
        } else if (2 * first > max_steps) {
            for (std::size_t s = 1; s < m && result; ++s) {
                const int ecc = eccentricity(s, max_steps);
                result = ecc >= 0 && ecc <= max_steps;
            }
        }
    }

    std::lock_guard lock(diameter_cache_->mutex);
    diameter_cache_->results.emplace(key, result);
    return result;
}

GraphSummary TransactionGraph::summary() const {
    GraphSummary s;
    s.parties = parties_.size();
    s.transaction_edges = transactions_.size();
    s.supplementary_edges = supplementary_.size();
    s.components = components_.blocks.size();
    s.evidence_keys = evidence_.size();
    for (const auto& block : components_.blocks) {
        s.largest_component = std::max(s.largest_component, block.size());
    }
    for (const auto& t : transactions_) {
        s.total_amount += t.amount;
        if (t.is_self_loop()) ++s.self_loops;
    }
    for (const auto& e : supplementary_) s.total_supplementary_weight += e.weight;
    return s;
}

GraphBuilder::GraphBuilder(const TransactionGraph& graph)
    : parties_(graph.parties().begin(), graph.parties().end()),
      transactions_(graph.transactions().begin(), graph.transactions().end()),
      evidence_(graph.evidence()),
      rebuild_all_(false) {
    for (PartyIndex p = 0; p < parties_.size(); ++p) index_.emplace(parties_[p].id, p);
    for (const auto& s : graph.supplementary_edges()) supplementary_.emplace(std::pair{s.a, s.b}, s);
}

std::optional<PartyIndex> GraphBuilder::find(std::string_view id) const {
    if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
    return std::nullopt;
}

PartyIndex GraphBuilder::add_party(const PartyRecord& record) {
    if (record.id.empty()) throw std::invalid_argument("party id must not be empty");
    if (record.age && (*record.age < 0 || *record.age > kMaxAge)) {
        throw std::invalid_argument("party '" + record.id + "' has age outside [0, 130]");
    }
    const auto p = static_cast<PartyIndex>(parties_.size());
    if (!index_.emplace(record.id, p).second) {
        throw std::invalid_argument("duplicate party id '" + record.id + "'");
    }
    parties_.push_back(Party{record.id, record.country, record.age, record.party_kind,
                             record.tagged_suspicious});
    return p;
}

std::vector<EdgeIndex> GraphBuilder::add_transaction(const ReportRecord& report) {
    if (report.senders.empty() || report.receivers.empty()) {
        throw std::invalid_argument("report " + report.report_id +
                                    " needs at least one sender and one receiver");
    }
    if (!(report.amount >= 0.0)) {
        throw std::invalid_argument("report " + report.report_id + " has a negative amount");
    }
    auto resolve = [&](const std::string& id) {
        auto p = find(id);
        if (!p) {
            throw std::invalid_argument("report " + report.report_id +
                                        " references unknown party '" + id + "'");
        }
        return *p;
    };
    std::vector<PartyIndex> senders, receivers;
    for (const auto& s : report.senders) senders.push_back(resolve(s));
    for (const auto& r : report.receivers) receivers.push_back(resolve(r));
    std::vector<std::pair<PartyIndex, EvidenceKey>> associations;
    for (const auto& a : report.evidence_associations) associations.emplace_back(resolve(a.party), a.key);

    std::vector<EdgeIndex> added;
    added.reserve(senders.size() * receivers.size());
    for (PartyIndex s : senders) {
        for (PartyIndex r : receivers) {
            added.push_back(static_cast<EdgeIndex>(transactions_.size()));
            transactions_.push_back(TransactionEdge{s, r, report.amount, report.currency,
                                                    report.timestamp, report.channel,
                                                    report.report_id});
        }
    }
    for (EvidenceId e : evidence_.record_transaction(associations)) dirty_.insert(e);
    return added;
}

void GraphBuilder::refresh_supplementary() {
    if (rebuild_all_) {
        supplementary_.clear();
        for (const auto& s : build_supplementary_edges(evidence_)) {
            supplementary_.emplace(std::pair{s.a, s.b}, s);
        }
        rebuild_all_ = false;
        dirty_.clear();
        return;
    }
    std::vector<EvidenceId> dirty(dirty_.begin(), dirty_.end());
    std::sort(dirty.begin(), dirty.end());
    for (EvidenceId e : dirty) {
        const auto holders = evidence_.parties_of(e);
        for (std::size_t i = 0; i < holders.size(); ++i) {
            for (std::size_t j = i + 1; j < holders.size(); ++j) {
                const PartyIndex a = std::min(holders[i].party, holders[j].party);
                const PartyIndex b = std::max(holders[i].party, holders[j].party);
                const auto link = pair_supplementary_link(a, b, evidence_);
                supplementary_[{a, b}] = SupplementaryEdge{a, b, link.weight, *link.evidence};
            }
        }
    }
    dirty_.clear();
}

TransactionGraph GraphBuilder::freeze() {
    refresh_supplementary();
    std::vector<SupplementaryEdge> supplementary;
    supplementary.reserve(supplementary_.size());
    for (const auto& [pair, edge] : supplementary_) supplementary.push_back(edge);
    return TransactionGraph(parties_, transactions_, std::move(supplementary), evidence_);
}

}  // namespace laundergraph
