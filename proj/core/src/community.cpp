#include "laundergraph/community.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "laundergraph/error.hpp"
#include "laundergraph/parallel.hpp"

namespace laundergraph {

using nlohmann::json;

ExtractionParams ExtractionParams::make(int k, std::vector<std::size_t> n_max,
                                        std::vector<double> w_min, bool component_shortcut) {
    ExtractionParams p;
    p.k = k;
    if (k >= 1 && n_max.size() == 1) n_max.assign(static_cast<std::size_t>(k), n_max.front());
    if (k >= 1 && w_min.size() == 1) w_min.assign(static_cast<std::size_t>(k), w_min.front());
    p.n_max = std::move(n_max);
    p.w_min = std::move(w_min);
    p.component_shortcut = component_shortcut;
    p.validate();
    return p;
}

void ExtractionParams::validate() const {
    if (k < 1) throw std::invalid_argument("extraction: k must be at least 1");
    const auto len = static_cast<std::size_t>(k);
    if (n_max.size() != len || w_min.size() != len) {
        throw std::invalid_argument("extraction: n_max and w_min must have length k");
    }
    for (auto n : n_max) {
        if (n < 1) throw std::invalid_argument("extraction: n_max entries must be >= 1");
    }
    for (double w : w_min) {
        if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("extraction: w_min entries must lie in [0, 1]");
    }
}

double ExtractionParams::min_weight() const {
    return *std::min_element(w_min.begin(), w_min.end());
}

bool Community::contains(PartyIndex p) const {
    return std::binary_search(members.begin(), members.end(), p);
}

namespace {

bool edge_less(const SupplementaryEdge& x, const SupplementaryEdge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
}

std::vector<EdgeIndex> induced_transactions(const TransactionGraph& graph,
                                            std::span<const PartyIndex> sorted_members) {
    std::vector<EdgeIndex> edges;
    for (PartyIndex m : sorted_members) {
        for (EdgeIndex e : graph.out_edges(m)) {
            if (std::binary_search(sorted_members.begin(), sorted_members.end(),
                                   graph.transaction(e).dst)) {
                edges.push_back(e);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace

Community induced_community(const TransactionGraph& graph, PartyIndex seed,
                            std::vector<PartyIndex> members, const ExtractionParams& params) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Community c;
    c.seed = seed;
    c.params = params;
    c.component = graph.component_of(seed);
    c.lineage = {seed};
    c.transactions = induced_transactions(graph, members);
    const double threshold = params.min_weight();
    for (PartyIndex m : members) {
        for (const auto& s : graph.supplementary_neighbours(m)) {
            if (s.party > m && s.weight >= threshold &&
                std::binary_search(members.begin(), members.end(), s.party)) {
                c.supplementary.push_back(graph.supplementary_edges()[s.edge]);
            }
        }
    }
    std::sort(c.supplementary.begin(), c.supplementary.end(), edge_less);
    c.members = std::move(members);
    return c;
}

Community extract(const TransactionGraph& graph, PartyIndex seed, const ExtractionParams& params) {
    params.validate();
    if (seed >= graph.party_count()) {
        throw std::out_of_range("extract: unknown seed index " + std::to_string(seed));
    }
    const ComponentId component = graph.component_of(seed);
    if (params.component_shortcut &&
        graph.component_diameter_at_most(component, params.k, params.min_weight())) {
        const auto& block = graph.components().blocks[component];
        Community c = induced_community(graph, seed, block, params);
        c.shortcut = true;
        return c;
    }

    // The frontier of round i holds every party ending a legal walk of i - 1
    // steps, so a party reached early is expanded again when a later round has
    // looser limits. With uniform limits a second expansion finds nothing new
    // and only first arrivals are expanded.
    const bool uniform =
        std::adjacent_find(params.n_max.begin(), params.n_max.end(), std::not_equal_to<>()) ==
            params.n_max.end() &&
        std::adjacent_find(params.w_min.begin(), params.w_min.end(), std::not_equal_to<>()) ==
            params.w_min.end();
    std::unordered_map<PartyIndex, int> round_reached{{seed, 0}};
    std::unordered_map<PartyIndex, int> last_layer{{seed, 0}};
    std::vector<PartyIndex> frontier{seed};
    std::vector<PartyIndex> next;
    for (int round = 1; round <= params.k && !frontier.empty(); ++round) {
        const std::size_t gate_above = params.n_max[round - 1];
        const double weight_floor = params.w_min[round - 1];
        next.clear();
        auto reach = [&](PartyIndex v) {
            const bool first = round_reached.try_emplace(v, round).second;
            if (!first && uniform) return;
            auto [it, inserted] = last_layer.try_emplace(v, round);
            if (!inserted) {
                if (it->second == round) return;
                it->second = round;
            }
            next.push_back(v);
        };
        for (PartyIndex u : frontier) {
            if (graph.transaction_neighbour_count(u) <= gate_above) {
                for (PartyIndex v : graph.transaction_neighbours(u)) {
                    if (v != u) reach(v);
                }
            }
            for (const auto& s : graph.supplementary_neighbours(u)) {
                if (s.weight >= weight_floor) reach(s.party);
            }
        }
        std::swap(frontier, next);
    }

    Community c;
    c.seed = seed;
    c.params = params;
    c.component = component;
    c.lineage = {seed};
    c.members.reserve(round_reached.size());
    for (const auto& [p, r] : round_reached) c.members.push_back(p);
    std::sort(c.members.begin(), c.members.end());
    c.transactions = induced_transactions(graph, c.members);
    // A supplementary edge belongs to the round in which BFS would examine it
    // from its closer endpoint.
    for (PartyIndex m : c.members) {
        for (const auto& s : graph.supplementary_neighbours(m)) {
            if (s.party <= m) continue;
            auto it = round_reached.find(s.party);
            if (it == round_reached.end()) continue;
            const int round = std::min(std::min(round_reached.at(m), it->second) + 1, params.k);
            if (s.weight >= params.w_min[round - 1]) {
                c.supplementary.push_back(graph.supplementary_edges()[s.edge]);
            }
        }
    }
    std::sort(c.supplementary.begin(), c.supplementary.end(), edge_less);
    return c;
}

std::vector<Community> deduplicate(std::vector<Community> communities) {
    std::sort(communities.begin(), communities.end(), [](const Community& x, const Community& y) {
        return std::tie(x.members, x.seed) < std::tie(y.members, y.seed);
    });
    std::vector<Community> out;
    for (auto& c : communities) {
        if (!out.empty() && out.back().members == c.members) {
            auto& kept = out.back().lineage;
            std::vector<PartyIndex> merged;
            std::set_union(kept.begin(), kept.end(), c.lineage.begin(), c.lineage.end(), std::back_inserter(merged));
            kept = std::move(merged);
            continue;
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Community& x, const Community& y) {
        return std::tie(x.seed, x.members) < std::tie(y.seed, y.members);
    });
    return out;
}

double jaccard(std::span<const PartyIndex> a, std::span<const PartyIndex> b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t shared = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++shared;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(shared) / static_cast<double>(a.size() + b.size() - shared);
}

std::vector<Community> merge_overlapping(const TransactionGraph& graph,
                                         std::vector<Community> communities, double theta) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("merge_overlapping: theta must lie in (0, 1]");
    }
    std::stable_sort(communities.begin(), communities.end(),
                     [](const Community& x, const Community& y) {
                         return std::tie(x.seed, x.members) < std::tie(y.seed, y.members);
                     });
    for (;;) {
        bool merged = false;
        for (std::size_t i = 0; i < communities.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < communities.size() && !merged; ++j) {
                if (jaccard(communities[i].members, communities[j].members) < theta) continue;
                const Community& first = communities[i];
                const Community& second = communities[j];
                std::vector<PartyIndex> members;
                std::set_union(first.members.begin(), first.members.end(), second.members.begin(),
                               second.members.end(), std::back_inserter(members));
                std::vector<PartyIndex> lineage;
                std::set_union(first.lineage.begin(), first.lineage.end(), second.lineage.begin(),
                               second.lineage.end(), std::back_inserter(lineage));
                Community united = induced_community(graph, first.seed, std::move(members), first.params);
                united.component = first.component;
                united.lineage = std::move(lineage);
                communities[i] = std::move(united);
                communities.erase(communities.begin() + static_cast<std::ptrdiff_t>(j));
                merged = true;
            }
        }
        if (!merged) break;
    }
    // A union can move ahead of a same-seed neighbour; restore the input order.
    std::sort(communities.begin(), communities.end(), [](const Community& x, const Community& y) {
        return std::tie(x.seed, x.members) < std::tie(y.seed, y.members);
    });
    return communities;
}

int diameter(const TransactionGraph& graph, const Community& community) {
    const auto& members = community.members;
    if (members.empty()) throw Error("diameter: empty community");
    const std::size_t n = members.size();
    auto local = [&](PartyIndex p) -> std::size_t {
        auto it = std::lower_bound(members.begin(), members.end(), p);
        if (it == members.end() || *it != p) throw Error("diameter: edge endpoint outside community");
        return static_cast<std::size_t>(it - members.begin());
    };
    std::vector<std::vector<std::size_t>> adjacency(n);
    auto link = [&](PartyIndex a, PartyIndex b) {
        if (a == b) return;
        const auto la = local(a), lb = local(b);
        adjacency[la].push_back(lb);
        adjacency[lb].push_back(la);
    };
    for (EdgeIndex e : community.transactions) {
        const auto& t = graph.transaction(e);
        link(t.src, t.dst);
    }
    for (const auto& s : community.supplementary) link(s.a, s.b);

    int longest = 0;
    std::vector<int> dist(n);
    std::vector<std::size_t> queue(n);
    for (std::size_t source = 0; source < n; ++source) {
        std::fill(dist.begin(), dist.end(), -1);
        std::size_t head = 0, tail = 0;
        dist[source] = 0;
        queue[tail++] = source;
        while (head < tail) {
            const auto u = queue[head++];
            for (auto v : adjacency[u]) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    queue[tail++] = v;
                }
            }
        }
        if (tail != n) throw Error("diameter: community is disconnected");
        longest = std::max(longest, dist[queue[tail - 1]]);
    }
    return longest;
}

BatchResult extract_batch(const TransactionGraph& graph, std::span<const PartyIndex> seeds,
                          const ExtractionParams& params, unsigned workers) {
    params.validate();
    std::vector<std::optional<Community>> slots(seeds.size());
    std::vector<std::string> failures(seeds.size());
    parallel_for(seeds.size(), workers, [&](std::size_t i) {
        try {
            slots[i] = extract(graph, seeds[i], params);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });
    BatchResult result;
    std::vector<Community> extracted;
    extracted.reserve(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (slots[i]) {
            extracted.push_back(std::move(*slots[i]));
        } else {
            result.errors.push_back({seeds[i], failures[i]});
        }
    }
    result.communities = deduplicate(std::move(extracted));
    return result;
}

std::string to_json_line(const TransactionGraph& graph, const Community& c,
                         std::optional<int> label) {
    json j;
    j["seed"] = graph.party(c.seed).id;
    json members = json::array();
    for (PartyIndex m : c.members) members.push_back(graph.party(m).id);
    j["members"] = std::move(members);
    json txns = json::array();
    for (EdgeIndex e : c.transactions) {
        const auto& t = graph.transaction(e);
        txns.push_back({{"edge", e},
                        {"src", graph.party(t.src).id},
                        {"dst", graph.party(t.dst).id},
                        {"report_id", t.report_id},
                        {"amount", t.amount}});
    }
    j["transactions"] = std::move(txns);
    json supp = json::array();
    for (const auto& s : c.supplementary) {
        supp.push_back({{"a", graph.party(s.a).id},
                        {"b", graph.party(s.b).id},
                        {"weight", s.weight},
                        {"evidence", graph.evidence().key(s.best_evidence).value}});
    }
    j["supplementary"] = std::move(supp);
    j["params"] = {{"k", c.params.k},
                   {"n_max", c.params.n_max},
                   {"w_min", c.params.w_min},
                   {"component_shortcut", c.params.component_shortcut}};
    json lineage = json::array();
    for (PartyIndex p : c.lineage) lineage.push_back(graph.party(p).id);
    j["provenance"] = {{"component", c.component}, {"shortcut", c.shortcut}, {"lineage", lineage}};
    if (label) j["label"] = *label;
    return j.dump();
}

CommunityRecord community_from_json(const TransactionGraph& graph, std::string_view line) {
    try {
        const json j = json::parse(line.begin(), line.end());
        CommunityRecord record;
        Community& c = record.community;
        c.seed = graph.index_of(j.at("seed").get<std::string>());
        for (const auto& id : j.at("members")) c.members.push_back(graph.index_of(id.get<std::string>()));
        std::sort(c.members.begin(), c.members.end());
        for (const auto& t : j.at("transactions")) {
            const auto e = t.at("edge").get<EdgeIndex>();
            if (e >= graph.transactions().size()) throw FormatError("transaction edge out of range");
            c.transactions.push_back(e);
        }
        std::sort(c.transactions.begin(), c.transactions.end());
        for (const auto& s : j.at("supplementary")) {
            const auto a = graph.index_of(s.at("a").get<std::string>());
            const auto b = graph.index_of(s.at("b").get<std::string>());
            const auto adjacent = graph.supplementary_neighbours(a);
            auto it = std::find_if(adjacent.begin(), adjacent.end(),
                                   [&](const SupplementaryNeighbour& n) { return n.party == b; });
            if (it == adjacent.end()) throw FormatError("supplementary edge not present in graph");
            c.supplementary.push_back(graph.supplementary_edges()[it->edge]);
        }
        std::sort(c.supplementary.begin(), c.supplementary.end(), edge_less);
        const auto& p = j.at("params");
        c.params.k = p.at("k").get<int>();
        c.params.n_max = p.at("n_max").get<std::vector<std::size_t>>();
        c.params.w_min = p.at("w_min").get<std::vector<double>>();
        c.params.component_shortcut = p.at("component_shortcut").get<bool>();
        c.params.validate();
        const auto& prov = j.at("provenance");
        c.component = prov.at("component").get<ComponentId>();
        c.shortcut = prov.at("shortcut").get<bool>();
        for (const auto& id : prov.at("lineage")) c.lineage.push_back(graph.index_of(id.get<std::string>()));
        std::sort(c.lineage.begin(), c.lineage.end());
        if (auto it = j.find("label"); it != j.end()) record.label = it->get<int>();
        return record;
    } catch (const json::exception& e) {
        throw FormatError(std::string("community record: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw FormatError(std::string("community record: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("community record: ") + e.what());
    }
}

}  // namespace laundergraph
