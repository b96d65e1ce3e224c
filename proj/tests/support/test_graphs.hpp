#pragma once

// Small graph builders shared by unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "laundergraph/graph.hpp"
#include "laundergraph/records.hpp"

namespace lgtest {

using namespace laundergraph;

inline PartyRecord party(std::string id, std::string country = "AU", std::optional<int> age = std::nullopt,
                         PartyKind kind = PartyKind::individual) {
    PartyRecord p;
    p.id = std::move(id);
    p.country = std::move(country);
    p.age = age;
    p.party_kind = kind;
    return p;
}

inline ReportRecord report(std::string id, std::vector<std::string> senders, std::vector<std::string> receivers,
                           double amount = 100.0, std::int64_t timestamp = 1325376000,
                           Channel channel = Channel::international_transfer) {
    ReportRecord r;
    r.report_id = std::move(id);
    r.channel = channel;
    r.senders = std::move(senders);
    r.receivers = std::move(receivers);
    r.amount = amount;
    r.currency = "AUD";
    r.timestamp = timestamp;
    return r;
}

// Incrementally describes a graph by party name; edges are added in order.
class GraphSketch {
public:
    GraphSketch& parties(std::initializer_list<std::string> ids) {
        for (const auto& id : ids) add(id);
        return *this;
    }
    GraphSketch& add(const std::string& id, std::string country = "AU") {
        if (!builder_.has_party(id)) builder_.add_party(party(id, std::move(country)));
        return *this;
    }
    GraphSketch& tx(const std::string& a, const std::string& b, double amount = 100.0,
                    std::int64_t timestamp = 1325376000, Channel channel = Channel::international_transfer) {
        add(a);
        add(b);
        builder_.add_transaction(report("r" + std::to_string(++reports_), {a}, {b}, amount, timestamp, channel));
        return *this;
    }
    // Both parties named on one report carrying a fresh evidence key: the
    // supplementary weight is 1.
    GraphSketch& strong_link(const std::string& a, const std::string& b) {
        add(a);
        add(b);
        auto r = report("r" + std::to_string(++reports_), {a}, {a}, 0.0);
        const EvidenceKey key{EvidenceKind::shared_account, "k" + std::to_string(++keys_)};
        r.evidence_associations = {{a, key}, {b, key}};
        builder_.add_transaction(r);
        return *this;
    }
    // Supplementary link of weight 1 / (m * (m - 1)) built from m reports,
    // each associating one party with a shared key; a and b are two of them.
    GraphSketch& weak_link(const std::string& a, const std::string& b, int extra_holders) {
        const EvidenceKey key{EvidenceKind::shared_agent, "k" + std::to_string(++keys_)};
        std::vector<std::string> holders{a, b};
        for (int i = 0; i < extra_holders; ++i) holders.push_back(a + b + "_x" + std::to_string(i));
        for (const auto& h : holders) {
            add(h);
            auto r = report("r" + std::to_string(++reports_), {h}, {h}, 0.0);
            r.evidence_associations = {{h, key}};
            builder_.add_transaction(r);
        }
        return *this;
    }
    GraphBuilder& builder() { return builder_; }
    TransactionGraph freeze() { return builder_.freeze(); }

private:
    GraphBuilder builder_;
    int reports_ = 0;
    int keys_ = 0;
};

struct RandomGraphOptions {
    std::size_t min_parties = 10;
    std::size_t max_parties = 200;
    double edge_factor = 1.2;          // transaction reports per party
    double evidence_factor = 0.4;      // evidence keys per party
    std::size_t max_hubs = 3;          // parties given many neighbours to act as gates
    std::size_t hub_degree_lo = 8;
    std::size_t hub_degree_hi = 50;
};

/// Random multigraph with self-loops, multi-party reports, supplementary
/// evidence of varied weights and a few high-degree hubs.
inline TransactionGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& o = {}) {
    auto uni = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    const std::size_t n = uni(o.min_parties, o.max_parties);
    GraphBuilder b;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("p" + std::to_string(i));
        b.add_party(party(ids.back(), chance(0.7) ? "AU" : "NZ"));
    }
    std::size_t r = 0;
    auto next_id = [&] { return "r" + std::to_string(r++); };
    const auto reports = static_cast<std::size_t>(o.edge_factor * static_cast<double>(n));
    for (std::size_t i = 0; i < reports; ++i) {
        std::vector<std::string> s{ids[uni(0, n - 1)]};
        std::vector<std::string> d{chance(0.05) ? s[0] : ids[uni(0, n - 1)]};
        if (chance(0.1)) s.push_back(ids[uni(0, n - 1)]);
        if (chance(0.1)) d.push_back(ids[uni(0, n - 1)]);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        b.add_transaction(report(next_id(), s, d, static_cast<double>(uni(1, 20000)),
                                 1325376000 + static_cast<std::int64_t>(uni(0, 86400 * 60)),
                                 chance(0.4) ? Channel::cash_deposit : Channel::international_transfer));
    }
    const std::size_t hubs = uni(0, o.max_hubs);
    for (std::size_t h = 0; h < hubs; ++h) {
        const std::string hub = ids[uni(0, n - 1)];
        const std::size_t degree = uni(o.hub_degree_lo, std::min(o.hub_degree_hi, n - 1));
        for (std::size_t k = 0; k < degree; ++k) b.add_transaction(report(next_id(), {hub}, {ids[uni(0, n - 1)]}));
    }
    const auto keys = static_cast<std::size_t>(o.evidence_factor * static_cast<double>(n));
    for (std::size_t k = 0; k < keys; ++k) {
        const EvidenceKey key{static_cast<EvidenceKind>(uni(0, 3)), "e" + std::to_string(k)};
        const std::size_t holders = uni(2, 4);
        const std::size_t mentions = uni(holders - 1, holders + 3);
        for (std::size_t m = 0; m < mentions; ++m) {
            const std::string& h = ids[uni(0, n - 1)];
            auto rep = report(next_id(), {h}, {h}, 1.0);
            rep.evidence_associations = {{h, key}};
            if (chance(0.3)) rep.evidence_associations.push_back({ids[uni(0, n - 1)], key});
            b.add_transaction(rep);
        }
    }
    return b.freeze();
}

inline std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "laundergraph-tests";
    std::filesystem::create_directories(dir);
    return dir / (std::to_string(std::random_device{}()) + "-" + name);
}

}  // namespace lgtest
