#include <gtest/gtest.h>

#include <random>
#include <set>

#include "laundergraph/evidence.hpp"
#include "laundergraph/graph.hpp"
#include "oracles.hpp"
#include "test_graphs.hpp"

using namespace laundergraph;
using lgtest::GraphSketch;
using lgtest::party;
using lgtest::report;

namespace {

GraphBuilder four_parties() {
    GraphBuilder b;
    for (const char* id : {"a", "b", "c", "d"}) b.add_party(party(id));
    return b;
}

}  // namespace

TEST(AddTransaction, TwoSendersOneReceiverGiveTwoEdges) {
    auto b = four_parties();
    const auto edges = b.add_transaction(report("r1", {"a", "b"}, {"c"}, 50.0));
    ASSERT_EQ(edges.size(), 2u);
    const auto g = b.freeze();
    EXPECT_EQ(g.transaction(edges[0]).src, g.index_of("a"));
    EXPECT_EQ(g.transaction(edges[0]).dst, g.index_of("c"));
    EXPECT_EQ(g.transaction(edges[1]).src, g.index_of("b"));
    EXPECT_EQ(g.transaction(edges[1]).dst, g.index_of("c"));
    for (auto e : edges) {
        EXPECT_EQ(g.transaction(e).amount, 50.0);
        EXPECT_EQ(g.transaction(e).report_id, "r1");
    }
}

TEST(AddTransaction, SenderEqualsReceiverIsSelfLoop) {
    auto b = four_parties();
    const auto edges = b.add_transaction(report("r1", {"a"}, {"a"}));
    const auto g = b.freeze();
    ASSERT_EQ(edges.size(), 1u);
    EXPECT_TRUE(g.transaction(edges[0]).is_self_loop());
}

TEST(AddTransaction, CrossProductOfTwoByTwo) {
    auto b = four_parties();
    EXPECT_EQ(b.add_transaction(report("r1", {"a", "b"}, {"c", "d"})).size(), 4u);
}

TEST(AddTransaction, UnknownPartyRejectsWholeReport) {
    auto b = four_parties();
    EXPECT_THROW(b.add_transaction(report("r1", {"a"}, {"c", "zz"})), std::invalid_argument);
    EXPECT_EQ(b.transaction_count(), 0u);
}

TEST(AddTransaction, NegativeAmountRejected) {
    auto b = four_parties();
    EXPECT_THROW(b.add_transaction(report("r1", {"a"}, {"b"}, -1.0)), std::invalid_argument);
    EXPECT_EQ(b.transaction_count(), 0u);
}

TEST(AddParty, RejectsDuplicateIdAndBadAge) {
    GraphBuilder b;
    b.add_party(party("a"));
    EXPECT_THROW(b.add_party(party("a")), std::invalid_argument);
    EXPECT_THROW(b.add_party(party("old", "AU", 131)), std::invalid_argument);
    EXPECT_THROW(b.add_party(party("neg", "AU", -1)), std::invalid_argument);
    EXPECT_NO_THROW(b.add_party(party("ok", "AU", 130)));
}

TEST(EvidenceWeight, HandEvaluatedValues) {
    EXPECT_DOUBLE_EQ(evidence_weight(2, 1, 4), 0.25);
    EXPECT_DOUBLE_EQ(evidence_weight(1, 1, 2), 0.5);
    EXPECT_DOUBLE_EQ(evidence_weight(3, 0, 7), 0.0);
    EXPECT_DOUBLE_EQ(evidence_weight(3, 1, 3), 1.0);
}

TEST(EvidenceWeight, ClampsAboveOne) {
    // Raw product 3*3 / (4*1) = 2.25.
    EXPECT_DOUBLE_EQ(evidence_weight(3, 3, 4), 1.0);
}

TEST(EvidenceWeight, ZeroTransactionsIsAnError) {
    EXPECT_THROW(evidence_weight(0, 0, 0), std::invalid_argument);
    EXPECT_THROW(evidence_weight(5, 1, 4), std::invalid_argument);
}

TEST(EvidenceWeight, BoundedAndMonotoneExhaustive) {
    for (std::uint64_t d = 1; d <= 30; ++d)
        for (std::uint64_t p = 0; p <= d; ++p)
            for (std::uint64_t q = 0; q <= d; ++q) {
                const double w = evidence_weight(p, q, d);
                ASSERT_GE(w, 0.0);
                ASSERT_LE(w, 1.0);
                if (q < d) {
                    ASSERT_LE(w, evidence_weight(p, q + 1, d));
                }
                if (p < d) {
                    ASSERT_LE(w, evidence_weight(p + 1, q, d));
                }
                ASSERT_NEAR(w, oracle::evidence_weight(p, q, d), 1e-12);
            }
}

TEST(PairWeight, SymmetrizedByMaximum) {
    EvidenceIndex index;
    const EvidenceKey key{EvidenceKind::shared_account, "acct"};
    // p appears in 3 transactions with e, q in 1, d_e = 4.
    std::vector<std::pair<PartyIndex, EvidenceKey>> with_p{{0, key}};
    std::vector<std::pair<PartyIndex, EvidenceKey>> with_q{{1, key}};
    for (int i = 0; i < 3; ++i) index.record_transaction(with_p);
    index.record_transaction(with_q);
    EXPECT_DOUBLE_EQ(pair_supplementary_weight(0, 1, index), 0.75);
    EXPECT_DOUBLE_EQ(pair_supplementary_weight(1, 0, index), 0.75);
}

TEST(PairWeight, NoSharedEvidenceIsZero) {
    EvidenceIndex index;
    std::vector<std::pair<PartyIndex, EvidenceKey>> a{{0, {EvidenceKind::shared_agent, "x"}}};
    std::vector<std::pair<PartyIndex, EvidenceKey>> b{{1, {EvidenceKind::shared_agent, "y"}}};
    index.record_transaction(a);
    index.record_transaction(b);
    EXPECT_EQ(pair_supplementary_weight(0, 1, index), 0.0);
    EXPECT_FALSE(pair_supplementary_link(0, 1, index).evidence.has_value());
}

TEST(PairWeight, MaximumOverEvidence) {
    EvidenceIndex index;
    const EvidenceKey weak{EvidenceKind::shared_agent, "weak"};
    const EvidenceKey strong{EvidenceKind::shared_account, "strong"};
    // weak: n_p = n_q = 1, d_e = 5 -> max ordering 1/5 * 1/4 = 0.05
    std::vector<std::pair<PartyIndex, EvidenceKey>> p_weak{{0, weak}};
    std::vector<std::pair<PartyIndex, EvidenceKey>> q_weak{{1, weak}};
    std::vector<std::pair<PartyIndex, EvidenceKey>> other{{2, weak}};
    index.record_transaction(p_weak);
    index.record_transaction(q_weak);
    for (int i = 0; i < 3; ++i) index.record_transaction(other);
    // strong: one transaction each -> 0.5
    std::vector<std::pair<PartyIndex, EvidenceKey>> p_strong{{0, strong}};
    std::vector<std::pair<PartyIndex, EvidenceKey>> q_strong{{1, strong}};
    index.record_transaction(p_strong);
    index.record_transaction(q_strong);
    const auto link = pair_supplementary_link(0, 1, index);
    EXPECT_DOUBLE_EQ(link.weight, 0.5);
    EXPECT_EQ(index.key(*link.evidence), strong);
}

TEST(PairWeight, SymmetricOnRandomIndexes) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        EvidenceIndex index;
        for (int t = 0; t < 40; ++t) {
            std::vector<std::pair<PartyIndex, EvidenceKey>> a;
            const auto holders = rng() % 3 + 1;
            for (std::uint64_t h = 0; h < holders; ++h) {
                a.push_back({static_cast<PartyIndex>(rng() % 8), {EvidenceKind::other, std::to_string(rng() % 5)}});
            }
            index.record_transaction(a);
        }
        for (PartyIndex p = 0; p < 8; ++p)
            for (PartyIndex q = 0; q < 8; ++q) {
                if (p == q) continue;
                ASSERT_EQ(pair_supplementary_weight(p, q, index), pair_supplementary_weight(q, p, index));
            }
    }
}

TEST(EvidenceIndex, CountsEachTransactionOnce) {
    EvidenceIndex index;
    const EvidenceKey key{EvidenceKind::shared_account, "k"};
    // Same party listed twice with the same key in one transaction.
    std::vector<std::pair<PartyIndex, EvidenceKey>> a{{0, key}, {0, key}, {1, key}};
    index.record_transaction(a);
    const auto id = *index.find(key);
    EXPECT_EQ(index.transaction_count(id), 1u);
    EXPECT_EQ(index.association_count(0, id), 1u);
    EXPECT_EQ(index.association_count(1, id), 1u);
}

TEST(SupplementaryEdges, CliqueOverSharedEvidence) {
    EvidenceIndex index;
    const EvidenceKey key{EvidenceKind::shared_account, "k"};
    for (PartyIndex p = 0; p < 3; ++p) {
        std::vector<std::pair<PartyIndex, EvidenceKey>> a{{p, key}};
        index.record_transaction(a);
    }
    const auto edges = build_supplementary_edges(index);
    ASSERT_EQ(edges.size(), 3u);
    EXPECT_EQ(std::make_pair(edges[0].a, edges[0].b), std::make_pair(0u, 1u));
    EXPECT_EQ(std::make_pair(edges[1].a, edges[1].b), std::make_pair(0u, 2u));
    EXPECT_EQ(std::make_pair(edges[2].a, edges[2].b), std::make_pair(1u, 2u));
}

TEST(SupplementaryEdges, SingleHolderGivesNoEdge) {
    EvidenceIndex index;
    std::vector<std::pair<PartyIndex, EvidenceKey>> a{{4, {EvidenceKind::shared_agent, "solo"}}};
    index.record_transaction(a);
    index.record_transaction(a);
    EXPECT_TRUE(build_supplementary_edges(index).empty());
}

TEST(SupplementaryEdges, TwoEvidencesStillOneEdgeWithMaxWeight) {
    EvidenceIndex index;
    const EvidenceKey e1{EvidenceKind::shared_account, "1"};
    const EvidenceKey e2{EvidenceKind::shared_agent, "2"};
    std::vector<std::pair<PartyIndex, EvidenceKey>> both1{{0, e1}, {1, e1}};
    std::vector<std::pair<PartyIndex, EvidenceKey>> p2{{0, e2}};
    std::vector<std::pair<PartyIndex, EvidenceKey>> q2{{1, e2}};
    index.record_transaction(both1);
    index.record_transaction(p2);
    index.record_transaction(q2);
    const auto edges = build_supplementary_edges(index);
    ASSERT_EQ(edges.size(), 1u);
    EXPECT_DOUBLE_EQ(edges[0].weight, std::max(evidence_weight(1, 1, 1), evidence_weight(1, 1, 2)));
}

TEST(SupplementaryEdges, SharedByMPartiesTouchesAllPairs) {
    for (PartyIndex m = 2; m <= 9; ++m) {
        EvidenceIndex index;
        const EvidenceKey key{EvidenceKind::shared_geolocation, "g"};
        for (PartyIndex p = 0; p < m; ++p) {
            std::vector<std::pair<PartyIndex, EvidenceKey>> a{{p, key}};
            index.record_transaction(a);
        }
        std::set<std::pair<PartyIndex, PartyIndex>> pairs;
        for (const auto& e : build_supplementary_edges(index)) {
            EXPECT_NE(e.a, e.b);
            EXPECT_LT(e.a, e.b);
            pairs.insert({e.a, e.b});
        }
        EXPECT_EQ(pairs.size(), m * (m - 1) / 2);
    }
}

TEST(Components, TwoDisjointEdges) {
    const auto g = GraphSketch{}.tx("a", "b").tx("c", "d").freeze();
    const auto comps = connected_components(g);
    EXPECT_EQ(comps.blocks.size(), 2u);
    EXPECT_EQ(comps.component_of[g.index_of("a")], comps.component_of[g.index_of("b")]);
    EXPECT_NE(comps.component_of[g.index_of("a")], comps.component_of[g.index_of("c")]);
}

TEST(Components, EmptyGraph) {
    GraphBuilder b;
    EXPECT_TRUE(connected_components(b.freeze()).blocks.empty());
}

TEST(Components, SupplementaryEdgesJoinComponents) {
    const auto g = GraphSketch{}.tx("a", "b").tx("c", "d").strong_link("b", "c").freeze();
    EXPECT_EQ(connected_components(g).blocks.size(), 1u);
}

TEST(Components, MatchTransitiveClosureOracle) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        lgtest::RandomGraphOptions o;
        o.min_parties = 20;
        o.max_parties = trial < 10 ? 100 : 200;
        o.edge_factor = 0.6;
        o.evidence_factor = 0.2;
        const auto g = lgtest::random_graph(rng, o);
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& t : g.transactions()) edges.emplace_back(t.src, t.dst);
        for (const auto& s : g.supplementary_edges()) edges.emplace_back(s.a, s.b);
        const auto label = oracle::closure_components(g.party_count(), edges);
        const auto comps = connected_components(g);

        std::set<PartyIndex> covered;
        for (const auto& block : comps.blocks) {
            for (PartyIndex p : block) {
                ASSERT_TRUE(covered.insert(p).second) << "party in two blocks";
                ASSERT_EQ(label[p], label[block.front()]);
            }
        }
        ASSERT_EQ(covered.size(), g.party_count());
        for (PartyIndex p = 0; p < g.party_count(); ++p)
            for (PartyIndex q = 0; q < g.party_count(); ++q) {
                ASSERT_EQ(label[p] == label[q], comps.component_of[p] == comps.component_of[q]);
            }
    }
}

TEST(NeighbourCount, DistinctCounterpartiesOnly) {
    const auto g = GraphSketch{}.tx("p", "q").tx("p", "q").tx("q", "p").freeze();
    EXPECT_EQ(transaction_neighbour_count(g, g.index_of("p")), 1u);
}

TEST(NeighbourCount, SelfLoopExcluded) {
    const auto g = GraphSketch{}.tx("p", "p").freeze();
    EXPECT_EQ(transaction_neighbour_count(g, g.index_of("p")), 0u);
}

TEST(NeighbourCount, HubWithFortyOneNeighbours) {
    GraphSketch s;
    for (int i = 0; i < 41; ++i) s.tx("hub", "n" + std::to_string(i));
    const auto g = s.freeze();
    EXPECT_EQ(transaction_neighbour_count(g, g.index_of("hub")), 41u);
}

TEST(NeighbourCount, UnknownPartyThrows) {
    const auto g = GraphSketch{}.tx("p", "q").freeze();
    EXPECT_THROW(g.transaction_neighbours(7), std::out_of_range);
    EXPECT_THROW(g.index_of("nobody"), std::out_of_range);
}

TEST(Graph, EdgeCountEqualsSumOfCrossProducts) {
    std::mt19937_64 rng(9);
    GraphBuilder b;
    for (int i = 0; i < 30; ++i) b.add_party(party("p" + std::to_string(i)));
    std::size_t expected = 0;
    for (int r = 0; r < 200; ++r) {
        std::set<std::string> s;
        std::set<std::string> d;
        const auto ns = rng() % 3 + 1;
        const auto nd = rng() % 3 + 1;
        while (s.size() < ns) s.insert("p" + std::to_string(rng() % 30));
        while (d.size() < nd) d.insert("p" + std::to_string(rng() % 30));
        b.add_transaction(report("r" + std::to_string(r), {s.begin(), s.end()}, {d.begin(), d.end()}));
        expected += ns * nd;
    }
    const auto g = b.freeze();
    EXPECT_EQ(g.transactions().size(), expected);
    // Summarized neighbour lists agree with the raw edges.
    for (PartyIndex p = 0; p < g.party_count(); ++p) {
        std::set<PartyIndex> raw;
        for (const auto& t : g.transactions()) {
            if (t.src == p && t.dst != p) raw.insert(t.dst);
            if (t.dst == p && t.src != p) raw.insert(t.src);
        }
        auto nb = g.transaction_neighbours(p);
        EXPECT_EQ(std::set<PartyIndex>(nb.begin(), nb.end()), raw);
    }
}

TEST(Graph, IncrementalFreezeMatchesFullBuild) {
    std::mt19937_64 rng(21);
    std::vector<ReportRecord> reports;
    GraphBuilder full;
    GraphBuilder incremental;
    for (int i = 0; i < 20; ++i) {
        full.add_party(party("p" + std::to_string(i)));
        incremental.add_party(party("p" + std::to_string(i)));
    }
    for (int r = 0; r < 120; ++r) {
        const std::string a = "p" + std::to_string(rng() % 20);
        const std::string c = "p" + std::to_string(rng() % 20);
        auto rep = report("r" + std::to_string(r), {a}, {c});
        rep.evidence_associations = {{a, {EvidenceKind::shared_account, std::to_string(rng() % 15)}}};
        full.add_transaction(rep);
        incremental.add_transaction(rep);
        if (r % 7 == 0) incremental.freeze();
    }
    const auto g1 = full.freeze();
    const auto g2 = incremental.freeze();
    ASSERT_EQ(g1.supplementary_edges().size(), g2.supplementary_edges().size());
    for (std::size_t i = 0; i < g1.supplementary_edges().size(); ++i) {
        EXPECT_EQ(g1.supplementary_edges()[i], g2.supplementary_edges()[i]);
    }
    EXPECT_EQ(g1.summary(), g2.summary());
}

TEST(Graph, ComponentDiameterShortcutTest) {
    // 4-cycle: diameter 2.
    const auto g = GraphSketch{}.tx("a", "b").tx("b", "c").tx("c", "d").tx("d", "a").freeze();
    const auto c = g.component_of(0);
    EXPECT_TRUE(g.component_diameter_at_most(c, 2, 0.01));
    EXPECT_FALSE(g.component_diameter_at_most(c, 1, 0.01));
}
