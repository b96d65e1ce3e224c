#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "laundergraph/classifier.hpp"
#include "laundergraph/error.hpp"
#include "laundergraph/features.hpp"
#include "laundergraph/monitor.hpp"
#include "test_graphs.hpp"

using namespace laundergraph;
using lgtest::GraphSketch;
using lgtest::report;

namespace {

constexpr std::int64_t kT0 = 1325376000;

Monitor::Scorer constant(double s) {
    return [s](std::span<const double>) { return s; };
}

MonitorOptions options(double tau, int k = 1) {
    MonitorOptions o;
    o.params = ExtractionParams::make(k, {40}, {0.01}, false);
    o.tau = tau;
    return o;
}

// b neighbours {a, c, d}; c neighbours {b, d, e}. With k = 1 the two
// communities share 3 of 5 parties.
TransactionGraph overlap_graph() {
    return GraphSketch{}.tx("a", "b").tx("b", "c").tx("b", "d").tx("c", "d").tx("c", "e").freeze();
}

std::vector<Alert> drain(Monitor& m, const std::vector<ReportRecord>& stream) {
    std::vector<Alert> out;
    for (const auto& r : stream) {
        auto released = m.process(r);
        out.insert(out.end(), released.begin(), released.end());
    }
    auto last = m.flush();
    out.insert(out.end(), last.begin(), last.end());
    return out;
}

}  // namespace

TEST(Monitor, ScoreAboveTauAlerts) {
    const auto g = overlap_graph();
    Monitor m(g, constant(0.95), "test-model", options(0.93));
    const auto alerts = drain(m, {report("n1", {"a"}, {"b"}, 5000.0, kT0 + 10)});
    ASSERT_EQ(alerts.size(), 1u);
    EXPECT_GE(alerts[0].score, 0.93);
    EXPECT_EQ(alerts[0].tau, 0.93);
    EXPECT_EQ(alerts[0].model_id, "test-model");
    EXPECT_EQ(alerts[0].lineage, std::vector<PartyIndex>{g.index_of("a")});
    EXPECT_EQ(alerts[0].timestamp, kT0 + 10);
}

TEST(Monitor, ScoreBelowTauIsQuiet) {
    Monitor m(overlap_graph(), constant(0.10), "test-model", options(0.93));
    EXPECT_TRUE(drain(m, {report("n1", {"a"}, {"b"}, 5000.0, kT0)}).empty());
    EXPECT_EQ(m.processed(), 1u);
}

TEST(Monitor, OverlappingCommunitiesMergeIntoOneAlert) {
    const auto g = overlap_graph();
    auto o = options(0.5);
    o.theta = 0.5;
    Monitor m(g, constant(0.9), "test-model", o);
    const auto alerts = drain(m, {report("n1", {"b"}, {"c"}, 100.0, kT0 + 5), report("n2", {"c"}, {"d"}, 100.0, kT0 + 65)});
    ASSERT_EQ(alerts.size(), 1u);
    EXPECT_EQ(alerts[0].lineage.size(), 2u);
    EXPECT_EQ(alerts[0].community.members.size(), 5u);
    EXPECT_EQ(alerts[0].timestamp, kT0 + 65);
}

TEST(Monitor, HighThetaKeepsThemApart) {
    auto o = options(0.5);
    o.theta = 0.7;
    Monitor m(overlap_graph(), constant(0.9), "test-model", o);
    const auto alerts = drain(m, {report("n1", {"b"}, {"c"}, 100.0, kT0), report("n2", {"c"}, {"d"}, 100.0, kT0)});
    EXPECT_EQ(alerts.size(), 2u);
}

TEST(Monitor, GraphUpdatedBeforeExtraction) {
    auto g = overlap_graph();
    Monitor m(g, constant(0.9), "test-model", options(0.5));
    PartyRecord fresh = lgtest::party("z", "VN");
    m.add_party(fresh);
    const auto alerts = drain(m, {report("n1", {"z"}, {"a"}, 100.0, kT0)});
    ASSERT_EQ(alerts.size(), 1u);
    const auto& members = alerts[0].community.members;
    EXPECT_EQ(members, (std::vector<PartyIndex>{g.index_of("a"), static_cast<PartyIndex>(g.party_count())}));
    EXPECT_EQ(m.graph().party_count(), g.party_count() + 1);
}

TEST(Monitor, UnknownPartySkipped) {
    Monitor m(overlap_graph(), constant(0.9), "test-model", options(0.5));
    const auto alerts = drain(m, {report("bad", {"ghost"}, {"a"}, 1.0, kT0), report("ok", {"a"}, {"b"}, 1.0, kT0)});
    EXPECT_EQ(alerts.size(), 1u);
    ASSERT_EQ(m.skipped().size(), 1u);
    EXPECT_EQ(m.skipped()[0].report_id, "bad");
}

TEST(Monitor, WindowSizeReleasesEarly) {
    auto o = options(0.5);
    o.window_size = 1;
    Monitor m(overlap_graph(), constant(0.9), "test-model", o);
    EXPECT_EQ(m.process(report("n1", {"a"}, {"b"}, 1.0, kT0)).size(), 1u);
    EXPECT_EQ(m.pending(), 0u);
}

TEST(Monitor, WindowSecondsReleasesEarlierAlerts) {
    auto o = options(0.5);
    o.window_seconds = 3600;
    Monitor m(overlap_graph(), constant(0.9), "test-model", o);
    EXPECT_TRUE(m.process(report("n1", {"a"}, {"b"}, 1.0, kT0)).empty());
    const auto released = m.process(report("n2", {"e"}, {"c"}, 1.0, kT0 + 7200));
    ASSERT_EQ(released.size(), 1u);
    EXPECT_EQ(released[0].lineage, std::vector<PartyIndex>{0});
    EXPECT_EQ(m.pending(), 1u);
}

TEST(Monitor, SchemaMismatchIsFatal) {
    Matrix x = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    TrainConfig c;
    c.n_trees = 2;
    const Classifier model = train(x, std::vector<int>{0, 1}, c, SchemaTag::anonymous(2));
    EXPECT_THROW(Monitor(overlap_graph(), model, options(0.5)), SchemaMismatchError);
}

TEST(Monitor, TrainedModelPath) {
    Matrix x(2, FeatureSchema::standard().size());
    x(1, 0) = 1.0;
    TrainConfig c;
    c.n_trees = 3;
    const Classifier model = train(x, std::vector<int>{0, 1}, c, SchemaTag::of(FeatureSchema::standard()));
    Monitor m(overlap_graph(), model, options(0.0));
    const auto alerts = drain(m, {report("n1", {"a"}, {"b"}, 1.0, kT0)});
    ASSERT_EQ(alerts.size(), 1u);
    EXPECT_EQ(alerts[0].model_id, model_id(model));
}

TEST(Monitor, RandomStreamInvariantsAndReplay) {
    std::mt19937_64 rng(10);
    const auto g = lgtest::random_graph(rng, {.min_parties = 150, .max_parties = 150});
    std::vector<ReportRecord> stream;
    for (int i = 0; i < 300; ++i) {
        const auto a = g.party(static_cast<PartyIndex>(rng() % g.party_count())).id;
        const auto b = g.party(static_cast<PartyIndex>(rng() % g.party_count())).id;
        stream.push_back(report("s" + std::to_string(i), {a}, {b}, 100.0, kT0 + i * 600));
    }
    // Deterministic pseudo-score of the community shape.
    auto scorer = [](std::span<const double> v) {
        const auto h = std::hash<double>{}(v[6] * 131 + v[7] * 7 + v[15]);
        return static_cast<double>(h % 1000) / 1000.0;
    };
    auto o = options(0.6, 2);
    o.window_size = 25;
    o.window_seconds = 6 * 3600;
    Monitor first(g, scorer, "m", o);
    Monitor second(g, scorer, "m", o);
    const auto a = drain(first, stream);
    const auto b = drain(second, stream);
    ASSERT_FALSE(a.empty());
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].lineage, b[i].lineage);
        EXPECT_EQ(a[i].community.members, b[i].community.members);
        EXPECT_GE(a[i].score, o.tau);
        EXPECT_FALSE(a[i].lineage.empty());
    }
    // Alerts from a single release never overlap at theta.
    Monitor third(g, scorer, "m", o);
    for (const auto& r : stream) {
        const auto released = third.process(r);
        for (std::size_t i = 0; i < released.size(); ++i)
            for (std::size_t j = i + 1; j < released.size(); ++j)
                EXPECT_LT(jaccard(released[i].community.members, released[j].community.members), o.theta);
    }
}

TEST(Monitor, AlertJsonLine) {
    const auto g = overlap_graph();
    Monitor m(g, constant(0.95), "rf-0123", options(0.93));
    const auto alerts = drain(m, {report("n1", {"a"}, {"b"}, 5000.0, kT0)});
    ASSERT_EQ(alerts.size(), 1u);
    const auto j = nlohmann::json::parse(to_json_line(m.graph(), alerts[0]));
    EXPECT_EQ(j["seed"], "a");
    EXPECT_EQ(j["model_id"], "rf-0123");
    EXPECT_DOUBLE_EQ(j["score"].get<double>(), 0.95);
    EXPECT_DOUBLE_EQ(j["tau"].get<double>(), 0.93);
    EXPECT_EQ(j["lineage"], nlohmann::json::array({"a"}));
    EXPECT_EQ(j["timestamp"], "2012-01-01T00:00:00Z");
    EXPECT_EQ(j["members"], nlohmann::json::array({"a", "b"}));
    EXPECT_FALSE(j["alert_id"].get<std::string>().empty());
    EXPECT_FALSE(j["transactions"].empty());
}
