#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "laundergraph/burst.hpp"
#include "laundergraph/classifier.hpp"
#include "laundergraph/community.hpp"
#include "laundergraph/features.hpp"
#include "laundergraph/reports.hpp"
#include "laundergraph/synth.hpp"

namespace lg = laundergraph;

namespace {

const lg::SynthCorpus& corpus() {
    static const lg::SynthCorpus c = [] {
        lg::SynthConfig sc;
        sc.n_parties = 50000;
        sc.n_injected_groups = 20;
        sc.seed = 7;
        return lg::generate(sc);
    }();
    return c;
}

const lg::TransactionGraph& graph() {
    static const lg::TransactionGraph g = lg::build_graph(corpus().parties, corpus().reports);
    return g;
}

std::vector<lg::PartyIndex> seeds(std::size_t n) {
    std::mt19937_64 rng(3);
    std::vector<lg::PartyIndex> out(n);
    for (auto& s : out) s = static_cast<lg::PartyIndex>(rng() % graph().party_count());
    return out;
}

}  // namespace

static void BM_BuildGraph(benchmark::State& state) {
    const auto& c = corpus();
    for (auto _ : state) {
        auto g = lg::build_graph(c.parties, c.reports);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.reports.size()));
}
BENCHMARK(BM_BuildGraph)->Unit(benchmark::kMillisecond);

static void BM_Extract(benchmark::State& state) {
    const auto& g = graph();
    const auto s = seeds(256);
    const lg::ExtractionParams params;
    std::size_t i = 0;
    for (auto _ : state) {
        auto c = lg::extract(g, s[i++ % s.size()], params);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_Extract);

// Arg: worker count.
static void BM_ExtractBatch(benchmark::State& state) {
    const auto& g = graph();
    const auto s = seeds(2000);
    const lg::ExtractionParams params;
    for (auto _ : state) {
        auto batch = lg::extract_batch(g, s, params, static_cast<unsigned>(state.range(0)));
        benchmark::DoNotOptimize(batch);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_ExtractBatch)->Arg(1)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_Featurize(benchmark::State& state) {
    const auto& g = graph();
    const auto batch = lg::extract_batch(g, seeds(200), lg::ExtractionParams{}, 1);
    for (auto _ : state) {
        auto v = lg::featurize_all(g, batch.communities, lg::FeatureSchema::standard(), {}, 1);
        benchmark::DoNotOptimize(v);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.communities.size()));
}
BENCHMARK(BM_Featurize)->Unit(benchmark::kMillisecond);

static void BM_BurstDetect(benchmark::State& state) {
    std::mt19937_64 rng(5);
    lg::BinnedSeries s;
    s.counts.resize(static_cast<std::size_t>(state.range(0)));
    for (auto& c : s.counts) c = static_cast<double>(rng() % 10);
    s.amounts.assign(s.counts.size(), 0.0);
    for (auto _ : state) {
        auto b = lg::burst_detect(s, 2.0);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_BurstDetect)->Range(64, 1 << 14);

// Arg: training rows.
static void BM_TrainForest(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise;
    std::vector<std::vector<double>> rows(n, std::vector<double>(30));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>(i % 2);
        for (auto& v : rows[i]) v = noise(rng) + y[i] * 0.5;
    }
    const auto x = lg::Matrix::from_rows(rows);
    lg::TrainConfig config;
    config.n_trees = 50;
    for (auto _ : state) {
        auto model = lg::train(x, y, config, lg::SchemaTag::anonymous(30));
        benchmark::DoNotOptimize(model);
    }
}
BENCHMARK(BM_TrainForest)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
