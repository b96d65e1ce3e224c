#include "laundergraph/monitor.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "laundergraph/error.hpp"
#include "laundergraph/reports.hpp"

namespace laundergraph {

namespace {

Monitor::Scorer model_scorer(const Classifier& model) {
    if (schema_of(model) != SchemaTag::of(FeatureSchema::standard())) {
        throw SchemaMismatchError("monitor: model was not trained on the standard feature schema");
    }
    return [model](std::span<const double> x) { return score(model, x); };
}

}  // namespace

Monitor::Monitor(const TransactionGraph& graph, const Classifier& model, MonitorOptions options)
    : Monitor(graph, model_scorer(model), model_id(model), std::move(options)) {}

Monitor::Monitor(const TransactionGraph& graph, Scorer scorer, std::string model_id, MonitorOptions options)
    : options_(std::move(options)),
      scorer_(std::move(scorer)),
      model_id_(std::move(model_id)),
      builder_(graph),
      graph_(graph) {
    options_.params.validate();
    if (!(options_.theta > 0.0 && options_.theta <= 1.0)) throw std::invalid_argument("monitor: theta must lie in (0, 1]");
    if (options_.window_size == 0 || options_.window_seconds <= 0) {
        throw std::invalid_argument("monitor: window must be positive");
    }
}

void Monitor::add_party(const PartyRecord& party) {
    builder_.add_party(party);
    graph_ = builder_.freeze();
}

std::vector<Alert> Monitor::process(const ReportRecord& report) {
    std::vector<Alert> released;
    if (!pending_.empty() && report.timestamp - window_start_ >= options_.window_seconds) released = flush();

    try {
        builder_.add_transaction(report);
    } catch (const std::exception& e) {
        skipped_.push_back({report.report_id, e.what()});
        return released;
    }
    graph_ = builder_.freeze();
    ++processed_;

    try {
        const PartyIndex seed = graph_.index_of(report.senders.front());
        Community community = extract(graph_, seed, options_.params);
        const auto features = featurize(graph_, community, FeatureSchema::standard(), options_.features);
        const double s = scorer_(features.values);
        if (s >= options_.tau) {
            if (pending_.empty()) window_start_ = report.timestamp;
            pending_.push_back({std::move(community), s, report.timestamp});
        }
    } catch (const SchemaMismatchError&) {
        throw;
    } catch (const std::exception& e) {
        skipped_.push_back({report.report_id, e.what()});
    }

    if (pending_.size() >= options_.window_size) {
        auto more = flush();
        released.insert(released.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    return released;
}

std::vector<Alert> Monitor::flush() {
    std::vector<Alert> alerts;
    if (pending_.empty()) return alerts;

    // Best score and latest time per seed; merged communities inherit the
    // maxima over their lineage.
    std::map<PartyIndex, std::pair<double, std::int64_t>> by_seed;
    std::vector<Community> communities;
    for (auto& p : pending_) {
        auto [it, fresh] = by_seed.try_emplace(p.community.seed, p.score, p.timestamp);
        if (!fresh) {
            it->second.first = std::max(it->second.first, p.score);
            it->second.second = std::max(it->second.second, p.timestamp);
        }
        communities.push_back(std::move(p.community));
    }
    pending_.clear();

    for (auto& c : merge_overlapping(graph_, deduplicate(std::move(communities)), options_.theta)) {
        Alert a;
        a.score = -std::numeric_limits<double>::infinity();
        for (PartyIndex s : c.lineage) {
            if (auto it = by_seed.find(s); it != by_seed.end()) {
                a.score = std::max(a.score, it->second.first);
                a.timestamp = std::max(a.timestamp, it->second.second);
            }
        }
        char id[24];
        std::snprintf(id, sizeof id, "A%08zu", ++alerts_emitted_);
        a.alert_id = id;
        a.tau = options_.tau;
        a.model_id = model_id_;
        a.lineage = c.lineage;
        a.community = std::move(c);
        alerts.push_back(std::move(a));
    }
    return alerts;
}

std::string to_json_line(const TransactionGraph& graph, const Alert& alert) {
    using nlohmann::json;
    json members = json::array();
    for (PartyIndex p : alert.community.members) members.push_back(graph.party(p).id);
    json lineage = json::array();
    for (PartyIndex p : alert.lineage) lineage.push_back(graph.party(p).id);
    std::set<std::string> report_ids;
    for (EdgeIndex e : alert.community.transactions) report_ids.insert(graph.transaction(e).report_id);
    json j{{"alert_id", alert.alert_id},
           {"seed", graph.party(alert.community.seed).id},
           {"members", members},
           {"score", alert.score},
           {"tau", alert.tau},
           {"model_id", alert.model_id},
           {"lineage", lineage},
           {"timestamp", format_timestamp(alert.timestamp)},
           {"transactions", report_ids}};
    return j.dump();
}

}  // namespace laundergraph
