#include "laundergraph/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "laundergraph/burst.hpp"
#include "laundergraph/error.hpp"
#include "laundergraph/parallel.hpp"

namespace laundergraph {

std::string_view to_string(FeatureCategory category) {
    switch (category) {
        case FeatureCategory::demographic: return "demographic";
        case FeatureCategory::network: return "network";
        case FeatureCategory::transaction: return "transaction";
        case FeatureCategory::dynamic: return "dynamic";
    }
    return "unknown";
}

FeatureSchema::FeatureSchema(std::uint32_t version, std::vector<FeatureSpec> specs)
    : version_(version), specs_(std::move(specs)) {
    std::set<std::string> seen;
    for (const auto& s : specs_) {
        if (!seen.insert(s.name).second) {
            throw std::invalid_argument("feature schema: duplicate name '" + s.name + "'");
        }
    }
}

const FeatureSchema& FeatureSchema::standard() {
    using C = FeatureCategory;
    static const FeatureSchema schema(kFeatureSchemaVersion, {
        {"mean_age", C::demographic, kMissing},
        {"min_age", C::demographic, kMissing},
        {"max_age", C::demographic, kMissing},
        {"business_fraction", C::demographic, std::nullopt},
        {"distinct_countries", C::demographic, std::nullopt},
        {"modal_country_fraction", C::demographic, std::nullopt},
        {"party_count", C::network, std::nullopt},
        {"transaction_edge_count", C::network, std::nullopt},
        {"supplementary_edge_count", C::network, std::nullopt},
        {"density", C::network, std::nullopt},
        {"transitivity", C::network, std::nullopt},
        {"diameter", C::network, std::nullopt},
        {"mean_degree", C::network, std::nullopt},
        {"max_degree", C::network, std::nullopt},
        {"mean_supplementary_weight", C::network, std::nullopt},
        {"transaction_count", C::transaction, std::nullopt},
        {"total_cash_amount", C::transaction, std::nullopt},
        {"mean_cash_amount", C::transaction, std::nullopt},
        {"total_transfer_amount", C::transaction, std::nullopt},
        {"mean_transfer_amount", C::transaction, std::nullopt},
        {"distinct_currencies", C::transaction, std::nullopt},
        {"cross_border_fraction", C::transaction, std::nullopt},
        {"self_loop_count", C::transaction, std::nullopt},
        {"max_amount", C::transaction, std::nullopt},
        {"burst_count", C::dynamic, std::nullopt},
        {"max_burst_intensity", C::dynamic, std::nullopt},
        {"burst_transaction_fraction", C::dynamic, std::nullopt},
        {"unusually_high_amounts", C::dynamic, std::nullopt},
        {"active_days", C::dynamic, std::nullopt},
        {"mean_inter_transaction_gap", C::dynamic, kMissing},
    });
    return schema;
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    out.reserve(specs_.size());
    for (const auto& s : specs_) out.push_back(s.name);
    return out;
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (specs_[i].name == name) return i;
    }
    return std::nullopt;
}

std::uint64_t FeatureSchema::hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (int shift = 0; shift < 32; shift += 8) mix(static_cast<unsigned char>(version_ >> shift));
    for (const auto& s : specs_) {
        for (char ch : s.name) mix(static_cast<unsigned char>(ch));
        mix(0);
        mix(static_cast<unsigned char>(s.category));
    }
    return h;
}

std::vector<double> demographic_features(const TransactionGraph& graph, const Community& community) {
    double age_sum = 0.0;
    int age_min = kMaxAge + 1, age_max = -1;
    std::size_t known = 0, businesses = 0;
    std::map<std::string, std::size_t> countries;
    for (PartyIndex p : community.members) {
        const Party& party = graph.party(p);
        if (party.age) {
            ++known;
            age_sum += *party.age;
            age_min = std::min(age_min, *party.age);
            age_max = std::max(age_max, *party.age);
        }
        if (party.kind == PartyKind::business) ++businesses;
        ++countries[party.country];
    }
    const auto n = static_cast<double>(community.members.size());
    std::size_t modal = 0;
    for (const auto& [country, count] : countries) modal = std::max(modal, count);
    return {
        known ? age_sum / static_cast<double>(known) : kMissing,
        known ? static_cast<double>(age_min) : kMissing,
        known ? static_cast<double>(age_max) : kMissing,
        n > 0 ? static_cast<double>(businesses) / n : 0.0,
        static_cast<double>(countries.size()),
        n > 0 ? static_cast<double>(modal) / n : 0.0,
    };
}

double transitivity(std::size_t node_count,
                    std::span<const std::pair<std::size_t, std::size_t>> edges) {
    std::vector<std::vector<std::size_t>> adjacency(node_count);
    for (const auto& [a, b] : edges) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    for (auto& row : adjacency) std::sort(row.begin(), row.end());
    double triples = 0.0, closed = 0.0;
    for (std::size_t u = 0; u < node_count; ++u) {
        const auto& row = adjacency[u];
        const double d = static_cast<double>(row.size());
        triples += d * (d - 1.0) / 2.0;
        // Each triangle is counted once per corner.
        for (std::size_t i = 0; i < row.size(); ++i) {
            for (std::size_t j = i + 1; j < row.size(); ++j) {
                const auto& other = adjacency[row[i]];
                if (std::binary_search(other.begin(), other.end(), row[j])) closed += 1.0;
            }
        }
    }
    return triples > 0.0 ? closed / triples : 0.0;
}

std::vector<double> network_features(const TransactionGraph& graph, const Community& community) {
    const auto& members = community.members;
    const std::size_t n = members.size();
    auto local = [&](PartyIndex p) {
        return static_cast<std::size_t>(std::lower_bound(members.begin(), members.end(), p) -
                                        members.begin());
    };
    std::set<std::pair<std::size_t, std::size_t>> simple;
    for (EdgeIndex e : community.transactions) {
        const auto& t = graph.transaction(e);
        if (t.is_self_loop()) continue;
        const auto a = local(t.src), b = local(t.dst);
        simple.emplace(std::min(a, b), std::max(a, b));
    }
    double weight_sum = 0.0;
    for (const auto& s : community.supplementary) {
        const auto a = local(s.a), b = local(s.b);
        simple.emplace(std::min(a, b), std::max(a, b));
        weight_sum += s.weight;
    }
    const std::vector<std::pair<std::size_t, std::size_t>> edges(simple.begin(), simple.end());
    std::vector<std::size_t> degree(n, 0);
    for (const auto& [a, b] : edges) {
        ++degree[a];
        ++degree[b];
    }
    const double e = static_cast<double>(edges.size());
    const double dn = static_cast<double>(n);
    const double density = n > 1 ? e / (dn * (dn - 1.0) / 2.0) : 0.0;
    const std::size_t max_degree = n ? *std::max_element(degree.begin(), degree.end()) : 0;
    return {
        dn,
        static_cast<double>(community.transactions.size()),
        static_cast<double>(community.supplementary.size()),
        density,
        transitivity(n, edges),
        static_cast<double>(diameter(graph, community)),
        n ? 2.0 * e / dn : 0.0,
        static_cast<double>(max_degree),
        community.supplementary.empty()
            ? 0.0
            : weight_sum / static_cast<double>(community.supplementary.size()),
    };
}

std::vector<double> transaction_features(const TransactionGraph& graph, const Community& community) {
    double cash_total = 0.0, transfer_total = 0.0, max_amount = 0.0;
    std::size_t cash = 0, transfers = 0, cross_border = 0, self_loops = 0;
    std::set<std::string_view> currencies;
    for (EdgeIndex e : community.transactions) {
        const auto& t = graph.transaction(e);
        if (t.channel == Channel::cash_deposit) {
            cash_total += t.amount;
            ++cash;
        } else {
            transfer_total += t.amount;
            ++transfers;
        }
        max_amount = std::max(max_amount, t.amount);
        currencies.insert(t.currency);
        if (t.is_self_loop()) ++self_loops;
        if (graph.party(t.src).country != graph.party(t.dst).country) ++cross_border;
    }
    const std::size_t count = community.transactions.size();
    return {
        static_cast<double>(count),
        cash_total,
        cash ? cash_total / static_cast<double>(cash) : 0.0,
        transfer_total,
        transfers ? transfer_total / static_cast<double>(transfers) : 0.0,
        static_cast<double>(currencies.size()),
        count ? static_cast<double>(cross_border) / static_cast<double>(count) : 0.0,
        static_cast<double>(self_loops),
        max_amount,
    };
}

std::size_t count_unusually_high(std::span<const double> amounts) {
    if (amounts.size() < 2) return 0;
    double mean = 0.0;
    for (double a : amounts) mean += a;
    mean /= static_cast<double>(amounts.size());
    double var = 0.0;
    for (double a : amounts) var += (a - mean) * (a - mean);
    const double sd = std::sqrt(var / static_cast<double>(amounts.size()));
    if (sd == 0.0) return 0;
    const double threshold = mean + 2.0 * sd;
    return static_cast<std::size_t>(
        std::count_if(amounts.begin(), amounts.end(), [&](double a) { return a >= threshold; }));
}

std::vector<double> dynamic_features(const TransactionGraph& graph, const Community& community,
                                     const FeatureOptions& options) {
    std::vector<std::int64_t> timestamps;
    std::vector<double> amounts;
    timestamps.reserve(community.transactions.size());
    amounts.reserve(community.transactions.size());
    for (EdgeIndex e : community.transactions) {
        timestamps.push_back(graph.transaction(e).timestamp);
        amounts.push_back(graph.transaction(e).amount);
    }

    double burst_count = 0.0, max_intensity = 0.0, burst_fraction = 0.0;
    const BinnedSeries series = bin_series(timestamps, amounts, options.bin_width);
    if (series.counts.size() >= 2) {
        const auto bursts = burst_detect(series, options.burst_c);
        double inside = 0.0;
        for (const auto& b : bursts) {
            max_intensity = std::max(max_intensity, b.intensity);
            for (std::size_t i = b.start_bin; i <= b.end_bin; ++i) inside += series.counts[i];
        }
        burst_count = static_cast<double>(bursts.size());
        burst_fraction = inside / static_cast<double>(timestamps.size());
    }

    std::unordered_set<std::int64_t> days;
    for (auto ts : timestamps) days.insert(ts >= 0 ? ts / 86400 : (ts - 86399) / 86400);

    double mean_gap = kMissing;
    if (timestamps.size() >= 2) {
        std::sort(timestamps.begin(), timestamps.end());
        mean_gap = static_cast<double>(timestamps.back() - timestamps.front()) /
                   static_cast<double>(timestamps.size() - 1);
    }
    return {
        burst_count,
        max_intensity,
        burst_fraction,
        static_cast<double>(count_unusually_high(amounts)),
        static_cast<double>(days.size()),
        mean_gap,
    };
}

FeatureVector featurize(const TransactionGraph& graph, const Community& community,
                        const FeatureSchema& schema, const FeatureOptions& options) {
    if (!(schema == FeatureSchema::standard())) {
        throw SchemaMismatchError("featurize: schema (version " + std::to_string(schema.version()) +
                                  ") does not match the computed feature layout");
    }
    FeatureVector v;
    v.seed = community.seed;
    v.values.reserve(schema.size());
    for (auto block : {demographic_features(graph, community), network_features(graph, community),
                       transaction_features(graph, community),
                       dynamic_features(graph, community, options)}) {
        v.values.insert(v.values.end(), block.begin(), block.end());
    }
    return v;
}

std::vector<FeatureVector> featurize_all(const TransactionGraph& graph,
                                         std::span<const Community> communities,
                                         const FeatureSchema& schema, const FeatureOptions& options,
                                         unsigned workers) {
    std::vector<FeatureVector> out(communities.size());
    parallel_for(communities.size(), workers,
                 [&](std::size_t i) { out[i] = featurize(graph, communities[i], schema, options); });
    return out;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
    out << "seed,label";
    for (const auto& name : table.names) out << ',' << name;
    out << '\n';
    char buf[32];
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << table.seeds[r] << ',' << table.labels[r];
        for (double v : table.rows[r]) {
            const auto res = std::to_chars(buf, buf + sizeof buf, v);
            out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << '\n';
    }
}

FeatureTable read_feature_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    FeatureTable table;
    std::string line;
    if (!std::getline(in, line)) throw FormatError("feature table: missing header");
    auto header = split(line);
    if (header.size() < 2 || header[0] != "seed" || header[1] != "label") {
        throw FormatError("feature table: header must start with 'seed,label'");
    }
    table.names.assign(header.begin() + 2, header.end());
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != header.size()) {
            throw FormatError("feature table: line " + std::to_string(number) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
        }
        table.seeds.push_back(cells[0]);
        int label = 0;
        if (std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), label).ec != std::errc{}) {
            throw FormatError("feature table: bad label on line " + std::to_string(number));
        }
        table.labels.push_back(label);
        std::vector<double> row(cells.size() - 2);
        for (std::size_t i = 2; i < cells.size(); ++i) {
            const auto& c = cells[i];
            auto res = std::from_chars(c.data(), c.data() + c.size(), row[i - 2]);
            if (res.ec != std::errc{} || res.ptr != c.data() + c.size() || !std::isfinite(row[i - 2])) {
                throw FormatError("feature table: bad value '" + c + "' on line " + std::to_string(number));
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace laundergraph
