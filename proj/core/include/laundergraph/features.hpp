#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laundergraph/community.hpp"

namespace laundergraph {

inline constexpr std::uint32_t kFeatureSchemaVersion = 1;
inline constexpr double kMissing = -1.0;

enum class FeatureCategory : std::uint8_t { demographic, network, transaction, dynamic };

std::string_view to_string(FeatureCategory category);

struct FeatureSpec {
    std::string name;
    FeatureCategory category;
    std::optional<double> sentinel;  // value used when the feature is undefined

    bool operator==(const FeatureSpec&) const = default;
};

class FeatureSchema {
public:
    FeatureSchema(std::uint32_t version, std::vector<FeatureSpec> specs);

    /// The fixed 30-feature layout produced by featurize.
    static const FeatureSchema& standard();

    std::uint32_t version() const noexcept { return version_; }
    std::size_t size() const noexcept { return specs_.size(); }
    std::span<const FeatureSpec> specs() const noexcept { return specs_; }
    std::vector<std::string> names() const;
    std::optional<std::size_t> index_of(std::string_view name) const;
    /// FNV-1a over version, names and categories; stored in model files.
    std::uint64_t hash() const noexcept;

    bool operator==(const FeatureSchema&) const = default;

private:
    std::uint32_t version_;
    std::vector<FeatureSpec> specs_;
};

struct FeatureOptions {
    std::int64_t bin_width = 86400;
    double burst_c = 2.0;
};

struct FeatureVector {
    PartyIndex seed = 0;
    std::vector<double> values;
};

// mean_age, min_age, max_age, business_fraction, distinct_countries, modal_country_fraction
std::vector<double> demographic_features(const TransactionGraph& graph, const Community& community);
// party_count, transaction_edge_count, supplementary_edge_count, density, transitivity,
// diameter, mean_degree, max_degree, mean_supplementary_weight
std::vector<double> network_features(const TransactionGraph& graph, const Community& community);
// transaction_count, total_cash_amount, mean_cash_amount, total_transfer_amount,
// mean_transfer_amount, distinct_currencies, cross_border_fraction, self_loop_count, max_amount
std::vector<double> transaction_features(const TransactionGraph& graph, const Community& community);
// burst_count, max_burst_intensity, burst_transaction_fraction, unusually_high_amounts,
// active_days, mean_inter_transaction_gap
std::vector<double> dynamic_features(const TransactionGraph& graph, const Community& community,
                                     const FeatureOptions& options = {});

/// Number of amounts at or above mean + 2 * population stddev; zero when the
/// amounts do not vary.
std::size_t count_unusually_high(std::span<const double> amounts);

/// Transitivity of an undirected simple graph given as an edge list:
/// 3 * triangles / connected triples, 0 when there are no triples.
double transitivity(std::size_t node_count, std::span<const std::pair<std::size_t, std::size_t>> edges);

/// Concatenates the four blocks. Throws SchemaMismatchError unless `schema`
/// equals FeatureSchema::standard().
FeatureVector featurize(const TransactionGraph& graph, const Community& community,
                        const FeatureSchema& schema = FeatureSchema::standard(),
                        const FeatureOptions& options = {});

std::vector<FeatureVector> featurize_all(const TransactionGraph& graph,
                                         std::span<const Community> communities,
                                         const FeatureSchema& schema = FeatureSchema::standard(),
                                         const FeatureOptions& options = {}, unsigned workers = 1);

/// Delimiter-separated feature matrix: `seed,label,<schema names>` header and
/// one row per community. Label -1 marks unlabeled rows.
struct FeatureTable {
    std::vector<std::string> names;
    std::vector<std::string> seeds;
    std::vector<int> labels;
    std::vector<std::vector<double>> rows;
};

void write_feature_csv(std::ostream& out, const FeatureTable& table);
/// Throws FormatError on malformed input.
FeatureTable read_feature_csv(std::istream& in);

}  // namespace laundergraph
