#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "laundergraph/records.hpp"

namespace laundergraph {

struct SynthConfig {
    std::size_t n_parties = 20000;
    std::size_t n_reports = 0;                // 0 = 1.5 reports per party
    double component_fraction = 0.22;         // connected components / parties
    double supplementary_ratio = 0.24;        // supplementary / transaction edges
    double core_fraction = 0.56;              // share of parties in the giant component
    std::size_t n_injected_groups = 20;
    std::size_t min_group_size = 5;
    std::size_t max_group_size = 20;
    std::size_t tagged_per_group = 1;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument on invalid values, including groups that
    /// cannot fit among the parties.
    void validate() const;
};

struct InjectedGroup {
    std::vector<std::string> mules;           // placement: sub-threshold cash deposits
    std::vector<std::string> intermediaries;  // layering across countries
    std::vector<std::string> beneficiaries;   // integration
    std::vector<std::string> tagged;
    std::vector<std::string> report_ids;      // every report the group itself produced

    std::vector<std::string> members() const;  // sorted
};

struct GroundTruth {
    std::vector<InjectedGroup> groups;

    std::vector<std::string> tagged_parties() const;  // sorted
    bool empty() const noexcept { return groups.empty(); }
};

// Generator-side bookkeeping used to cross-check ingestion.
struct CorpusTally {
    std::size_t reports = 0;
    std::size_t transaction_edges = 0;
    std::size_t self_loops = 0;
    std::size_t evidence_associations = 0;
};

struct SynthCorpus {
    std::vector<PartyRecord> parties;
    std::vector<ReportRecord> reports;  // ordered by timestamp
    GroundTruth truth;
    CorpusTally tally;
};

/// Background: a preferential-attachment core of international transfers and
/// many small clusters joined by cash deposits and transfers, plus
/// supplementary evidence between nearby parties. Each injected group runs
/// placement (mule cash deposits of 7,000 to 9,900 into intermediaries),
/// layering (a dense burst of transfers among intermediaries in at least two
/// countries inside 7 days) and integration (transfers to beneficiaries).
/// Mules are linked by shared accounts. Deterministic in config.seed.
SynthCorpus generate(const SynthConfig& config);

/// Parties then reports, one JSON object per line, readable by parse_reports.
void write_corpus(std::ostream& out, const SynthCorpus& corpus);
void write_corpus(const std::filesystem::path& path, const SynthCorpus& corpus);

/// One JSON object per group: group, members, mules, intermediaries,
/// beneficiaries, tagged, report_ids.
void write_ground_truth(std::ostream& out, const GroundTruth& truth);
void write_ground_truth(const std::filesystem::path& path, const GroundTruth& truth);
/// Throws FormatError on malformed lines.
GroundTruth read_ground_truth(std::istream& in);
GroundTruth read_ground_truth(const std::filesystem::path& path);

}  // namespace laundergraph
