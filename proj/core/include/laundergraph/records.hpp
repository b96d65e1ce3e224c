#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "laundergraph/types.hpp"

namespace laundergraph {

struct PartyRecord {
    std::string id;
    std::string country;
    std::optional<int> age;
    PartyKind party_kind = PartyKind::individual;
    bool tagged_suspicious = false;

    bool operator==(const PartyRecord&) const = default;
};

struct EvidenceAssociation {
    std::string party;
    EvidenceKey key;

    bool operator==(const EvidenceAssociation&) const = default;
};

// One regulatory report: every sender is linked to every receiver.
struct ReportRecord {
    std::string report_id;
    Channel channel = Channel::cash_deposit;
    std::vector<std::string> senders;
    std::vector<std::string> receivers;
    double amount = 0.0;
    std::string currency;
    std::int64_t timestamp = 0;
    std::vector<EvidenceAssociation> evidence_associations;

    bool operator==(const ReportRecord&) const = default;
};

}  // namespace laundergraph
