#include "laundergraph/types.hpp"

#include <stdexcept>

namespace laundergraph {

std::string_view to_string(PartyKind kind) {
    return kind == PartyKind::business ? "business" : "individual";
}

std::string_view to_string(Channel channel) {
    return channel == Channel::international_transfer ? "international_transfer" : "cash_deposit";
}

std::string_view to_string(EvidenceKind kind) {
    switch (kind) {
        case EvidenceKind::shared_account: return "shared_account";
        case EvidenceKind::shared_agent: return "shared_agent";
        case EvidenceKind::shared_geolocation: return "shared_geolocation";
        case EvidenceKind::other: break;
    }
    return "other";
}

PartyKind parse_party_kind(std::string_view name) {
    if (name == "individual") return PartyKind::individual;
    if (name == "business") return PartyKind::business;
    throw std::invalid_argument("unknown party_kind '" + std::string(name) + "'");
}

Channel parse_channel(std::string_view name) {
    if (name == "cash_deposit") return Channel::cash_deposit;
    if (name == "international_transfer") return Channel::international_transfer;
    throw std::invalid_argument("unknown channel '" + std::string(name) + "'");
}

EvidenceKind parse_evidence_kind(std::string_view name) {
    if (name == "shared_account") return EvidenceKind::shared_account;
    if (name == "shared_agent") return EvidenceKind::shared_agent;
    if (name == "shared_geolocation") return EvidenceKind::shared_geolocation;
    return EvidenceKind::other;
}

}  // namespace laundergraph
