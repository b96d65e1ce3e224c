#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace laundergraph {

// Dense index of a party inside one graph. Stable under append-only growth.
using PartyIndex = std::uint32_t;
// Index into a graph's transaction-edge table. Stable under append-only growth.
using EdgeIndex = std::uint32_t;
// Index into an EvidenceIndex key table.
using EvidenceId = std::uint32_t;

inline constexpr int kMaxAge = 130;

enum class PartyKind : std::uint8_t { individual = 0, business = 1 };
enum class Channel : std::uint8_t { cash_deposit = 0, international_transfer = 1 };
enum class EvidenceKind : std::uint8_t {
    shared_account = 0,
    shared_agent = 1,
    shared_geolocation = 2,
    other = 3,
};

std::string_view to_string(PartyKind kind);
std::string_view to_string(Channel channel);
std::string_view to_string(EvidenceKind kind);

// Throws std::invalid_argument for unknown names.
PartyKind parse_party_kind(std::string_view name);
Channel parse_channel(std::string_view name);
// Unknown evidence kinds map to EvidenceKind::other.
EvidenceKind parse_evidence_kind(std::string_view name);

struct Party {
    std::string id;
    std::string country;
    std::optional<int> age;
    PartyKind kind = PartyKind::individual;
    bool tagged_suspicious = false;

    bool operator==(const Party&) const = default;
};

struct TransactionEdge {
    PartyIndex src = 0;
    PartyIndex dst = 0;
    double amount = 0.0;
    std::string currency;
    std::int64_t timestamp = 0;  // UTC seconds since epoch
    Channel channel = Channel::cash_deposit;
    std::string report_id;

    bool is_self_loop() const noexcept { return src == dst; }
    bool operator==(const TransactionEdge&) const = default;
};

struct EvidenceKey {
    EvidenceKind kind = EvidenceKind::other;
    std::string value;

    auto operator<=>(const EvidenceKey&) const = default;
    bool operator==(const EvidenceKey&) const = default;
};

struct EvidenceKeyHash {
    std::size_t operator()(const EvidenceKey& key) const noexcept {
        return std::hash<std::string>{}(key.value) * 31u + static_cast<std::size_t>(key.kind);
    }
};

// Undirected summary edge between two parties that share supplementary
// evidence. Always stored with a < b.
struct SupplementaryEdge {
    PartyIndex a = 0;
    PartyIndex b = 0;
    double weight = 0.0;
    EvidenceId best_evidence = 0;

    bool operator==(const SupplementaryEdge&) const = default;
};

}  // namespace laundergraph
