#include "laundergraph/snapshot.hpp"

#include <unordered_map>

#include "binary_io.hpp"

namespace laundergraph {

namespace {

using detail::ByteReader;
using detail::ByteWriter;
using detail::fourcc;

constexpr std::string_view kMagic = "LGRF";
constexpr std::uint32_t kMeta = fourcc("META");
constexpr std::uint32_t kStrings = fourcc("STRS");
constexpr std::uint32_t kParties = fourcc("PRTY");
constexpr std::uint32_t kTransactions = fourcc("TXNS");
constexpr std::uint32_t kSupplementary = fourcc("SUPP");
constexpr std::uint32_t kEvidenceKeys = fourcc("EVKY");
constexpr std::uint32_t kAssociations = fourcc("EVAS");

class StringTable {
public:
    std::uint32_t intern(const std::string& s) {
        auto [it, inserted] = ids_.try_emplace(s, static_cast<std::uint32_t>(strings_.size()));
        if (inserted) strings_.push_back(s);
        return it->second;
    }

    std::string payload() const {
        ByteWriter w;
        w.put(static_cast<std::uint64_t>(strings_.size()));
        std::uint64_t offset = 0;
        for (const auto& s : strings_) {
            w.put(offset);
            offset += s.size();
        }
        w.put(offset);
        for (const auto& s : strings_) w.put_bytes(s);
        return std::move(w.bytes());
    }

private:
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::string> strings_;
};

std::vector<std::string> read_strings(std::string_view payload) {
    ByteReader r(payload);
    const auto count = r.get<std::uint64_t>();
    if (count > payload.size()) throw FormatError("snapshot: implausible string count");
    std::vector<std::uint64_t> offsets(count + 1);
    for (auto& o : offsets) o = r.get<std::uint64_t>();
    const std::string_view blob = r.get_bytes(r.remaining());
    std::vector<std::string> strings;
    strings.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        if (offsets[i] > offsets[i + 1] || offsets[i + 1] > blob.size()) {
            throw FormatError("snapshot: corrupt string table");
        }
        strings.emplace_back(blob.substr(offsets[i], offsets[i + 1] - offsets[i]));
    }
    return strings;
}

const std::string& lookup(const std::vector<std::string>& strings, std::uint32_t id) {
    if (id >= strings.size()) throw FormatError("snapshot: string reference out of range");
    return strings[id];
}

std::uint64_t table_count(ByteReader& r, std::size_t row_size) {
    const auto count = r.get<std::uint64_t>();
    if (count * row_size != r.remaining()) {
        throw FormatError("snapshot: table size does not match its row count");
    }
    return count;
}

}  // namespace

std::string serialize_snapshot(const TransactionGraph& graph,
                               const std::vector<std::string>& source_files) {
    StringTable strings;

    ByteWriter parties;
    parties.put(static_cast<std::uint64_t>(graph.party_count()));
    for (const auto& p : graph.parties()) {
        parties.put(strings.intern(p.id));
        parties.put(strings.intern(p.country));
        parties.put(static_cast<std::int32_t>(p.age.value_or(-1)));
        parties.put(static_cast<std::uint8_t>(p.kind));
        parties.put(static_cast<std::uint8_t>(p.tagged_suspicious ? 1 : 0));
        parties.put(std::uint16_t{0});
    }

    ByteWriter transactions;
    transactions.put(static_cast<std::uint64_t>(graph.transactions().size()));
    for (const auto& t : graph.transactions()) {
        transactions.put(t.src);
        transactions.put(t.dst);
        transactions.put(t.amount);
        transactions.put(t.timestamp);
        transactions.put(strings.intern(t.currency));
        transactions.put(strings.intern(t.report_id));
        transactions.put(static_cast<std::uint8_t>(t.channel));
        for (int i = 0; i < 7; ++i) transactions.put(std::uint8_t{0});
    }

    ByteWriter supplementary;
    supplementary.put(static_cast<std::uint64_t>(graph.supplementary_edges().size()));
    for (const auto& s : graph.supplementary_edges()) {
        supplementary.put(s.a);
        supplementary.put(s.b);
        supplementary.put(s.weight);
        supplementary.put(s.best_evidence);
        supplementary.put(std::uint32_t{0});
    }

    const auto& evidence = graph.evidence();
    ByteWriter keys;
    ByteWriter associations;
    keys.put(static_cast<std::uint64_t>(evidence.size()));
    associations.put(static_cast<std::uint64_t>(evidence.association_total()));
    for (EvidenceId e = 0; e < evidence.size(); ++e) {
        keys.put(strings.intern(evidence.key(e).value));
        keys.put(static_cast<std::uint8_t>(evidence.key(e).kind));
        for (int i = 0; i < 3; ++i) keys.put(std::uint8_t{0});
        keys.put(evidence.transaction_count(e));
        for (const auto& holder : evidence.parties_of(e)) {
            associations.put(e);
            associations.put(holder.party);
            associations.put(holder.count);
        }
    }

    ByteWriter meta;
    meta.put(static_cast<std::uint64_t>(graph.party_count()));
    meta.put(static_cast<std::uint64_t>(graph.transactions().size()));
    meta.put(static_cast<std::uint64_t>(graph.supplementary_edges().size()));
    meta.put(static_cast<std::uint64_t>(evidence.size()));
    meta.put(static_cast<std::uint64_t>(evidence.association_total()));
    meta.put(static_cast<std::uint32_t>(source_files.size()));
    for (const auto& f : source_files) meta.put_string(f);

    return detail::write_container(kMagic, kSnapshotVersion,
                                   {{kMeta, std::move(meta.bytes())},
                                    {kStrings, strings.payload()},
                                    {kParties, std::move(parties.bytes())},
                                    {kTransactions, std::move(transactions.bytes())},
                                    {kSupplementary, std::move(supplementary.bytes())},
                                    {kEvidenceKeys, std::move(keys.bytes())},
                                    {kAssociations, std::move(associations.bytes())}});
}

TransactionGraph deserialize_snapshot(std::string_view bytes, SnapshotMetadata* metadata) {
    const auto view = detail::read_container(bytes, kMagic, kSnapshotVersion, "snapshot");

    SnapshotMetadata meta;
    {
        ByteReader r(view.section(kMeta));
        meta.parties = r.get<std::uint64_t>();
        meta.transaction_edges = r.get<std::uint64_t>();
        meta.supplementary_edges = r.get<std::uint64_t>();
        meta.evidence_keys = r.get<std::uint64_t>();
        meta.associations = r.get<std::uint64_t>();
        const auto files = r.get<std::uint32_t>();
        for (std::uint32_t i = 0; i < files; ++i) meta.source_files.push_back(r.get_string());
    }
    const auto strings = read_strings(view.section(kStrings));

    std::vector<Party> parties;
    {
        ByteReader r(view.section(kParties));
        const auto count = table_count(r, 16);
        parties.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            Party p;
            p.id = lookup(strings, r.get<std::uint32_t>());
            p.country = lookup(strings, r.get<std::uint32_t>());
            const auto age = r.get<std::int32_t>();
            if (age >= 0) p.age = age;
            p.kind = static_cast<PartyKind>(r.get<std::uint8_t>());
            p.tagged_suspicious = r.get<std::uint8_t>() != 0;
            r.get<std::uint16_t>();
            parties.push_back(std::move(p));
        }
    }

    std::vector<TransactionEdge> transactions;
    {
        ByteReader r(view.section(kTransactions));
        const auto count = table_count(r, 40);
        transactions.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            TransactionEdge t;
            t.src = r.get<PartyIndex>();
            t.dst = r.get<PartyIndex>();
            t.amount = r.get<double>();
            t.timestamp = r.get<std::int64_t>();
            t.currency = lookup(strings, r.get<std::uint32_t>());
            t.report_id = lookup(strings, r.get<std::uint32_t>());
            t.channel = static_cast<Channel>(r.get<std::uint8_t>());
            r.get_bytes(7);
            transactions.push_back(std::move(t));
        }
    }

    std::vector<SupplementaryEdge> supplementary;
    {
        ByteReader r(view.section(kSupplementary));
        const auto count = table_count(r, 24);
        supplementary.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            SupplementaryEdge s;
            s.a = r.get<PartyIndex>();
            s.b = r.get<PartyIndex>();
            s.weight = r.get<double>();
            s.best_evidence = r.get<EvidenceId>();
            r.get<std::uint32_t>();
            supplementary.push_back(s);
        }
    }

    EvidenceIndex evidence;
    {
        ByteReader r(view.section(kEvidenceKeys));
        const auto count = table_count(r, 16);
        for (std::uint64_t i = 0; i < count; ++i) {
            EvidenceKey key;
            key.value = lookup(strings, r.get<std::uint32_t>());
            key.kind = static_cast<EvidenceKind>(r.get<std::uint8_t>());
            r.get_bytes(3);
            evidence.add_key(key, r.get<std::uint64_t>());
        }
        ByteReader a(view.section(kAssociations));
        const auto pairs = table_count(a, 16);
        for (std::uint64_t i = 0; i < pairs; ++i) {
            const auto e = a.get<EvidenceId>();
            const auto party = a.get<PartyIndex>();
            const auto n = a.get<std::uint64_t>();
            if (party >= parties.size()) throw FormatError("snapshot: association party out of range");
            try {
                evidence.add_association(party, e, n);
            } catch (const std::exception& ex) {
                throw FormatError(std::string("snapshot: ") + ex.what());
            }
        }
    }

    if (meta.parties != parties.size() || meta.transaction_edges != transactions.size() ||
        meta.supplementary_edges != supplementary.size() || meta.evidence_keys != evidence.size() ||
        meta.associations != evidence.association_total()) {
        throw FormatError("snapshot: metadata counts do not match tables");
    }
    if (metadata) *metadata = meta;

    try {
        return TransactionGraph(std::move(parties), std::move(transactions), std::move(supplementary),
                                std::move(evidence));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("snapshot: ") + e.what());
    }
}

void save_snapshot(const TransactionGraph& graph, const std::filesystem::path& path,
                   const std::vector<std::string>& source_files) {
    detail::write_file(path, serialize_snapshot(graph, source_files));
}

TransactionGraph load_snapshot(const std::filesystem::path& path, SnapshotMetadata* metadata) {
    return deserialize_snapshot(detail::read_file(path), metadata);
}

}  // namespace laundergraph
