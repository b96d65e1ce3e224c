#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "laundergraph/graph.hpp"

namespace laundergraph {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotMetadata {
    std::vector<std::string> source_files;
    std::uint64_t parties = 0;
    std::uint64_t transaction_edges = 0;
    std::uint64_t supplementary_edges = 0;
    std::uint64_t evidence_keys = 0;
    std::uint64_t associations = 0;
};

/// Binary container: "LGRF", u32 version, section table, little-endian
/// fixed-width tables, CRC-64 trailer. Output is a pure function of the graph
/// and the source-file list.
std::string serialize_snapshot(const TransactionGraph& graph,
                               const std::vector<std::string>& source_files = {});

/// Throws ChecksumError, VersionError or FormatError.
TransactionGraph deserialize_snapshot(std::string_view bytes, SnapshotMetadata* metadata = nullptr);

void save_snapshot(const TransactionGraph& graph, const std::filesystem::path& path,
                   const std::vector<std::string>& source_files = {});
TransactionGraph load_snapshot(const std::filesystem::path& path,
                               SnapshotMetadata* metadata = nullptr);

}  // namespace laundergraph
