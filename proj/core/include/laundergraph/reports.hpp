#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "laundergraph/graph.hpp"
#include "laundergraph/records.hpp"

namespace laundergraph {

struct LineError {
    std::size_t line = 0;  // 1-based
    std::string message;
};

struct ParsedReports {
    std::vector<PartyRecord> parties;
    std::vector<ReportRecord> reports;
    std::vector<LineError> errors;
    std::size_t lines = 0;  // non-blank lines seen

    std::size_t accepted() const noexcept { return parties.size() + reports.size(); }
};

/// Parses a JSON Lines report file. A line is a report when it carries
/// `report_id`, a party when it carries `id`. Malformed lines are recorded
/// in `errors` and skipped. Throws laundergraph::Error if the file cannot be read.
ParsedReports parse_reports(const std::filesystem::path& path);
ParsedReports parse_reports(std::istream& in);

/// Parses one line. Throws FormatError describing the first schema violation.
PartyRecord parse_party_line(std::string_view line);
ReportRecord parse_report_line(std::string_view line);

std::string to_json_line(const PartyRecord& party);
std::string to_json_line(const ReportRecord& report);

/// Accepts integer seconds or ISO-8601 (`YYYY-MM-DDTHH:MM:SS[.fff](Z|±HH:MM)`,
/// or a bare date). Throws FormatError otherwise.
std::int64_t parse_timestamp(std::string_view text);
std::string format_timestamp(std::int64_t seconds);

/// Adds every party, applies every report and freezes. Throws
/// laundergraph::Error naming the report id on a dangling party reference.
TransactionGraph build_graph(const std::vector<PartyRecord>& parties,
                             const std::vector<ReportRecord>& reports);

}  // namespace laundergraph
