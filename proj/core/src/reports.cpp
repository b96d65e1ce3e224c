#include "laundergraph/reports.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "laundergraph/error.hpp"

namespace laundergraph {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || it->is_null()) {
        throw FormatError(std::string("missing field '") + field + "'");
    }
    return *it;
}

std::string require_string(const json& j, const char* field) {
    const auto& v = require(j, field);
    if (!v.is_string()) throw FormatError(std::string("field '") + field + "' must be a string");
    return v.get<std::string>();
}

std::vector<std::string> require_ids(const json& j, const char* field) {
    const auto& v = require(j, field);
    if (!v.is_array()) throw FormatError(std::string("field '") + field + "' must be an array");
    std::vector<std::string> ids;
    for (const auto& item : v) {
        if (!item.is_string()) {
            throw FormatError(std::string("field '") + field + "' must hold string ids");
        }
        ids.push_back(item.get<std::string>());
    }
    if (ids.empty()) throw FormatError(std::string("field '") + field + "' must not be empty");
    return ids;
}

json parse_object(std::string_view line) {
    json j = json::parse(line.begin(), line.end(), nullptr, false);
    if (j.is_discarded()) throw FormatError("invalid JSON");
    if (!j.is_object()) throw FormatError("record must be a JSON object");
    return j;
}

PartyRecord party_from_json(const json& j) {
    PartyRecord p;
    p.id = require_string(j, "id");
    if (p.id.empty()) throw FormatError("party id must not be empty");
    p.country = require_string(j, "country");
    if (auto it = j.find("age"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw FormatError("field 'age' must be an integer");
        const int age = it->get<int>();
        if (age < 0 || age > kMaxAge) throw FormatError("field 'age' outside [0, 130]");
        p.age = age;
    }
    try {
        p.party_kind = parse_party_kind(require_string(j, "party_kind"));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    if (auto it = j.find("tagged_suspicious"); it != j.end()) {
        if (!it->is_boolean()) throw FormatError("field 'tagged_suspicious' must be boolean");
        p.tagged_suspicious = it->get<bool>();
    }
    return p;
}

ReportRecord report_from_json(const json& j) {
    ReportRecord r;
    r.report_id = require_string(j, "report_id");
    try {
        r.channel = parse_channel(require_string(j, "channel"));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    r.senders = require_ids(j, "senders");
    r.receivers = require_ids(j, "receivers");
    const auto& amount = require(j, "amount");
    if (!amount.is_number()) throw FormatError("field 'amount' must be numeric");
    r.amount = amount.get<double>();
    if (!(r.amount >= 0.0)) throw FormatError("field 'amount' must be non-negative");
    r.currency = require_string(j, "currency");
    const auto& ts = require(j, "timestamp");
    if (ts.is_number_integer()) {
        r.timestamp = ts.get<std::int64_t>();
    } else if (ts.is_string()) {
        r.timestamp = parse_timestamp(ts.get<std::string>());
    } else {
        throw FormatError("field 'timestamp' must be an integer or ISO-8601 string");
    }
    if (auto it = j.find("evidence_associations"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw FormatError("field 'evidence_associations' must be an array");
        for (const auto& a : *it) {
            if (!a.is_object()) throw FormatError("evidence association must be an object");
            EvidenceAssociation assoc;
            assoc.party = require_string(a, "party");
            assoc.key.kind = parse_evidence_kind(require_string(a, "kind"));
            assoc.key.value = require_string(a, "value");
            r.evidence_associations.push_back(std::move(assoc));
        }
    }
    return r;
}

int two_digits(std::string_view s, std::size_t at) {
    if (at + 2 > s.size() || !std::isdigit(static_cast<unsigned char>(s[at])) ||
        !std::isdigit(static_cast<unsigned char>(s[at + 1]))) {
        throw FormatError("malformed timestamp '" + std::string(s) + "'");
    }
    return (s[at] - '0') * 10 + (s[at + 1] - '0');
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    if (text.empty()) throw FormatError("empty timestamp");
    const std::string_view digits = text.front() == '-' ? text.substr(1) : text;
    const bool numeric =
        !digits.empty() && digits.find_first_not_of("0123456789") == std::string_view::npos;
    if (numeric) {
        std::int64_t value = 0;
        std::istringstream in{std::string(text)};
        if (!(in >> value) || !in.eof()) throw FormatError("malformed timestamp");
        return value;
    }
    // YYYY-MM-DD
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        throw FormatError("malformed timestamp '" + std::string(text) + "'");
    }
    const int y = two_digits(text, 0) * 100 + two_digits(text, 2);
    const year_month_day date{year{y}, month{static_cast<unsigned>(two_digits(text, 5))},
                              day{static_cast<unsigned>(two_digits(text, 8))}};
    if (!date.ok()) throw FormatError("invalid calendar date '" + std::string(text) + "'");
    std::int64_t seconds = sys_days{date}.time_since_epoch().count() * 86400LL;
    if (text.size() == 10) return seconds;
    if (text[10] != 'T' && text[10] != ' ') throw FormatError("malformed timestamp");
    if (text.size() < 19 || text[13] != ':' || text[16] != ':') {
        throw FormatError("malformed timestamp '" + std::string(text) + "'");
    }
    const int hh = two_digits(text, 11), mm = two_digits(text, 14), ss = two_digits(text, 17);
    if (hh > 23 || mm > 59 || ss > 60) throw FormatError("time of day out of range");
    seconds += hh * 3600 + mm * 60 + ss;
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    if (pos == text.size()) return seconds;  // no designator: treated as UTC
    if (text[pos] == 'Z' && pos + 1 == text.size()) return seconds;
    if ((text[pos] == '+' || text[pos] == '-') && pos + 6 == text.size() && text[pos + 3] == ':') {
        const int offset = two_digits(text, pos + 1) * 3600 + two_digits(text, pos + 4) * 60;
        return text[pos] == '+' ? seconds - offset : seconds + offset;
    }
    throw FormatError("malformed timezone in '" + std::string(text) + "'");
}

std::string format_timestamp(std::int64_t seconds) {
    using namespace std::chrono;
    const auto days_since = seconds >= 0 ? seconds / 86400 : (seconds - 86399) / 86400;
    const std::int64_t rem = seconds - days_since * 86400;
    const year_month_day date{sys_days{days{days_since}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                  static_cast<int>(rem % 60));
    return buf;
}

PartyRecord parse_party_line(std::string_view line) { return party_from_json(parse_object(line)); }

ReportRecord parse_report_line(std::string_view line) { return report_from_json(parse_object(line)); }

ParsedReports parse_reports(std::istream& in) {
    ParsedReports out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++out.lines;
        try {
            const json j = parse_object(line);
            if (j.contains("report_id")) {
                out.reports.push_back(report_from_json(j));
            } else if (j.contains("id")) {
                out.parties.push_back(party_from_json(j));
            } else {
                throw FormatError("record has neither 'report_id' nor 'id'");
            }
        } catch (const FormatError& e) {
            out.errors.push_back({number, e.what()});
        } catch (const json::exception& e) {
            out.errors.push_back({number, e.what()});
        }
    }
    return out;
}

ParsedReports parse_reports(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open report file '" + path.string() + "'");
    return parse_reports(in);
}

std::string to_json_line(const PartyRecord& party) {
    json j;
    j["id"] = party.id;
    j["country"] = party.country;
    j["age"] = party.age ? json(*party.age) : json(nullptr);
    j["party_kind"] = std::string(to_string(party.party_kind));
    j["tagged_suspicious"] = party.tagged_suspicious;
    return j.dump();
}

std::string to_json_line(const ReportRecord& report) {
    json j;
    j["report_id"] = report.report_id;
    j["channel"] = std::string(to_string(report.channel));
    j["senders"] = report.senders;
    j["receivers"] = report.receivers;
    j["amount"] = report.amount;
    j["currency"] = report.currency;
    j["timestamp"] = format_timestamp(report.timestamp);
    json assoc = json::array();
    for (const auto& a : report.evidence_associations) {
        assoc.push_back({{"party", a.party},
                         {"kind", std::string(to_string(a.key.kind))},
                         {"value", a.key.value}});
    }
    j["evidence_associations"] = std::move(assoc);
    return j.dump();
}

TransactionGraph build_graph(const std::vector<PartyRecord>& parties,
                             const std::vector<ReportRecord>& reports) {
    GraphBuilder builder;
    for (const auto& p : parties) {
        try {
            builder.add_party(p);
        } catch (const std::invalid_argument& e) {
            throw Error(e.what());
        }
    }
    for (const auto& r : reports) {
        try {
            builder.add_transaction(r);
        } catch (const std::invalid_argument& e) {
            throw Error("build_graph: " + std::string(e.what()));
        }
    }
    return builder.freeze();
}

}  // namespace laundergraph
