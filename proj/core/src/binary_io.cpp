#include "binary_io.hpp"

#include <fstream>
#include <iterator>

#include <boost/crc.hpp>

namespace laundergraph::detail {

std::uint64_t crc64(std::string_view bytes) {
    // CRC-64/XZ (ECMA-182 polynomial, reflected, inverted).
    boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true> crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string write_container(std::string_view magic, std::uint32_t version,
                            const std::vector<Section>& sections) {
    ByteWriter w;
    w.put_bytes(magic);
    w.put(version);
    w.put(static_cast<std::uint32_t>(sections.size()));
    const std::size_t table_at = w.size();
    for (std::size_t i = 0; i < sections.size(); ++i) {
        w.put(std::uint32_t{0});
        w.put(std::uint32_t{0});
        w.put(std::uint64_t{0});
        w.put(std::uint64_t{0});
    }
    std::vector<std::uint64_t> offsets;
    for (const auto& s : sections) {
        w.pad_to(8);
        offsets.push_back(w.size());
        w.put_bytes(s.payload);
    }
    w.pad_to(8);
    std::string& bytes = w.bytes();
    for (std::size_t i = 0; i < sections.size(); ++i) {
        ByteWriter entry;
        entry.put(sections[i].tag);
        entry.put(std::uint32_t{0});
        entry.put(offsets[i]);
        entry.put(static_cast<std::uint64_t>(sections[i].payload.size()));
        bytes.replace(table_at + i * 24, 24, entry.bytes());
    }
    const std::uint64_t crc = crc64(bytes);
    w.put(crc);
    return std::move(w.bytes());
}

std::string_view ContainerView::section(std::uint32_t tag) const {
    for (const auto& [t, payload] : sections) {
        if (t == tag) return payload;
    }
    throw FormatError("container is missing a required section");
}

ContainerView read_container(std::string_view bytes, std::string_view magic,
                             std::uint32_t expected_version, std::string_view what) {
    const std::string kind(what);
    if (bytes.size() < magic.size() + 16 || bytes.substr(0, magic.size()) != magic) {
        // A truncated file can still carry the right magic; only reject the
        // prefix outright when it is clearly some other format.
        if (bytes.size() >= magic.size() && bytes.substr(0, magic.size()) != magic) {
            throw FormatError(kind + ": bad magic bytes");
        }
        throw ChecksumError(kind + ": file too short, checksum cannot validate");
    }
    const std::string_view body = bytes.substr(0, bytes.size() - 8);
    ByteReader trailer(bytes.substr(bytes.size() - 8));
    if (trailer.get<std::uint64_t>() != crc64(body)) {
        throw ChecksumError(kind + ": checksum mismatch (file truncated or corrupted)");
    }
    ByteReader r(body);
    r.seek(magic.size());
    ContainerView view;
    view.version = r.get<std::uint32_t>();
    if (view.version != expected_version) {
        throw VersionError(kind + ": unsupported format version " + std::to_string(view.version) +
                           " (expected " + std::to_string(expected_version) + ")");
    }
    const auto count = r.get<std::uint32_t>();
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto tag = r.get<std::uint32_t>();
        r.get<std::uint32_t>();
        const auto offset = r.get<std::uint64_t>();
        const auto length = r.get<std::uint64_t>();
        if (offset > body.size() || length > body.size() - offset) {
            throw FormatError(kind + ": section extends beyond file");
        }
        view.sections.emplace_back(tag, body.substr(offset, length));
    }
    return view;
}

}  // namespace laundergraph::detail
