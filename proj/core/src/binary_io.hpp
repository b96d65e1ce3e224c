#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "laundergraph/error.hpp"

namespace laundergraph::detail {

static_assert(std::endian::native == std::endian::little,
              "binary containers are written little-endian; big-endian hosts need byte swapping");

std::uint64_t crc64(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

class ByteWriter {
public:
    template <typename T>
        requires std::is_arithmetic_v<T>
    void put(T value) {
        char raw[sizeof(T)];
        std::memcpy(raw, &value, sizeof(T));
        bytes_.append(raw, sizeof(T));
    }

    void put_bytes(std::string_view raw) { bytes_.append(raw); }
    void put_string(std::string_view s) {
        put(static_cast<std::uint32_t>(s.size()));
        bytes_.append(s);
    }
    void pad_to(std::size_t alignment) {
        while (bytes_.size() % alignment != 0) bytes_.push_back('\0');
    }

    std::size_t size() const noexcept { return bytes_.size(); }
    std::string& bytes() noexcept { return bytes_; }

private:
    std::string bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
        requires std::is_arithmetic_v<T>
    T get() {
        need(sizeof(T));
        T value;
        std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return value;
    }

    std::string_view get_bytes(std::size_t n) {
        need(n);
        auto out = bytes_.substr(pos_, n);
        pos_ += n;
        return out;
    }
    std::string get_string() { return std::string(get_bytes(get<std::uint32_t>())); }

    void seek(std::size_t pos) {
        if (pos > bytes_.size()) throw FormatError("offset beyond end of container");
        pos_ = pos;
    }
    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (n > bytes_.size() - pos_) throw FormatError("unexpected end of container");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

// Four-character section tag packed little-endian.
constexpr std::uint32_t fourcc(const char (&tag)[5]) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(tag[0])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(tag[1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(tag[2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(tag[3])) << 24;
}

// Container layout shared by snapshots and model files:
//   magic[4] | u32 version | u32 section count | {u32 tag, u32 pad, u64 offset, u64 length}*
//   | section payloads (8-byte aligned) | u64 CRC-64/XZ of everything before it
struct Section {
    std::uint32_t tag;
    std::string payload;
};

std::string write_container(std::string_view magic, std::uint32_t version,
                            const std::vector<Section>& sections);

struct ContainerView {
    std::uint32_t version = 0;
    std::vector<std::pair<std::uint32_t, std::string_view>> sections;

    std::string_view section(std::uint32_t tag) const;
};

/// Validates magic, checksum and version; the returned views alias `bytes`.
ContainerView read_container(std::string_view bytes, std::string_view magic,
                             std::uint32_t expected_version, std::string_view what);

}  // namespace laundergraph::detail
