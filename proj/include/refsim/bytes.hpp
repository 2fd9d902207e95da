#pragma once

#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace refsim {

// All multi-byte integers on the wire are big-endian.

class ByteWriter {
public:
    void put_u8(uint8_t v) { buf_.push_back(v); }

    void put_u32_be(uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<uint8_t>(v >> shift));
    }

    void put_u64_be(uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<uint8_t>(v >> shift));
    }

    void put_bytes(std::span<const uint8_t> bytes) {
        buf_.insert(buf_.end(), bytes.begin(), bytes.end());
    }

    // 4-byte big-endian length followed by the raw bytes.
    void put_prefixed(std::span<const uint8_t> bytes) {
        put_u32_be(static_cast<uint32_t>(bytes.size()));
        put_bytes(bytes);
    }

    void put_prefixed_string(std::string_view s) {
        put_u32_be(static_cast<uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    const std::vector<uint8_t>& bytes() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }
    size_t size() const { return buf_.size(); }

private:
    std::vector<uint8_t> buf_;
};

// Bounds-checked sequential reader. Every accessor reports failure instead
// of throwing; parse code turns failures into syntax classifications.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    bool read_u8(uint8_t& out) {
        if (pos_ + 1 > data_.size()) return false;
        out = data_[pos_++];
        return true;
    }

    bool read_u32_be(uint32_t& out) {
        if (pos_ + 4 > data_.size()) return false;
        out = 0;
        for (int i = 0; i < 4; ++i) out = (out << 8) | data_[pos_++];
        return true;
    }

    bool read_u64_be(uint64_t& out) {
        if (pos_ + 8 > data_.size()) return false;
        out = 0;
        for (int i = 0; i < 8; ++i) out = (out << 8) | data_[pos_++];
        return true;
    }

    bool read_bytes(size_t n, std::span<const uint8_t>& out) {
        if (pos_ + n > data_.size()) return false;
        out = data_.subspan(pos_, n);
        pos_ += n;
        return true;
    }

    bool read_into(std::span<uint8_t> out) {
        std::span<const uint8_t> view;
        if (!read_bytes(out.size(), view)) return false;
        std::copy(view.begin(), view.end(), out.begin());
        return true;
    }

    bool read_prefixed(std::span<const uint8_t>& out) {
        uint32_t len = 0;
        if (!read_u32_be(len)) return false;
        return read_bytes(len, out);
    }

    bool read_prefixed_string(std::string& out) {
        std::span<const uint8_t> raw;
        if (!read_prefixed(raw)) return false;
        out.assign(raw.begin(), raw.end());
        return true;
    }

    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

private:
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

inline std::string to_hex(std::span<const uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline std::string base64_encode(std::span<const uint8_t> data) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(alphabet[(v >> 18) & 0x3f]);
        out.push_back(alphabet[(v >> 12) & 0x3f]);
        out.push_back(alphabet[(v >> 6) & 0x3f]);
        out.push_back(alphabet[v & 0x3f]);
    }
    if (i + 1 == data.size()) {
        uint32_t v = data[i] << 16;
        out.push_back(alphabet[(v >> 18) & 0x3f]);
        out.push_back(alphabet[(v >> 12) & 0x3f]);
        out += "==";
    } else if (i + 2 == data.size()) {
        uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(alphabet[(v >> 18) & 0x3f]);
        out.push_back(alphabet[(v >> 12) & 0x3f]);
        out.push_back(alphabet[(v >> 6) & 0x3f]);
        out.push_back('=');
    }
    return out;
}

inline std::optional<std::vector<uint8_t>> base64_decode(std::string_view text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (text.size() % 4 != 0) return std::nullopt;
    std::vector<uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (size_t i = 0; i < text.size(); i += 4) {
        int pad = 0;
        uint32_t v = 0;
        for (size_t j = 0; j < 4; ++j) {
            char c = text[i + j];
            if (c == '=') {
                // padding only legal in the last two positions of the final group
                if (i + 4 != text.size() || j < 2) return std::nullopt;
                ++pad;
                v <<= 6;
                continue;
            }
            if (pad > 0) return std::nullopt;
            int d = value_of(c);
            if (d < 0) return std::nullopt;
            v = (v << 6) | static_cast<uint32_t>(d);
        }
        out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<uint8_t>(v & 0xff));
    }
    return out;
}

} // namespace refsim
