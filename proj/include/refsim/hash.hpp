#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <openssl/evp.h>

namespace refsim {

using Digest32 = std::array<uint8_t, 32>;

inline Digest32 sha256(std::span<const uint8_t> data) {
    Digest32 out{};
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
    return out;
}

// RFC 2104 HMAC over SHA-256. Keys used in this project are at most 64 bytes,
// which is the SHA-256 block size, so no pre-hashing step is needed.
inline Digest32 hmac_sha256(std::span<const uint8_t> key,
                            std::span<const uint8_t> data) {
    constexpr size_t kBlock = 64;
    std::array<uint8_t, kBlock> padded{};
    if (key.size() > kBlock) {
        Digest32 kh = sha256(key);
        std::copy(kh.begin(), kh.end(), padded.begin());
    } else {
        std::copy(key.begin(), key.end(), padded.begin());
    }

    std::array<uint8_t, kBlock> ipad{};
    std::array<uint8_t, kBlock> opad{};
    for (size_t i = 0; i < kBlock; ++i) {
        ipad[i] = padded[i] ^ 0x36;
        opad[i] = padded[i] ^ 0x5c;
    }

    std::vector<uint8_t> inner;
    inner.reserve(kBlock + data.size());
    inner.insert(inner.end(), ipad.begin(), ipad.end());
    inner.insert(inner.end(), data.begin(), data.end());
    Digest32 inner_hash = sha256(inner);

    std::vector<uint8_t> outer;
    outer.reserve(kBlock + inner_hash.size());
    outer.insert(outer.end(), opad.begin(), opad.end());
    outer.insert(outer.end(), inner_hash.begin(), inner_hash.end());
    return sha256(outer);
}

} // namespace refsim
