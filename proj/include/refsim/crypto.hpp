#pragma once

// Keypairs, signatures, public-key encryption of shares, and identifier
// derivation. The public key doubles as the participant identifier.
//
// This suite is simulation-grade: signatures are HMAC tags keyed on the
// public verification half of the identifier, and encryption is an
// authenticated keyed stream transform. Both are deterministic given the
// scenario seed, which is what makes ledger dumps reproducible. Anyone
// holding an identifier could mint tags or read ciphertexts for it; the
// protocol model assumes participants do not (unforgeable signatures are an
// assumption, not something this simulator re-proves). Swap in a real
// signature + authenticated public-key encryption scheme behind the same
// call surface for any non-simulation use.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "refsim/bytes.hpp"
#include "refsim/errors.hpp"
#include "refsim/hash.hpp"
#include "refsim/rng.hpp"

namespace refsim {

// Canonical public-key encoding: 16 bytes of verification key followed by
// 16 bytes of encryption key, both derived one-way from the private seed.
struct ParticipantId {
    static constexpr size_t kSize = 32;

    std::array<uint8_t, kSize> bytes{};

    static std::optional<ParticipantId> parse(std::span<const uint8_t> raw) {
        if (raw.size() != kSize) return std::nullopt;
        ParticipantId id;
        std::copy(raw.begin(), raw.end(), id.bytes.begin());
        return id;
    }

    std::span<const uint8_t, 16> verify_key() const {
        return std::span<const uint8_t, 16>(bytes.data(), 16);
    }
    std::span<const uint8_t, 16> encrypt_key() const {
        return std::span<const uint8_t, 16>(bytes.data() + 16, 16);
    }

    std::string hex() const { return to_hex(bytes); }
    std::string short_hex() const { return hex().substr(0, 8); }

    auto operator<=>(const ParticipantId&) const = default;
};

struct KeyPair {
    ParticipantId id;
    std::array<uint8_t, 32> private_key{}; // never serialized anywhere

    auto operator<=>(const KeyPair&) const = default;
};

// Opaque directed payload; only the matching private key opens it.
struct Ciphertext {
    ParticipantId recipient;
    std::vector<uint8_t> blob;

    bool operator==(const Ciphertext&) const = default;
};

namespace detail {

inline Digest32 tagged_hash(std::string_view tag, std::span<const uint8_t> data) {
    ByteWriter w;
    w.put_prefixed_string(tag);
    w.put_bytes(data);
    return sha256(w.bytes());
}

} // namespace detail

template <RandomSource R>
KeyPair gen_keypair(R& rng) {
    KeyPair kp;
    rng.fill_bytes(kp.private_key);
    Digest32 vk = detail::tagged_hash("refsim/verify-key", kp.private_key);
    Digest32 ek = detail::tagged_hash("refsim/encrypt-key", kp.private_key);
    std::copy(vk.begin(), vk.begin() + 16, kp.id.bytes.begin());
    std::copy(ek.begin(), ek.begin() + 16, kp.id.bytes.begin() + 16);
    return kp;
}

inline std::vector<uint8_t> sign(std::span<const uint8_t> message,
                                 const KeyPair& keypair) {
    Digest32 tag = hmac_sha256(keypair.id.verify_key(), message);
    return {tag.begin(), tag.end()};
}

// Deterministic: same (message, signature, id) always gives the same answer.
// Malformed signatures verify false, they never throw.
inline bool verify(std::span<const uint8_t> message,
                   std::span<const uint8_t> signature,
                   const ParticipantId& signer) {
    if (signature.size() != 32) return false;
    Digest32 expected = hmac_sha256(signer.verify_key(), message);
    uint8_t diff = 0;
    for (size_t i = 0; i < 32; ++i) diff |= expected[i] ^ signature[i];
    return diff == 0;
}

namespace detail {

constexpr size_t kNonceSize = 16;
constexpr size_t kTagSize = 32;

inline void apply_keystream(std::span<const uint8_t> key,
                            std::span<const uint8_t> nonce,
                            std::span<uint8_t> data) {
    size_t offset = 0;
    uint32_t counter = 0;
    while (offset < data.size()) {
        ByteWriter block;
        block.put_prefixed_string("refsim/stream");
        block.put_bytes(key);
        block.put_bytes(nonce);
        block.put_u32_be(counter++);
        Digest32 pad = sha256(block.bytes());
        for (size_t i = 0; i < pad.size() && offset < data.size(); ++i, ++offset)
            data[offset] ^= pad[i];
    }
}

inline Digest32 auth_tag(std::span<const uint8_t> key,
                         std::span<const uint8_t> nonce_and_body) {
    return hmac_sha256(key, nonce_and_body);
}

} // namespace detail

// Randomized encryption: a fresh nonce per call makes ciphertexts of equal
// plaintexts differ. Layout: nonce(16) || body || tag(32).
template <RandomSource R>
Ciphertext encrypt(std::span<const uint8_t> plaintext,
                   const ParticipantId& recipient, R& rng) {
    std::vector<uint8_t> blob(detail::kNonceSize + plaintext.size() +
                              detail::kTagSize);
    rng.fill_bytes(std::span(blob).first(detail::kNonceSize));
    std::copy(plaintext.begin(), plaintext.end(),
              blob.begin() + detail::kNonceSize);
    detail::apply_keystream(
        recipient.encrypt_key(), std::span(blob).first(detail::kNonceSize),
        std::span(blob).subspan(detail::kNonceSize, plaintext.size()));
    Digest32 tag = detail::auth_tag(
        recipient.encrypt_key(),
        std::span(blob).first(detail::kNonceSize + plaintext.size()));
    std::copy(tag.begin(), tag.end(),
              blob.end() - static_cast<ptrdiff_t>(detail::kTagSize));
    return Ciphertext{recipient, std::move(blob)};
}

// Fails loudly on a wrong key or damaged blob; never returns garbage.
inline std::vector<uint8_t> decrypt(const Ciphertext& ciphertext,
                                    const KeyPair& keypair) {
    const auto& blob = ciphertext.blob;
    if (blob.size() < detail::kNonceSize + detail::kTagSize)
        fail(ErrorKind::DecryptionFailure, "ciphertext too short");

    const size_t body_len = blob.size() - detail::kNonceSize - detail::kTagSize;
    auto authed = std::span(blob).first(detail::kNonceSize + body_len);
    Digest32 expected = detail::auth_tag(keypair.id.encrypt_key(), authed);
    uint8_t diff = 0;
    for (size_t i = 0; i < detail::kTagSize; ++i)
        diff |= expected[i] ^ blob[authed.size() + i];
    if (diff != 0)
        fail(ErrorKind::DecryptionFailure,
             "ciphertext does not authenticate under this key");

    std::vector<uint8_t> plaintext(blob.begin() + detail::kNonceSize,
                                   blob.begin() + detail::kNonceSize + body_len);
    detail::apply_keystream(keypair.id.encrypt_key(),
                            std::span(blob).first(detail::kNonceSize),
                            plaintext);
    return plaintext;
}

} // namespace refsim
