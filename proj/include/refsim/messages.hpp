#pragma once

// Typed ledger messages and their canonical wire encoding.
//
// Four message kinds exist, tagged 'b' (referendum announcement), 's'
// (encrypted vote share, the only directed kind), 'r' (intermediate result
// share), 'c' (intermediate checksum share). The byte layout is fixed-order
// and length-prefixed so that every message has exactly one encoding:
//
//   tag(1) || sender(32) || recipient-flag(1) [|| recipient(32)]
//     || payload-len(u32 BE) || payload || sig-len(u32 BE) || signature
//
// The signature covers every byte before the signature length prefix, so no
// field is malleable. Parsing never verifies signatures — acceptance of a
// message is the verifier's decision, and adversaries deliberately put
// ill-signed messages on the ledger.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "refsim/bytes.hpp"
#include "refsim/crypto.hpp"
#include "refsim/errors.hpp"
#include "refsim/field.hpp"
#include "refsim/sss.hpp"

namespace refsim {

enum class MessageType : uint8_t {
    InitBroadcast = 'b',
    VoteShare = 's',
    ResultShare = 'r',
    ChecksumShare = 'c',
};

inline const char* to_string(MessageType t) {
    switch (t) {
        case MessageType::InitBroadcast: return "init-broadcast";
        case MessageType::VoteShare: return "vote-share";
        case MessageType::ResultShare: return "result-share";
        case MessageType::ChecksumShare: return "checksum-share";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Referendum parameters (the announcement payload)

struct ReferendumParams {
    ParticipantId initiator;
    std::vector<ParticipantId> voters;           // V, ordered
    std::vector<ParticipantId> workers;          // W ⊆ V, ordered
    std::vector<uint64_t> share_affiliation;     // eval point of worker j
    uint32_t threshold = 0;                      // t
    uint64_t modulus = 0;                        // p
    uint64_t q12 = 0, q23 = 0, q34 = 0;          // phase deadlines, ticks
    std::string context_text;
    std::string option_plus;                     // label carried by +1
    std::string option_minus;                    // label carried by −1

    size_t voter_count() const { return voters.size(); }
    size_t worker_count() const { return workers.size(); }

    std::optional<size_t> voter_index(const ParticipantId& id) const {
        for (size_t i = 0; i < voters.size(); ++i)
            if (voters[i] == id) return i;
        return std::nullopt;
    }
    std::optional<size_t> worker_index(const ParticipantId& id) const {
        for (size_t j = 0; j < workers.size(); ++j)
            if (workers[j] == id) return j;
        return std::nullopt;
    }

    SharingParams sharing() const {
        return SharingParams(threshold, modulus, share_affiliation);
    }

    // Throws InvalidParams naming the offending field. The modulus floor
    // p > 4k² keeps every integer quantity the verifier reads back out of
    // the field (sums, checksums, single illegal votes of square ≤ 4k²)
    // well inside (−p/2, p/2), so signed readout cannot wrap.
    void validate() const {
        auto bad = [](const std::string& field, const std::string& why) {
            fail(ErrorKind::InvalidParams, "params." + field + ": " + why);
        };
        const size_t k = voters.size();
        const size_t n = workers.size();
        if (threshold < 2) bad("threshold", "must be at least 2");
        if (n < 2 * size_t(threshold) - 1)
            bad("workers", "need at least 2t-1 workers");
        if (k < n) bad("voters", "fewer voters than workers");
        if (!(q12 < q23 && q23 < q34))
            bad("deadlines", "must be strictly increasing q12 < q23 < q34");
        if (!is_prime(modulus)) bad("modulus", "must be prime");
        if (modulus <= 4 * uint64_t(k) * uint64_t(k))
            bad("modulus", "must exceed 4k^2 to rule out wraparound");
        if (uint64_t(n) >= modulus) bad("workers", "more shares than field points");

        std::set<ParticipantId> seen;
        for (const auto& v : voters)
            if (!seen.insert(v).second) bad("voters", "duplicate id");
        if (seen.count(initiator)) bad("initiator", "initiator must not be a voter");
        std::set<ParticipantId> wseen;
        for (const auto& w : workers) {
            if (!wseen.insert(w).second) bad("workers", "duplicate id");
            if (!seen.count(w)) bad("workers", "worker id not registered as voter");
        }
        if (share_affiliation.size() != n)
            bad("share_affiliation", "need exactly one eval point per worker");
        sharing(); // delegates eval-point checks (distinct, nonzero, in range)
    }

    bool operator==(const ReferendumParams&) const = default;
};

// ---------------------------------------------------------------------------
// Canonical payload encodings

inline std::vector<uint8_t> encode_share(const Share& share) {
    ByteWriter w;
    w.put_u64_be(share.eval_point.value());
    w.put_u64_be(share.value.value());
    w.put_u64_be(share.eval_point.modulus());
    w.put_u32_be(share.degree_hint);
    return w.take();
}

// Strict: rejects values outside the field, so the encoding stays injective.
inline std::optional<Share> decode_share(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    uint64_t eval = 0, value = 0, modulus = 0;
    uint32_t hint = 0;
    if (!r.read_u64_be(eval) || !r.read_u64_be(value) ||
        !r.read_u64_be(modulus) || !r.read_u32_be(hint) || !r.done())
        return std::nullopt;
    if (modulus < 2 || eval >= modulus || value >= modulus) return std::nullopt;
    return Share{FieldElement(eval, modulus), FieldElement(value, modulus), hint};
}

inline std::vector<uint8_t> encode_params(const ReferendumParams& p) {
    ByteWriter w;
    w.put_bytes(p.initiator.bytes);
    w.put_u32_be(static_cast<uint32_t>(p.voters.size()));
    for (const auto& v : p.voters) w.put_bytes(v.bytes);
    w.put_u32_be(static_cast<uint32_t>(p.workers.size()));
    for (const auto& wk : p.workers) w.put_bytes(wk.bytes);
    for (uint64_t x : p.share_affiliation) w.put_u64_be(x);
    w.put_u32_be(p.threshold);
    w.put_u64_be(p.modulus);
    w.put_u64_be(p.q12);
    w.put_u64_be(p.q23);
    w.put_u64_be(p.q34);
    w.put_prefixed_string(p.context_text);
    w.put_prefixed_string(p.option_plus);
    w.put_prefixed_string(p.option_minus);
    return w.take();
}

// Structural decode only; invariant checking stays with validate() so that
// the verifier can classify a well-formed-but-invalid announcement.
inline std::optional<ReferendumParams> decode_params(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    ReferendumParams p;

    auto read_id = [&](ParticipantId& out) {
        std::array<uint8_t, ParticipantId::kSize> raw{};
        if (!r.read_into(raw)) return false;
        out.bytes = raw;
        return true;
    };

    if (!read_id(p.initiator)) return std::nullopt;
    uint32_t k = 0, n = 0;
    if (!r.read_u32_be(k)) return std::nullopt;
    if (uint64_t(k) * ParticipantId::kSize > r.remaining()) return std::nullopt;
    p.voters.resize(k);
    for (auto& v : p.voters)
        if (!read_id(v)) return std::nullopt;
    if (!r.read_u32_be(n)) return std::nullopt;
    if (uint64_t(n) * ParticipantId::kSize > r.remaining()) return std::nullopt;
    p.workers.resize(n);
    for (auto& wk : p.workers)
        if (!read_id(wk)) return std::nullopt;
    p.share_affiliation.resize(n);
    for (auto& x : p.share_affiliation)
        if (!r.read_u64_be(x)) return std::nullopt;
    if (!r.read_u32_be(p.threshold) || !r.read_u64_be(p.modulus) ||
        !r.read_u64_be(p.q12) || !r.read_u64_be(p.q23) || !r.read_u64_be(p.q34))
        return std::nullopt;
    if (!r.read_prefixed_string(p.context_text) ||
        !r.read_prefixed_string(p.option_plus) ||
        !r.read_prefixed_string(p.option_minus) || !r.done())
        return std::nullopt;
    return p;
}

// ---------------------------------------------------------------------------
// Messages

struct Message {
    MessageType type = MessageType::InitBroadcast;
    ParticipantId sender;
    std::optional<ParticipantId> recipient; // vote shares only
    std::vector<uint8_t> payload;           // canonical payload bytes
    std::vector<uint8_t> signature;

    bool operator==(const Message&) const = default;

    ReferendumParams init_params() const {
        if (type != MessageType::InitBroadcast)
            fail(ErrorKind::Encoding, "not an init broadcast");
        auto p = decode_params(payload);
        if (!p) fail(ErrorKind::Encoding, "undecodable params payload");
        return *p;
    }
    Ciphertext cipher_payload() const {
        if (type != MessageType::VoteShare || !recipient)
            fail(ErrorKind::Encoding, "not a vote share");
        return Ciphertext{*recipient, payload};
    }
    Share share_payload() const {
        if (type != MessageType::ResultShare && type != MessageType::ChecksumShare)
            fail(ErrorKind::Encoding, "not a result/checksum share");
        auto s = decode_share(payload);
        if (!s) fail(ErrorKind::Encoding, "undecodable share payload");
        return *s;
    }
};

enum class SyntaxReason {
    UnknownTag,
    MissingField,
    BadLength,
    UndecodablePayload,
};

inline const char* to_string(SyntaxReason r) {
    switch (r) {
        case SyntaxReason::UnknownTag: return "unknown-tag";
        case SyntaxReason::MissingField: return "missing-field";
        case SyntaxReason::BadLength: return "bad-length";
        case SyntaxReason::UndecodablePayload: return "undecodable-payload";
    }
    return "?";
}

struct SyntaxError {
    SyntaxReason reason;
    std::string detail;
};

using ParseOutcome = std::variant<Message, SyntaxError>;

namespace detail {

// Everything the signature covers: all fields up to and including payload.
inline void write_signed_prefix(ByteWriter& w, MessageType type,
                                const ParticipantId& sender,
                                const std::optional<ParticipantId>& recipient,
                                std::span<const uint8_t> payload) {
    w.put_u8(static_cast<uint8_t>(type));
    w.put_bytes(sender.bytes);
    w.put_u8(recipient ? 1 : 0);
    if (recipient) w.put_bytes(recipient->bytes);
    w.put_prefixed(payload);
}

constexpr size_t kMinCiphertextSize = 16 + 32; // nonce + tag, empty body

} // namespace detail

inline std::vector<uint8_t> signed_bytes(const Message& m) {
    ByteWriter w;
    detail::write_signed_prefix(w, m.type, m.sender, m.recipient, m.payload);
    return w.take();
}

inline std::vector<uint8_t> serialize_message(const Message& m) {
    ByteWriter w;
    detail::write_signed_prefix(w, m.type, m.sender, m.recipient, m.payload);
    w.put_prefixed(m.signature);
    return w.take();
}

inline bool signature_valid(const Message& m) {
    return verify(signed_bytes(m), m.signature, m.sender);
}

inline ParseOutcome parse_message(std::span<const uint8_t> bytes) {
    auto syntax = [](SyntaxReason reason, std::string detail) {
        return ParseOutcome{SyntaxError{reason, std::move(detail)}};
    };

    ByteReader r(bytes);
    uint8_t tag = 0;
    if (!r.read_u8(tag)) return syntax(SyntaxReason::MissingField, "tag");
    switch (tag) {
        case 'b': case 's': case 'r': case 'c': break;
        default:
            return syntax(SyntaxReason::UnknownTag,
                          "tag byte 0x" + to_hex(std::array<uint8_t, 1>{tag}));
    }

    Message m;
    m.type = static_cast<MessageType>(tag);
    std::array<uint8_t, ParticipantId::kSize> raw{};
    if (!r.read_into(raw)) return syntax(SyntaxReason::MissingField, "sender");
    m.sender.bytes = raw;

    uint8_t flag = 0;
    if (!r.read_u8(flag)) return syntax(SyntaxReason::MissingField, "recipient-flag");
    if (flag > 1) return syntax(SyntaxReason::BadLength, "recipient-flag");
    if (flag == 1) {
        if (!r.read_into(raw)) return syntax(SyntaxReason::MissingField, "recipient");
        m.recipient = ParticipantId{raw};
    }
    if (m.type == MessageType::VoteShare && !m.recipient)
        return syntax(SyntaxReason::MissingField, "recipient");
    if (m.type != MessageType::VoteShare && m.recipient)
        return syntax(SyntaxReason::BadLength, "recipient on broadcast");

    uint32_t len = 0;
    if (!r.read_u32_be(len)) return syntax(SyntaxReason::MissingField, "payload");
    if (len > r.remaining()) return syntax(SyntaxReason::BadLength, "payload");
    m.payload.resize(len);
    if (len) r.read_into(m.payload);

    if (!r.read_u32_be(len)) return syntax(SyntaxReason::MissingField, "signature");
    if (len > r.remaining()) return syntax(SyntaxReason::BadLength, "signature");
    m.signature.resize(len);
    if (len) r.read_into(m.signature);
    if (!r.done()) return syntax(SyntaxReason::BadLength, "trailing bytes");

    switch (m.type) {
        case MessageType::InitBroadcast:
            if (!decode_params(m.payload))
                return syntax(SyntaxReason::UndecodablePayload, "params");
            break;
        case MessageType::VoteShare:
            if (m.payload.size() < detail::kMinCiphertextSize)
                return syntax(SyntaxReason::UndecodablePayload, "ciphertext");
            break;
        case MessageType::ResultShare:
        case MessageType::ChecksumShare:
            if (!decode_share(m.payload))
                return syntax(SyntaxReason::UndecodablePayload, "share");
            break;
    }
    return ParseOutcome{std::move(m)};
}

// Best-effort peek at (tag, sender) of bytes that may not parse in full —
// used to attribute syntactically broken records to their claimed author.
inline std::optional<std::pair<MessageType, ParticipantId>>
claimed_header(std::span<const uint8_t> bytes) {
    ByteReader r(bytes);
    uint8_t tag = 0;
    if (!r.read_u8(tag)) return std::nullopt;
    switch (tag) {
        case 'b': case 's': case 'r': case 'c': break;
        default: return std::nullopt;
    }
    std::array<uint8_t, ParticipantId::kSize> raw{};
    if (!r.read_into(raw)) return std::nullopt;
    return std::make_pair(static_cast<MessageType>(tag), ParticipantId{raw});
}

// ---------------------------------------------------------------------------
// Construction

inline Message make_signed(MessageType type,
                           std::optional<ParticipantId> recipient,
                           std::vector<uint8_t> payload, const KeyPair& author) {
    Message m;
    m.type = type;
    m.sender = author.id;
    m.recipient = std::move(recipient);
    m.payload = std::move(payload);
    m.signature = sign(signed_bytes(m), author);
    return m;
}

// Adversary constructor: the sender field claims `forged_sender`, but the tag
// is minted with the adversary's own key, so verification against the claimed
// sender necessarily fails.
inline Message make_with_forged_sender(MessageType type,
                                       const ParticipantId& forged_sender,
                                       std::optional<ParticipantId> recipient,
                                       std::vector<uint8_t> payload,
                                       const KeyPair& actual_author) {
    Message m;
    m.type = type;
    m.sender = forged_sender;
    m.recipient = std::move(recipient);
    m.payload = std::move(payload);
    m.signature = sign(signed_bytes(m), actual_author);
    return m;
}

inline Message make_init_broadcast(const ReferendumParams& params,
                                   const KeyPair& initiator) {
    return make_signed(MessageType::InitBroadcast, std::nullopt,
                       encode_params(params), initiator);
}

inline Message make_vote_share(const Ciphertext& ct, const KeyPair& voter) {
    return make_signed(MessageType::VoteShare, ct.recipient, ct.blob, voter);
}

inline Message make_result_share(const Share& share, const KeyPair& worker) {
    return make_signed(MessageType::ResultShare, std::nullopt,
                       encode_share(share), worker);
}

inline Message make_checksum_share(const Share& share, const KeyPair& worker) {
    return make_signed(MessageType::ChecksumShare, std::nullopt,
                       encode_share(share), worker);
}

// ---------------------------------------------------------------------------
// Phase geometry (shared by participants and verifier)

enum class Phase { PreInit, VoteSubmission, Intermediate, Determination };

inline Phase phase_of(uint64_t tick, const ReferendumParams& params) {
    if (tick < params.q12) return Phase::PreInit;
    if (tick < params.q23) return Phase::VoteSubmission;
    if (tick < params.q34) return Phase::Intermediate;
    return Phase::Determination;
}

} // namespace refsim
