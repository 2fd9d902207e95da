#pragma once

// Append-only hash-chained record store — the only channel participants
// share. The backing store holds one canonical byte line per record:
//
//   seq(u64 BE) || prev_hash(32) || timestamp(u64 BE)
//     || msg-len(u32 BE) || message bytes || record_hash(32)
//
// record_hash is SHA-256 over everything before it; prev_hash is the
// predecessor's record_hash (zero digest at seq 0). Dumps are newline-
// delimited base64 of those lines, so a dump round-trips bit-exactly and
// stays self-verifying: flipping any byte of any line breaks either the
// record's own hash or the chain link.
//
// The ledger is deliberately dumb. It accepts any bytes as a message —
// garbage reaches the ledger and is ignored downstream by verifiers, never
// blocked here. The public API has no update or delete; the only way to
// mutate history is the test-build-only tamper hook.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "refsim/bytes.hpp"
#include "refsim/errors.hpp"
#include "refsim/hash.hpp"
#include "refsim/messages.hpp"

namespace refsim {

struct Record {
    uint64_t seq = 0;
    Digest32 prev_hash{};
    uint64_t timestamp = 0;
    std::vector<uint8_t> message_bytes;
    Digest32 record_hash{};

    // nullopt when the stored message bytes do not parse — a legal state,
    // classification happens at verification time.
    std::optional<Message> parsed() const {
        auto out = parse_message(message_bytes);
        if (auto* m = std::get_if<Message>(&out)) return *m;
        return std::nullopt;
    }
};

enum class IntegrityFault { HashMismatch, LinkBroken, SeqGap };

inline const char* to_string(IntegrityFault f) {
    switch (f) {
        case IntegrityFault::HashMismatch: return "hash-mismatch";
        case IntegrityFault::LinkBroken: return "link-broken";
        case IntegrityFault::SeqGap: return "seq-gap";
    }
    return "?";
}

struct IntegrityViolation {
    uint64_t seq = 0;
    IntegrityFault kind = IntegrityFault::HashMismatch;
    bool operator==(const IntegrityViolation&) const = default;
};

struct RecordFilter {
    std::optional<MessageType> type;
    std::optional<ParticipantId> sender;
    std::optional<ParticipantId> recipient;
    std::optional<std::pair<uint64_t, uint64_t>> tick_range; // inclusive
};

#ifdef REFSIM_ENABLE_TAMPER
enum class TamperKind { FlipBit, FlipByte, EraseRecord, TruncateChain, Identity };

struct Tamper {
    TamperKind kind = TamperKind::Identity;
    uint64_t seq = 0;
    uint64_t offset = 0; // bit index for FlipBit, byte index for FlipByte
};
#endif

class Ledger {
public:
    uint64_t append(const Message& message, uint64_t tick) {
        return append_raw(serialize_message(message), tick);
    }

    // Adversaries use this to persist bytes that are not messages at all.
    uint64_t append_raw(std::span<const uint8_t> message_bytes, uint64_t tick) {
        const uint64_t seq = lines_.size();
        ByteWriter w;
        w.put_u64_be(seq);
        w.put_bytes(last_hash_);
        w.put_u64_be(tick);
        w.put_prefixed(message_bytes);
        Digest32 h = sha256(w.bytes());
        w.put_bytes(h);
        lines_.push_back(w.take());
        last_hash_ = h;
        return seq;
    }

    size_t size() const { return lines_.size(); }
    const std::vector<uint8_t>& line(uint64_t seq) const {
        if (seq >= lines_.size())
            fail(ErrorKind::InvalidParams, "no record at seq " + std::to_string(seq));
        return lines_[seq];
    }

    // Requires a structurally intact line; run verify_integrity first when
    // the store may have been damaged.
    Record record(uint64_t seq) const {
        Record r;
        if (!decode_line(line(seq), r))
            fail(ErrorKind::Encoding,
                 "structurally broken record at seq " + std::to_string(seq));
        return r;
    }

    std::vector<Record> query(const RecordFilter& filter = {}) const {
        std::vector<Record> out;
        for (uint64_t i = 0; i < lines_.size(); ++i) {
            Record r;
            if (!decode_line(lines_[i], r)) continue;
            if (filter.tick_range &&
                (r.timestamp < filter.tick_range->first ||
                 r.timestamp > filter.tick_range->second))
                continue;
            if (filter.type || filter.sender || filter.recipient) {
                auto m = r.parsed();
                if (!m) continue;
                if (filter.type && m->type != *filter.type) continue;
                if (filter.sender && m->sender != *filter.sender) continue;
                if (filter.recipient &&
                    (!m->recipient || *m->recipient != *filter.recipient))
                    continue;
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    // First violation in seq order, or nullopt when the chain is intact.
    // Check order per record: own hash, then seq density, then chain link.
    std::optional<IntegrityViolation> verify_integrity() const {
        Digest32 expected_prev{}; // zero digest before genesis
        for (uint64_t i = 0; i < lines_.size(); ++i) {
            const auto& raw = lines_[i];
            Record r;
            const bool structural = decode_line(raw, r);
            if (!structural || !hash_consistent(raw, r))
                return IntegrityViolation{i, IntegrityFault::HashMismatch};
            if (r.seq != i) return IntegrityViolation{i, IntegrityFault::SeqGap};
            if (r.prev_hash != expected_prev)
                return IntegrityViolation{i, IntegrityFault::LinkBroken};
            expected_prev = r.record_hash;
        }
        return std::nullopt;
    }

    std::string dump() const {
        std::string out;
        for (const auto& raw : lines_) {
            out += base64_encode(raw);
            out += '\n';
        }
        return out;
    }

    static Ledger load(std::string_view text) {
        Ledger ledger;
        size_t pos = 0;
        while (pos < text.size()) {
            size_t nl = text.find('\n', pos);
            if (nl == std::string_view::npos)
                fail(ErrorKind::Encoding, "dump line missing terminator");
            std::string_view b64 = text.substr(pos, nl - pos);
            pos = nl + 1;
            if (b64.empty()) fail(ErrorKind::Encoding, "empty dump line");
            auto raw = base64_decode(b64);
            if (!raw) fail(ErrorKind::Encoding, "dump line is not valid base64");
            ledger.lines_.push_back(std::move(*raw));
        }
        // Recover the chain head for further appends; damaged tails surface
        // through verify_integrity, not here.
        if (!ledger.lines_.empty()) {
            const auto& raw = ledger.lines_.back();
            if (raw.size() >= 32)
                std::copy(raw.end() - 32, raw.end(), ledger.last_hash_.begin());
        }
        return ledger;
    }

#ifdef REFSIM_ENABLE_TAMPER
    // Test-build-only escape hatch used to exercise tamper detection; this
    // is exactly the mutation the public API refuses to offer.
    void tamper_for_test(const Tamper& t) {
        if (t.kind == TamperKind::Identity) return;
        if (t.seq >= lines_.size())
            fail(ErrorKind::InvalidParams, "tamper seq out of range");
        auto& raw = lines_[t.seq];
        switch (t.kind) {
            case TamperKind::FlipBit:
                if (t.offset / 8 >= raw.size())
                    fail(ErrorKind::InvalidParams, "tamper bit offset out of range");
                raw[t.offset / 8] ^= uint8_t(1u << (t.offset % 8));
                break;
            case TamperKind::FlipByte:
                if (t.offset >= raw.size())
                    fail(ErrorKind::InvalidParams, "tamper byte offset out of range");
                raw[t.offset] ^= 0x01;
                break;
            case TamperKind::EraseRecord:
                lines_.erase(lines_.begin() + static_cast<ptrdiff_t>(t.seq));
                break;
            case TamperKind::TruncateChain:
                lines_.resize(t.seq);
                break;
            case TamperKind::Identity:
                break;
        }
    }
#endif

private:
    static constexpr size_t kHeaderSize = 8 + 32 + 8 + 4;

    static bool decode_line(std::span<const uint8_t> raw, Record& r) {
        ByteReader rd(raw);
        std::span<const uint8_t> view;
        if (!rd.read_u64_be(r.seq)) return false;
        if (!rd.read_bytes(32, view)) return false;
        std::copy(view.begin(), view.end(), r.prev_hash.begin());
        if (!rd.read_u64_be(r.timestamp)) return false;
        if (!rd.read_prefixed(view)) return false;
        r.message_bytes.assign(view.begin(), view.end());
        if (!rd.read_bytes(32, view)) return false;
        std::copy(view.begin(), view.end(), r.record_hash.begin());
        return rd.done();
    }

    static bool hash_consistent(std::span<const uint8_t> raw, const Record& r) {
        return sha256(raw.first(raw.size() - 32)) == r.record_hash;
    }

    std::vector<std::vector<uint8_t>> lines_;
    Digest32 last_hash_{};
};

} // namespace refsim
