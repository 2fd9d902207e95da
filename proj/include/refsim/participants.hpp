#pragma once

// Role logic for initiator, voters, and workers, parameterized by behavior.
// Each participant runs exactly one behavior per scenario; the honest path
// is the protocol, the others are the adversary catalogue:
//
//   Inactive            stays silent in every phase it owes an action
//   PartialDistribution serves only a chosen subset of workers
//   SyntacticGarbage    writes undecodable bytes where shares belong
//   Impersonate         claims another sender id (signature cannot match)
//   InvalidVote         shares a field value outside {+1, −1}
//   WrongIntermediate   offsets its published intermediate share(s)
//   DoubleVote          submits full share sets repeatedly at listed ticks
//
// Voting-phase deviations live in voter_act; Inactive and WrongIntermediate
// also deviate in worker_act. A worker whose behavior only concerns voting
// (garbage, impersonation, ...) computes its intermediates honestly — one
// behavior, applied wherever it has meaning.
//
// Workers accept vote shares through the very same audit() the verifier
// runs; the one thing only a worker can check is whether its ciphertext
// column actually decrypts. A share that does not decrypt (or decrypts to
// something unusable) disqualifies that voter locally and never aborts the
// worker. If that ever makes one worker's accepted set diverge from the
// metadata view, its intermediate lands on a different polynomial and the
// outlier scan flags it downstream — the system degrades loudly, not
// silently.

#include <cstdint>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "refsim/crypto.hpp"
#include "refsim/errors.hpp"
#include "refsim/field.hpp"
#include "refsim/ledger.hpp"
#include "refsim/messages.hpp"
#include "refsim/rng.hpp"
#include "refsim/sss.hpp"
#include "refsim/verifier.hpp"

namespace refsim {

// ---------------------------------------------------------------------------
// Behaviors

struct Honest {
    bool operator==(const Honest&) const = default;
};
struct Inactive {
    bool operator==(const Inactive&) const = default;
};
struct PartialDistribution {
    std::set<size_t> served_workers; // indices into params.workers
    bool operator==(const PartialDistribution&) const = default;
};
struct SyntacticGarbage {
    bool operator==(const SyntacticGarbage&) const = default;
};
struct Impersonate {
    ParticipantId target;
    bool operator==(const Impersonate&) const = default;
};
struct InvalidVote {
    int64_t value = 0; // embedded via FieldElement::from_signed
    bool operator==(const InvalidVote&) const = default;
};
struct WrongIntermediate {
    enum class Target { Result, Checksum, Both };
    int64_t offset = 0;
    Target target = Target::Result;
    bool operator==(const WrongIntermediate&) const = default;
};
struct DoubleVote {
    // full share sets submitted at each listed tick, in list order
    std::vector<std::pair<int64_t, uint64_t>> revotes; // (vote value, tick)
    bool operator==(const DoubleVote&) const = default;
};

using Behavior = std::variant<Honest, Inactive, PartialDistribution,
                              SyntacticGarbage, Impersonate, InvalidVote,
                              WrongIntermediate, DoubleVote>;

inline const char* behavior_name(const Behavior& b) {
    struct Namer {
        const char* operator()(const Honest&) const { return "honest"; }
        const char* operator()(const Inactive&) const { return "inactive"; }
        const char* operator()(const PartialDistribution&) const {
            return "partial-distribution";
        }
        const char* operator()(const SyntacticGarbage&) const {
            return "syntactic-garbage";
        }
        const char* operator()(const Impersonate&) const { return "impersonate"; }
        const char* operator()(const InvalidVote&) const { return "invalid-vote"; }
        const char* operator()(const WrongIntermediate&) const {
            return "wrong-intermediate";
        }
        const char* operator()(const DoubleVote&) const { return "double-vote"; }
    };
    return std::visit(Namer{}, b);
}

// ---------------------------------------------------------------------------
// Phase clock

struct PhaseClock {
    uint64_t q12 = 0, q23 = 0, q34 = 0;
    uint64_t current_tick = 0;

    explicit PhaseClock(const ReferendumParams& p)
        : q12(p.q12), q23(p.q23), q34(p.q34) {}

    Phase phase() const {
        if (current_tick < q12) return Phase::PreInit;
        if (current_tick < q23) return Phase::VoteSubmission;
        if (current_tick < q34) return Phase::Intermediate;
        return Phase::Determination;
    }
    void advance() { ++current_tick; }
};

// ---------------------------------------------------------------------------
// Initiator

// The initiator's one and only action: announce the referendum at q12.
inline uint64_t initiator_publish(const ReferendumParams& params,
                                  const KeyPair& keypair, Ledger& ledger) {
    if (keypair.id != params.initiator)
        fail(ErrorKind::InvalidParams, "keypair does not own the announcement");
    if (!ledger.query({.type = MessageType::InitBroadcast,
                       .sender = params.initiator})
             .empty())
        fail(ErrorKind::ProtocolOrder, "announcement already published");
    return ledger.append(make_init_broadcast(params, keypair), params.q12);
}

// ---------------------------------------------------------------------------
// Voter

namespace detail {

// One full, honestly-encrypted share set for `secret`, appended for the
// worker indices in `serve` (ascending), under `sender_of`'s name.
template <RandomSource R>
std::vector<uint64_t> submit_share_set(const FieldElement& secret,
                                       const std::set<size_t>& serve,
                                       const ParticipantId& claimed_sender,
                                       const KeyPair& signer,
                                       const ReferendumParams& params,
                                       Ledger& ledger, uint64_t tick, R& rng) {
    const auto sharing = params.sharing();
    const auto shares = share_secret(secret, sharing, rng);
    std::vector<uint64_t> seqs;
    for (size_t j = 0; j < params.worker_count(); ++j) {
        if (!serve.count(j)) continue;
        Ciphertext ct =
            encrypt(encode_share(shares[j]), params.workers[j], rng);
        Message m =
            claimed_sender == signer.id
                ? make_vote_share(ct, signer)
                : make_with_forged_sender(MessageType::VoteShare, claimed_sender,
                                          ct.recipient, ct.blob, signer);
        seqs.push_back(ledger.append(m, tick));
    }
    return seqs;
}

inline std::set<size_t> all_workers(const ReferendumParams& params) {
    std::set<size_t> serve;
    for (size_t j = 0; j < params.worker_count(); ++j) serve.insert(j);
    return serve;
}

} // namespace detail

// One voting-phase activation. The scheduler calls this when the voter is
// due; nothing here polices the tick — late and out-of-phase submissions
// are exactly how the corresponding ledger records come to exist.
template <RandomSource R>
std::vector<uint64_t> voter_act(int64_t vote_choice, const Behavior& behavior,
                                const KeyPair& keypair,
                                const ReferendumParams& params, Ledger& ledger,
                                uint64_t tick, R& rng) {
    const uint64_t p = params.modulus;

    if (std::holds_alternative<Inactive>(behavior)) return {};

    if (auto* dv = std::get_if<DoubleVote>(&behavior)) {
        std::vector<uint64_t> seqs;
        for (const auto& [value, at] : dv->revotes) {
            if (at != tick) continue;
            auto batch = detail::submit_share_set(
                FieldElement::from_signed(value, p), detail::all_workers(params),
                keypair.id, keypair, params, ledger, tick, rng);
            seqs.insert(seqs.end(), batch.begin(), batch.end());
        }
        return seqs;
    }

    if (auto* pd = std::get_if<PartialDistribution>(&behavior))
        return detail::submit_share_set(FieldElement::from_signed(vote_choice, p),
                                        pd->served_workers, keypair.id, keypair,
                                        params, ledger, tick, rng);

    if (std::holds_alternative<SyntacticGarbage>(behavior)) {
        std::vector<uint64_t> seqs;
        for (size_t j = 0; j < params.worker_count(); ++j) {
            // readable header, hopeless payload: too short to be a ciphertext
            ByteWriter w;
            w.put_u8('s');
            w.put_bytes(keypair.id.bytes);
            w.put_u8(1);
            w.put_bytes(params.workers[j].bytes);
            std::vector<uint8_t> junk(20);
            rng.fill_bytes(junk);
            w.put_prefixed(junk);
            std::vector<uint8_t> sig(32);
            rng.fill_bytes(sig);
            w.put_prefixed(sig);
            seqs.push_back(ledger.append_raw(w.bytes(), tick));
        }
        // plus one blob nobody can even attribute
        std::vector<uint8_t> blob(24);
        rng.fill_bytes(blob);
        blob[0] = 0xFF;
        seqs.push_back(ledger.append_raw(blob, tick));
        return seqs;
    }

    if (auto* im = std::get_if<Impersonate>(&behavior))
        return detail::submit_share_set(FieldElement::from_signed(vote_choice, p),
                                        detail::all_workers(params), im->target,
                                        keypair, params, ledger, tick, rng);

    if (auto* iv = std::get_if<InvalidVote>(&behavior))
        return detail::submit_share_set(FieldElement::from_signed(iv->value, p),
                                        detail::all_workers(params), keypair.id,
                                        keypair, params, ledger, tick, rng);

    // Honest and WrongIntermediate vote by the book
    return detail::submit_share_set(FieldElement::from_signed(vote_choice, p),
                                    detail::all_workers(params), keypair.id,
                                    keypair, params, ledger, tick, rng);
}

// ---------------------------------------------------------------------------
// Worker

// One intermediate-phase activation: audit, decrypt own column, publish
// r̃_j = Σ σ_ij and c̃_j = Σ σ_ij². Returns the appended seqs.
inline std::vector<uint64_t> worker_act(const Behavior& behavior,
                                        const KeyPair& keypair,
                                        const ReferendumParams& params,
                                        Ledger& ledger, uint64_t tick) {
    if (std::holds_alternative<Inactive>(behavior)) return {};

    const auto j = params.worker_index(keypair.id);
    if (!j) fail(ErrorKind::InvalidParams, "keypair is not a worker here");

    const auto sharing = params.sharing();
    const FieldElement x(params.share_affiliation[*j], params.modulus);

    const AuditResult audited = audit(ledger, params);

    Share result{x, FieldElement(0, params.modulus), sharing.fresh_degree()};
    Share checksum{x, FieldElement(0, params.modulus), sharing.squared_degree()};
    for (size_t i : audited.accepted_voters) {
        const uint64_t seq = audited.accepted.at(i).at(*j);
        auto msg = ledger.record(seq).parsed();
        std::optional<Share> share;
        try {
            auto plaintext = decrypt(msg->cipher_payload(), keypair);
            share = decode_share(plaintext);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DecryptionFailure) throw;
        }
        // undecryptable or unusable -> this voter is locally disqualified
        if (!share || share->eval_point != x ||
            share->degree_hint != sharing.fresh_degree())
            continue;
        result = add_shares(result, *share);
        checksum = add_shares(checksum, square_share(*share, sharing));
    }

    if (auto* wi = std::get_if<WrongIntermediate>(&behavior)) {
        const FieldElement offset =
            FieldElement::from_signed(wi->offset, params.modulus);
        if (wi->target != WrongIntermediate::Target::Checksum)
            result.value = result.value + offset;
        if (wi->target != WrongIntermediate::Target::Result)
            checksum.value = checksum.value + offset;
    }

    return {ledger.append(make_result_share(result, keypair), tick),
            ledger.append(make_checksum_share(checksum, keypair), tick)};
}

} // namespace refsim
