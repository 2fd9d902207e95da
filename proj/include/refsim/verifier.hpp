#pragma once

// Client-side validation: ledger integrity, the metadata compliance audit,
// outcome/checksum reconstruction with outlier handling, and the final
// verdict report. Everything here is a pure function of (ledger, params),
// so every participant who runs it over the same ledger replica gets a
// byte-identical report — that is the protocol's unanimity claim, and the
// canonical render() below is the contract it rests on.
//
// The audit applies its rules in a fixed order; a record is dropped at the
// first rule it fails and classified under exactly that rule:
//   1. records whose bytes do not parse            -> syntax
//   2. signature does not verify against sender    -> signature-mismatch
//   3. outside its phase window                    -> late / illegal-phase
//      (vote shares live in [q12,q23), intermediate records in [q23,q34);
//       past the window is "late", before it is "illegal-phase")
//   4. superseded by a later record from the same author for the same slot
//                                                  -> duplicate-resolved
//   5. vote-share sets that do not cover every worker exactly once
//                                                  -> partial-distribution,
//      or inactivity when nothing usable survived at all
// Well-formed records that are unusable in context (wrong eval point, wrong
// degree, foreign modulus, recipient not a worker) count as syntax: they are
// not processable as constructed. Records whose claimed author is not a
// registered participant of the right role are listed as unattributed.
//
// Workers share rule 1–5 for vote shares verbatim by calling the same
// audit() — divergence between worker and verifier acceptance would
// desynchronize the intermediate shares across honest workers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "refsim/errors.hpp"
#include "refsim/field.hpp"
#include "refsim/ledger.hpp"
#include "refsim/messages.hpp"
#include "refsim/sss.hpp"

namespace refsim {

enum class Role { Voter, Worker };

inline const char* to_string(Role r) {
    return r == Role::Voter ? "voter" : "worker";
}

enum class ViolationKind {
    Inactivity,
    PartialDistribution,
    Syntax,
    SignatureMismatch,
    Late,
    DuplicateResolved,
    IllegalPhase,
};

inline constexpr ViolationKind kAllViolationKinds[] = {
    ViolationKind::Inactivity,       ViolationKind::PartialDistribution,
    ViolationKind::Syntax,           ViolationKind::SignatureMismatch,
    ViolationKind::Late,             ViolationKind::DuplicateResolved,
    ViolationKind::IllegalPhase,
};

inline const char* to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::Inactivity: return "inactivity";
        case ViolationKind::PartialDistribution: return "partial-distribution";
        case ViolationKind::Syntax: return "syntax";
        case ViolationKind::SignatureMismatch: return "signature-mismatch";
        case ViolationKind::Late: return "late";
        case ViolationKind::DuplicateResolved: return "duplicate-resolved";
        case ViolationKind::IllegalPhase: return "illegal-phase";
    }
    return "?";
}

struct Violation {
    ViolationKind kind;
    std::vector<uint64_t> seqs; // ascending; may be empty (e.g. inactivity)
    bool operator==(const Violation&) const = default;
};

struct ComplianceRecord {
    ParticipantId participant;
    Role role = Role::Voter;
    std::vector<Violation> violations; // empty means compliant
    bool operator==(const ComplianceRecord&) const = default;

    bool has(ViolationKind kind) const {
        for (const auto& v : violations)
            if (v.kind == kind) return true;
        return false;
    }
};

struct Census {
    uint64_t b = 0, s = 0, r = 0, c = 0;
    bool operator==(const Census&) const = default;
};

inline Census expected_census(const ReferendumParams& params) {
    const uint64_t k = params.voter_count();
    const uint64_t n = params.worker_count();
    return Census{1, k * n, n, n};
}

struct AuditResult {
    // voter entries in params.voters order, then worker entries in
    // params.workers order
    std::vector<ComplianceRecord> compliance;
    // voter index -> worker index -> seq of the accepted vote-share record;
    // only voters with full coverage appear
    std::map<size_t, std::map<size_t, uint64_t>> accepted;
    std::set<size_t> accepted_voters;
    // worker index -> seq of the surviving intermediate records
    std::map<size_t, uint64_t> result_seq;
    std::map<size_t, uint64_t> checksum_seq;
    std::vector<uint64_t> unattributed; // seqs owned by no participant entry
    Census actual;
    bool announcement_ok = false;
};

namespace detail {

class ViolationCollector {
public:
    explicit ViolationCollector(size_t entries) : buckets_(entries) {}

    void add(size_t entry, ViolationKind kind, uint64_t seq) {
        buckets_[entry][kind].push_back(seq);
    }
    void add_bare(size_t entry, ViolationKind kind) {
        buckets_[entry].try_emplace(kind);
    }

    // kinds emitted in declaration order, seqs ascending — report stability
    void flush(std::vector<ComplianceRecord>& compliance) const {
        for (size_t e = 0; e < buckets_.size(); ++e) {
            for (ViolationKind kind : kAllViolationKinds) {
                auto it = buckets_[e].find(kind);
                if (it == buckets_[e].end()) continue;
                Violation v{kind, it->second};
                std::sort(v.seqs.begin(), v.seqs.end());
                compliance[e].violations.push_back(std::move(v));
            }
        }
    }

private:
    std::vector<std::map<ViolationKind, std::vector<uint64_t>>> buckets_;
};

} // namespace detail

// The shared compliance audit. Precondition: verify_integrity() passed.
inline AuditResult audit(const Ledger& ledger, const ReferendumParams& params) {
    const size_t k = params.voter_count();
    const size_t n = params.worker_count();

    AuditResult out;
    out.compliance.resize(k + n);
    for (size_t i = 0; i < k; ++i)
        out.compliance[i] = ComplianceRecord{params.voters[i], Role::Voter, {}};
    for (size_t j = 0; j < n; ++j)
        out.compliance[k + j] = ComplianceRecord{params.workers[j], Role::Worker, {}};

    detail::ViolationCollector collect(k + n);
    const auto voter_entry = [&](size_t i) { return i; };
    const auto worker_entry = [&](size_t j) { return k + j; };

    // surviving records after rules 1–3, before duplicate resolution
    std::map<std::pair<size_t, size_t>, std::vector<uint64_t>> vote_slots;
    std::map<size_t, std::vector<uint64_t>> result_slots, checksum_slots;
    const std::vector<uint8_t> expected_b = encode_params(params);

    bool announcement_found = false;
    for (uint64_t seq = 0; seq < ledger.size(); ++seq) {
        const Record rec = ledger.record(seq);
        auto outcome = parse_message(rec.message_bytes);
        auto* msg = std::get_if<Message>(&outcome);

        if (!msg) { // rule 1: syntax
            auto header = claimed_header(rec.message_bytes);
            if (!header) {
                out.unattributed.push_back(seq);
                continue;
            }
            auto [type, claimed] = *header;
            if (type == MessageType::VoteShare) {
                if (auto i = params.voter_index(claimed)) {
                    collect.add(voter_entry(*i), ViolationKind::Syntax, seq);
                    continue;
                }
            } else if (type == MessageType::ResultShare ||
                       type == MessageType::ChecksumShare) {
                if (auto j = params.worker_index(claimed)) {
                    collect.add(worker_entry(*j), ViolationKind::Syntax, seq);
                    continue;
                }
            }
            out.unattributed.push_back(seq);
            continue;
        }

        if (msg->type == MessageType::InitBroadcast) {
            out.actual.b++;
            const bool genuine = msg->sender == params.initiator &&
                                 signature_valid(*msg) &&
                                 msg->payload == expected_b &&
                                 rec.timestamp == params.q12;
            if (genuine && !announcement_found)
                announcement_found = true;
            else
                out.unattributed.push_back(seq); // stray or mismatched broadcast
            continue;
        }

        const bool is_vote = msg->type == MessageType::VoteShare;
        if (is_vote) out.actual.s++;
        else if (msg->type == MessageType::ResultShare) out.actual.r++;
        else out.actual.c++;

        // resolve the author entry up front; unknown authors are unattributable
        std::optional<size_t> entry;
        std::optional<size_t> role_index;
        if (is_vote) {
            if (auto i = params.voter_index(msg->sender)) {
                entry = voter_entry(*i);
                role_index = *i;
            }
        } else {
            if (auto j = params.worker_index(msg->sender)) {
                entry = worker_entry(*j);
                role_index = *j;
            } else if (auto i = params.voter_index(msg->sender)) {
                // a plain voter has no business publishing intermediates
                collect.add(voter_entry(*i), ViolationKind::IllegalPhase, seq);
                continue;
            }
        }
        if (!entry) {
            out.unattributed.push_back(seq);
            continue;
        }

        if (!signature_valid(*msg)) { // rule 2
            collect.add(*entry, ViolationKind::SignatureMismatch, seq);
            continue;
        }

        // rule 3: phase windows
        const uint64_t lo = is_vote ? params.q12 : params.q23;
        const uint64_t hi = is_vote ? params.q23 : params.q34;
        if (rec.timestamp >= hi) {
            collect.add(*entry, ViolationKind::Late, seq);
            continue;
        }
        if (rec.timestamp < lo) {
            collect.add(*entry, ViolationKind::IllegalPhase, seq);
            continue;
        }

        if (is_vote) {
            auto w = params.worker_index(*msg->recipient);
            if (!w) { // addressed to nobody who computes
                collect.add(*entry, ViolationKind::Syntax, seq);
                continue;
            }
            vote_slots[{*role_index, *w}].push_back(seq);
            continue;
        }

        // intermediate records: content must be usable at this position
        const Share share = msg->share_payload();
        const uint32_t expected_hint =
            msg->type == MessageType::ResultShare
                ? params.sharing().fresh_degree()
                : params.sharing().squared_degree();
        if (share.eval_point.modulus() != params.modulus ||
            share.eval_point.value() != params.share_affiliation[*role_index] ||
            share.degree_hint != expected_hint) {
            collect.add(*entry, ViolationKind::Syntax, seq);
            continue;
        }
        auto& slots = msg->type == MessageType::ResultShare ? result_slots
                                                            : checksum_slots;
        slots[*role_index].push_back(seq);
    }

    out.announcement_ok = announcement_found && out.actual.b == 1;

    // rule 4: keep only the most recent record per slot
    std::map<size_t, std::map<size_t, uint64_t>> surviving; // voter -> worker -> seq
    for (auto& [slot, seqs] : vote_slots) {
        for (size_t a = 0; a + 1 < seqs.size(); ++a)
            collect.add(voter_entry(slot.first), ViolationKind::DuplicateResolved,
                        seqs[a]);
        surviving[slot.first][slot.second] = seqs.back();
    }
    auto resolve_worker_slots = [&](std::map<size_t, std::vector<uint64_t>>& slots,
                                    std::map<size_t, uint64_t>& latest) {
        for (auto& [j, seqs] : slots) {
            for (size_t a = 0; a + 1 < seqs.size(); ++a)
                collect.add(worker_entry(j), ViolationKind::DuplicateResolved,
                            seqs[a]);
            latest[j] = seqs.back();
        }
    };
    resolve_worker_slots(result_slots, out.result_seq);
    resolve_worker_slots(checksum_slots, out.checksum_seq);

    // rule 5: full-distribution coverage
    for (size_t i = 0; i < k; ++i) {
        auto it = surviving.find(i);
        if (it == surviving.end()) {
            collect.add_bare(voter_entry(i), ViolationKind::Inactivity);
            continue;
        }
        if (it->second.size() == n) {
            out.accepted[i] = it->second;
            out.accepted_voters.insert(i);
        } else {
            for (auto& [w, seq] : it->second)
                collect.add(voter_entry(i), ViolationKind::PartialDistribution, seq);
        }
    }
    for (size_t j = 0; j < n; ++j)
        if (!out.result_seq.count(j) || !out.checksum_seq.count(j))
            collect.add_bare(worker_entry(j), ViolationKind::Inactivity);

    collect.flush(out.compliance);
    std::sort(out.unattributed.begin(), out.unattributed.end());
    return out;
}

// ---------------------------------------------------------------------------
// Tally and verdict

struct TallySide {
    enum class Status { Ok, Unavailable, Ambiguous } status = Status::Unavailable;
    std::optional<FieldElement> value; // consensus value when status == Ok
    bool no_redundancy = false;        // reconstructed at the exact threshold
    std::vector<size_t> outlier_workers;
};

struct VerdictReport {
    enum class Overall { Valid, Invalid, Inconclusive };

    std::optional<IntegrityViolation> integrity; // nullopt = chain ok
    uint64_t record_count = 0;
    bool params_valid = false;
    bool announcement_ok = false;
    Census expected;
    Census actual;
    uint64_t accepted_voters = 0; // k'
    TallySide outcome;            // r at degree t−1
    TallySide checksum;           // c at degree 2(t−1)
    std::optional<int64_t> outcome_signed;
    std::optional<bool> checksum_valid; // c = k'; nullopt when c unavailable
    std::vector<ComplianceRecord> compliance;
    std::vector<uint64_t> unattributed;
    uint64_t outcome_max_inactive = 0;  // n − t
    uint64_t checksum_max_inactive = 0; // n − (2t−1), the working bound
    int64_t cited_checksum_bound = 0;   // n − t², reported for comparison
    bool outlier_majority_warning = false;
    Overall overall = Overall::Inconclusive;
    std::vector<std::string> reasons;
};

inline const char* to_string(VerdictReport::Overall o) {
    switch (o) {
        case VerdictReport::Overall::Valid: return "VALID";
        case VerdictReport::Overall::Invalid: return "INVALID";
        case VerdictReport::Overall::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace detail {

struct SideSpec {
    uint32_t degree;
    size_t consensus_min; // detect_outliers from here up
    size_t plain_exact;   // plain reconstruct at exactly this many
};

inline TallySide tally_side(const std::vector<Share>& shares, const SideSpec& spec,
                            const std::map<size_t, uint64_t>& eval_to_worker) {
    TallySide side;
    if (shares.size() >= spec.consensus_min) {
        try {
            OutlierScan scan = detect_outliers(shares, spec.degree);
            side.status = TallySide::Status::Ok;
            side.value = scan.consensus;
            for (uint64_t point : scan.outliers)
                side.outlier_workers.push_back(eval_to_worker.at(point));
            std::sort(side.outlier_workers.begin(), side.outlier_workers.end());
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::AmbiguousConsensus) throw;
            side.status = TallySide::Status::Ambiguous;
        }
    } else if (shares.size() == spec.plain_exact) {
        side.status = TallySide::Status::Ok;
        side.value = reconstruct(shares, spec.degree);
        side.no_redundancy = true;
    }
    return side;
}

} // namespace detail

inline VerdictReport tally(const Ledger& ledger, const ReferendumParams& params,
                           const AuditResult& audited) {
    VerdictReport rep;
    rep.record_count = ledger.size();
    rep.params_valid = true;
    rep.announcement_ok = audited.announcement_ok;
    rep.expected = expected_census(params);
    rep.actual = audited.actual;
    rep.accepted_voters = audited.accepted_voters.size();
    rep.compliance = audited.compliance;
    rep.unattributed = audited.unattributed;

    const uint32_t t = params.threshold;
    const uint64_t n = params.worker_count();
    rep.outcome_max_inactive = n - t;
    rep.checksum_max_inactive = n - (2 * uint64_t(t) - 1);
    rep.cited_checksum_bound = int64_t(n) - int64_t(t) * int64_t(t);

    // workers contributing to the tally hold BOTH intermediate records
    std::vector<size_t> w_ok;
    for (const auto& [j, seq] : audited.result_seq)
        if (audited.checksum_seq.count(j)) w_ok.push_back(j);

    std::map<size_t, uint64_t> eval_to_worker; // eval point -> worker index
    for (size_t j : w_ok) eval_to_worker[params.share_affiliation[j]] = j;

    auto shares_of = [&](const std::map<size_t, uint64_t>& seqs) {
        std::vector<Share> shares;
        for (size_t j : w_ok)
            shares.push_back(
                ledger.record(seqs.at(j)).parsed()->share_payload());
        return shares;
    };

    const auto sharing = params.sharing();
    rep.outcome = detail::tally_side(shares_of(audited.result_seq),
                                     {sharing.fresh_degree(), size_t(t) + 1, t},
                                     eval_to_worker);
    rep.checksum = detail::tally_side(
        shares_of(audited.checksum_seq),
        {sharing.squared_degree(), 2 * size_t(t), 2 * size_t(t) - 1},
        eval_to_worker);

    if (rep.outcome.value) rep.outcome_signed = rep.outcome.value->to_signed();
    if (rep.checksum.value)
        rep.checksum_valid =
            (*rep.checksum.value ==
             FieldElement(rep.accepted_voters, params.modulus));

    size_t outliers = rep.outcome.outlier_workers.size();
    for (size_t j : rep.checksum.outlier_workers)
        if (!std::count(rep.outcome.outlier_workers.begin(),
                        rep.outcome.outlier_workers.end(), j))
            ++outliers;
    rep.outlier_majority_warning = outliers > 0 && 2 * outliers >= w_ok.size();

    // verdict assembly, fixed reason order
    if (!rep.announcement_ok) rep.reasons.push_back("census-mismatch");
    if (rep.checksum_valid && !*rep.checksum_valid)
        rep.reasons.push_back("checksum-mismatch");
    const bool invalid = !rep.reasons.empty();
    if (rep.outcome.status == TallySide::Status::Ambiguous ||
        rep.checksum.status == TallySide::Status::Ambiguous)
        rep.reasons.push_back("ambiguous-consensus");
    if (rep.outcome.status == TallySide::Status::Unavailable)
        rep.reasons.push_back("outcome-unavailable");
    if (rep.checksum.status == TallySide::Status::Unavailable)
        rep.reasons.push_back("checksum-unavailable");

    if (invalid)
        rep.overall = VerdictReport::Overall::Invalid;
    else if (!rep.reasons.empty())
        rep.overall = VerdictReport::Overall::Inconclusive;
    else
        rep.overall = VerdictReport::Overall::Valid;
    return rep;
}

// Full verifier pass: integrity, then params sanity, then audit + tally.
inline VerdictReport run_verifier(const Ledger& ledger,
                                  const ReferendumParams& params) {
    VerdictReport rep;
    rep.record_count = ledger.size();
    rep.integrity = ledger.verify_integrity();
    if (rep.integrity) {
        rep.overall = VerdictReport::Overall::Invalid;
        rep.reasons.push_back("ledger-integrity");
        return rep;
    }
    try {
        params.validate();
    } catch (const Error&) {
        rep.overall = VerdictReport::Overall::Invalid;
        rep.reasons.push_back("params-invalid");
        return rep;
    }
    rep = tally(ledger, params, audit(ledger, params));
    return rep;
}

// ---------------------------------------------------------------------------
// Canonical report rendering — the bitwise cross-verifier contract.

namespace detail {

inline std::string join_seqs(const std::vector<uint64_t>& seqs) {
    std::string out = "[";
    for (size_t i = 0; i < seqs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(seqs[i]);
    }
    return out + "]";
}

} // namespace detail

inline std::string render(const VerdictReport& rep,
                          const ReferendumParams& params) {
    std::string out;
    out += "referendum-report/v1\n";
    out += "overall: ";
    out += to_string(rep.overall);
    out += "\n";
    out += "reasons: ";
    if (rep.reasons.empty()) out += "-";
    for (size_t i = 0; i < rep.reasons.size(); ++i) {
        if (i) out += ",";
        out += rep.reasons[i];
    }
    out += "\n";

    out += "ledger: records=" + std::to_string(rep.record_count) + " integrity=";
    if (rep.integrity)
        out += "violation seq=" + std::to_string(rep.integrity->seq) +
               " kind=" + to_string(rep.integrity->kind);
    else
        out += "ok";
    out += "\n";

    out += std::string("params: valid=") + (rep.params_valid ? "yes" : "no") +
           " announcement=" + (rep.announcement_ok ? "ok" : "mismatch") + "\n";
    out += "census: expected b=" + std::to_string(rep.expected.b) +
           " s=" + std::to_string(rep.expected.s) +
           " r=" + std::to_string(rep.expected.r) +
           " c=" + std::to_string(rep.expected.c) +
           " ; actual b=" + std::to_string(rep.actual.b) +
           " s=" + std::to_string(rep.actual.s) +
           " r=" + std::to_string(rep.actual.r) +
           " c=" + std::to_string(rep.actual.c) + "\n";
    out += "accepted-voters: " + std::to_string(rep.accepted_voters) + "\n";

    auto render_side = [](const TallySide& side) {
        switch (side.status) {
            case TallySide::Status::Ok: return std::string("ok");
            case TallySide::Status::Ambiguous: return std::string("ambiguous");
            case TallySide::Status::Unavailable: return std::string("unavailable");
        }
        return std::string("?");
    };

    out += "outcome: status=" + render_side(rep.outcome);
    if (rep.outcome_signed) {
        out += " value=" + std::to_string(*rep.outcome_signed) + " leading=";
        if (*rep.outcome_signed > 0) out += params.option_plus;
        else if (*rep.outcome_signed < 0) out += params.option_minus;
        else out += "tie";
    }
    out += std::string(" no-redundancy=") + (rep.outcome.no_redundancy ? "yes" : "no") + "\n";

    out += "checksum: status=" + render_side(rep.checksum);
    if (rep.checksum.value)
        out += " value=" + std::to_string(rep.checksum.value->value());
    out += " valid=";
    if (!rep.checksum_valid) out += "unknown";
    else out += *rep.checksum_valid ? "yes" : "no";
    out += std::string(" no-redundancy=") + (rep.checksum.no_redundancy ? "yes" : "no") + "\n";

    out += "outliers:";
    std::vector<size_t> all_outliers = rep.outcome.outlier_workers;
    for (size_t j : rep.checksum.outlier_workers)
        if (!std::count(all_outliers.begin(), all_outliers.end(), j))
            all_outliers.push_back(j);
    std::sort(all_outliers.begin(), all_outliers.end());
    if (all_outliers.empty()) out += " -";
    for (size_t j : all_outliers) out += " worker[" + std::to_string(j) + "]";
    out += "\n";

    out += "tolerance: outcome-max-inactive=" +
           std::to_string(rep.outcome_max_inactive) +
           " checksum-max-inactive=" + std::to_string(rep.checksum_max_inactive) +
           " cited-checksum-bound=" + std::to_string(rep.cited_checksum_bound) +
           "\n";
    out += std::string("warning-outlier-majority: ") +
           (rep.outlier_majority_warning ? "yes" : "no") + "\n";

    out += "compliance:\n";
    for (size_t e = 0; e < rep.compliance.size(); ++e) {
        const auto& entry = rep.compliance[e];
        const size_t k = params.voter_count();
        const size_t idx = entry.role == Role::Voter ? e : e - k;
        out += "  " + std::string(to_string(entry.role)) + "[" +
               std::to_string(idx) + "] " + entry.participant.short_hex() + ": ";
        if (entry.violations.empty()) {
            out += "compliant";
        } else {
            out += "violations";
            for (const auto& v : entry.violations)
                out += std::string(" ") + to_string(v.kind) + "=" +
                       detail::join_seqs(v.seqs);
        }
        out += "\n";
    }
    out += "unattributed: ";
    out += rep.unattributed.empty() ? "-" : detail::join_seqs(rep.unattributed);
    out += "\n";
    out += "end-report\n";
    return out;
}

} // namespace refsim
