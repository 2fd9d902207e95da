#pragma once

// Declarative scenario configs and the end-to-end runner. A scenario names
// the electorate, the deadlines, one vote + behavior per participant, and
// (in test builds) ledger tamper injections; running it executes the full
// four-phase protocol on a logical tick clock and hands the resulting ledger
// to the verifier.
//
// Determinism contract: the same (config, seed) always yields byte-identical
// ledger dumps and byte-identical rendered reports. Randomness is split into
// three independent streams so no component can perturb another:
//   seed     -> keypair generation (initiator, then voters in index order)
//   seed + 1 -> per-voter polynomial randomness, forked in index order
//   seed + 2 -> execution-order shuffle among actions sharing a tick
// The trace file additionally carries a wall-clock timing line, so traces are
// NOT covered by the byte-identity contract; dumps and reports are.
//
// Config errors (unknown keys, bad indices, unrunnable parameters) throw
// ErrorKind::Config / InvalidParams before any protocol action executes.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "refsim/errors.hpp"
#include "refsim/ledger.hpp"
#include "refsim/messages.hpp"
#include "refsim/participants.hpp"
#include "refsim/rng.hpp"
#include "refsim/verifier.hpp"

namespace refsim {

// Behavior description by participant/worker index, resolvable to a runtime
// Behavior only once keypairs exist.
struct BehaviorSpec {
    enum class Kind {
        Honest,
        Inactive,
        PartialDistribution,
        SyntacticGarbage,
        Impersonate,
        InvalidVote,
        WrongIntermediate,
        DoubleVote,
    };
    Kind kind = Kind::Honest;
    std::set<size_t> serve;    // partial-distribution: worker indices to serve
    size_t target = 0;         // impersonate: victim's voter index
    int64_t value = 0;         // invalid-vote: the illegal ballot value
    int64_t offset = 0;        // wrong-intermediate: additive share error
    WrongIntermediate::Target wi_target = WrongIntermediate::Target::Result;
    std::vector<std::pair<int64_t, uint64_t>> revotes; // double-vote (vote, tick)
};

struct ParticipantSpec {
    int64_t vote = 1; // +1 or −1
    BehaviorSpec behavior;
};

struct TamperSpec {
    uint64_t after_tick = 0; // applied once all actions at this tick ran
    TamperKind mutation = TamperKind::Identity;
    uint64_t seq = 0;    // target record (new size for truncate-chain)
    uint64_t offset = 0; // bit index for flip-bit, byte index for flip-byte
};

struct ScenarioConfig {
    std::string name; // optional label, echoed in the trace
    uint64_t voters = 0;
    uint64_t workers = 0;
    uint32_t threshold = 0;
    uint64_t modulus = 2147483647ULL;
    uint64_t q12 = 10, q23 = 20, q34 = 30;
    uint64_t seed = 0;
    std::string question = "Adopt the proposal?";
    std::string option_plus = "yes";
    std::string option_minus = "no";
    std::vector<ParticipantSpec> participants;
    std::vector<TamperSpec> tampers;

    // structural checks with field-level diagnostics; anything about the
    // referendum parameters themselves is left to ReferendumParams::validate
    void validate() const {
        auto bad = [](const std::string& field, const std::string& why) {
            fail(ErrorKind::Config, field + ": " + why);
        };
        if (participants.size() != voters)
            bad("participants", "need exactly one entry per voter, got " +
                                    std::to_string(participants.size()) +
                                    " for voters=" + std::to_string(voters));
        for (size_t i = 0; i < participants.size(); ++i) {
            const std::string where = "participants[" + std::to_string(i) + "]";
            const auto& ps = participants[i];
            if (ps.vote != 1 && ps.vote != -1)
                bad(where + ".vote", "must be 1 or -1 (illegal ballots are "
                                     "expressed via the invalid-vote behavior)");
            const auto& bs = ps.behavior;
            switch (bs.kind) {
                case BehaviorSpec::Kind::PartialDistribution:
                    for (size_t w : bs.serve)
                        if (w >= workers)
                            bad(where + ".behavior.serve",
                                "worker index " + std::to_string(w) +
                                    " out of range (workers=" +
                                    std::to_string(workers) + ")");
                    break;
                case BehaviorSpec::Kind::Impersonate:
                    if (bs.target >= voters)
                        bad(where + ".behavior.target",
                            "voter index " + std::to_string(bs.target) +
                                " out of range (voters=" +
                                std::to_string(voters) + ")");
                    break;
                case BehaviorSpec::Kind::DoubleVote:
                    if (bs.revotes.empty())
                        bad(where + ".behavior.revotes", "must list at least one "
                                                         "(vote, tick) entry");
                    for (const auto& [v, tick] : bs.revotes)
                        if (v != 1 && v != -1)
                            bad(where + ".behavior.revotes",
                                "vote values must be 1 or -1");
                    break;
                default:
                    break;
            }
        }
        if (workers > voters)
            bad("workers", "cannot exceed voters (workers are drawn from the "
                           "electorate)");
#ifndef REFSIM_ENABLE_TAMPER
        if (!tampers.empty())
            bad("tampers", "tamper injection requires a build with "
                           "REFSIM_ENABLE_TAMPER");
#endif
    }

    static ScenarioConfig from_json_text(std::string_view text);
};

// ---------------------------------------------------------------------------
// JSON config parsing. Unknown keys are hard errors so a typo in an adversary
// description cannot silently produce an honest run.

namespace detail {

using nlohmann::json;

[[noreturn]] inline void cfg_fail(const std::string& where, const std::string& why) {
    fail(ErrorKind::Config, where + ": " + why);
}

inline void expect_keys(const json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) cfg_fail(where, "must be an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) { known = true; break; }
        if (!known) cfg_fail(where + "." + item.key(), "unknown key");
    }
}

inline const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline const json& require(const json& obj, const std::string& where,
                           const char* key) {
    const json* j = find(obj, key);
    if (!j) cfg_fail(where + "." + key, "missing required key");
    return *j;
}

inline uint64_t as_u64(const json& j, const std::string& where) {
    if (j.is_number_unsigned()) return j.get<uint64_t>();
    if (j.is_number_integer() && j.get<int64_t>() >= 0)
        return uint64_t(j.get<int64_t>());
    cfg_fail(where, "must be a non-negative integer");
}

inline int64_t as_i64(const json& j, const std::string& where) {
    if (j.is_number_integer()) return j.get<int64_t>();
    if (j.is_number_unsigned() && j.get<uint64_t>() <= uint64_t(INT64_MAX))
        return int64_t(j.get<uint64_t>());
    cfg_fail(where, "must be an integer");
}

inline std::string as_str(const json& j, const std::string& where) {
    if (!j.is_string()) cfg_fail(where, "must be a string");
    return j.get<std::string>();
}

inline BehaviorSpec parse_behavior(const json& j, const std::string& where) {
    expect_keys(j, where,
                {"kind", "serve", "target", "value", "offset", "revotes"});
    BehaviorSpec bs;
    const std::string kind = as_str(require(j, where, "kind"), where + ".kind");

    auto only = [&](std::initializer_list<const char*> wanted) {
        for (const auto& item : j.items()) {
            if (item.key() == "kind") continue;
            bool ok = false;
            for (const char* k : wanted)
                if (item.key() == k) { ok = true; break; }
            if (!ok)
                cfg_fail(where + "." + item.key(),
                         "not a parameter of behavior kind '" + kind + "'");
        }
    };

    if (kind == "honest") {
        bs.kind = BehaviorSpec::Kind::Honest;
        only({});
    } else if (kind == "inactive") {
        bs.kind = BehaviorSpec::Kind::Inactive;
        only({});
    } else if (kind == "partial-distribution") {
        bs.kind = BehaviorSpec::Kind::PartialDistribution;
        only({"serve"});
        const json& arr = require(j, where, "serve");
        if (!arr.is_array()) cfg_fail(where + ".serve", "must be an array");
        for (size_t a = 0; a < arr.size(); ++a)
            bs.serve.insert(size_t(
                as_u64(arr[a], where + ".serve[" + std::to_string(a) + "]")));
    } else if (kind == "syntactic-garbage") {
        bs.kind = BehaviorSpec::Kind::SyntacticGarbage;
        only({});
    } else if (kind == "impersonate") {
        bs.kind = BehaviorSpec::Kind::Impersonate;
        only({"target"});
        bs.target =
            size_t(as_u64(require(j, where, "target"), where + ".target"));
    } else if (kind == "invalid-vote") {
        bs.kind = BehaviorSpec::Kind::InvalidVote;
        only({"value"});
        bs.value = as_i64(require(j, where, "value"), where + ".value");
    } else if (kind == "wrong-intermediate") {
        bs.kind = BehaviorSpec::Kind::WrongIntermediate;
        only({"offset", "target"});
        bs.offset = as_i64(require(j, where, "offset"), where + ".offset");
        const std::string t =
            as_str(require(j, where, "target"), where + ".target");
        if (t == "result") bs.wi_target = WrongIntermediate::Target::Result;
        else if (t == "checksum") bs.wi_target = WrongIntermediate::Target::Checksum;
        else if (t == "both") bs.wi_target = WrongIntermediate::Target::Both;
        else cfg_fail(where + ".target", "must be result|checksum|both");
    } else if (kind == "double-vote") {
        bs.kind = BehaviorSpec::Kind::DoubleVote;
        only({"revotes"});
        const json& arr = require(j, where, "revotes");
        if (!arr.is_array()) cfg_fail(where + ".revotes", "must be an array");
        for (size_t a = 0; a < arr.size(); ++a) {
            const std::string rw = where + ".revotes[" + std::to_string(a) + "]";
            expect_keys(arr[a], rw, {"vote", "tick"});
            bs.revotes.emplace_back(
                as_i64(require(arr[a], rw, "vote"), rw + ".vote"),
                as_u64(require(arr[a], rw, "tick"), rw + ".tick"));
        }
    } else {
        cfg_fail(where + ".kind", "unknown behavior kind '" + kind + "'");
    }
    return bs;
}

inline TamperSpec parse_tamper(const json& j, const std::string& where) {
    expect_keys(j, where, {"after_tick", "mutation", "seq", "offset"});
    TamperSpec ts;
    ts.after_tick = as_u64(require(j, where, "after_tick"), where + ".after_tick");
    const std::string m =
        as_str(require(j, where, "mutation"), where + ".mutation");
    bool needs_offset = false;
    if (m == "flip-bit") { ts.mutation = TamperKind::FlipBit; needs_offset = true; }
    else if (m == "flip-byte") { ts.mutation = TamperKind::FlipByte; needs_offset = true; }
    else if (m == "erase-record") ts.mutation = TamperKind::EraseRecord;
    else if (m == "truncate-chain") ts.mutation = TamperKind::TruncateChain;
    else if (m == "identity") ts.mutation = TamperKind::Identity;
    else cfg_fail(where + ".mutation",
                  "must be flip-bit|flip-byte|erase-record|truncate-chain|identity");
    if (const json* s = find(j, "seq")) ts.seq = as_u64(*s, where + ".seq");
    else if (ts.mutation != TamperKind::Identity)
        cfg_fail(where + ".seq", "missing required key");
    if (const json* o = find(j, "offset")) ts.offset = as_u64(*o, where + ".offset");
    else if (needs_offset) cfg_fail(where + ".offset", "missing required key");
    return ts;
}

} // namespace detail

inline ScenarioConfig ScenarioConfig::from_json_text(std::string_view text) {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Config, std::string("config: not valid JSON: ") + e.what());
    }
    detail::expect_keys(root, "config",
                        {"name", "voters", "workers", "threshold", "modulus",
                         "deadlines", "seed", "question", "options",
                         "participants", "tampers"});

    ScenarioConfig cfg;
    if (const json* v = detail::find(root, "name"))
        cfg.name = detail::as_str(*v, "config.name");
    cfg.voters = detail::as_u64(detail::require(root, "config", "voters"),
                                "config.voters");
    cfg.workers = detail::as_u64(detail::require(root, "config", "workers"),
                                 "config.workers");
    cfg.threshold = uint32_t(detail::as_u64(
        detail::require(root, "config", "threshold"), "config.threshold"));
    if (const json* v = detail::find(root, "modulus"))
        cfg.modulus = detail::as_u64(*v, "config.modulus");
    if (const json* v = detail::find(root, "deadlines")) {
        detail::expect_keys(*v, "config.deadlines", {"q12", "q23", "q34"});
        cfg.q12 = detail::as_u64(detail::require(*v, "config.deadlines", "q12"),
                                 "config.deadlines.q12");
        cfg.q23 = detail::as_u64(detail::require(*v, "config.deadlines", "q23"),
                                 "config.deadlines.q23");
        cfg.q34 = detail::as_u64(detail::require(*v, "config.deadlines", "q34"),
                                 "config.deadlines.q34");
    }
    cfg.seed =
        detail::as_u64(detail::require(root, "config", "seed"), "config.seed");
    if (const json* v = detail::find(root, "question"))
        cfg.question = detail::as_str(*v, "config.question");
    if (const json* v = detail::find(root, "options")) {
        detail::expect_keys(*v, "config.options", {"plus", "minus"});
        cfg.option_plus = detail::as_str(
            detail::require(*v, "config.options", "plus"), "config.options.plus");
        cfg.option_minus =
            detail::as_str(detail::require(*v, "config.options", "minus"),
                           "config.options.minus");
    }
    const detail::json& parts =
        detail::require(root, "config", "participants");
    if (!parts.is_array())
        detail::cfg_fail("config.participants", "must be an array");
    for (size_t i = 0; i < parts.size(); ++i) {
        const std::string where = "config.participants[" + std::to_string(i) + "]";
        detail::expect_keys(parts[i], where, {"vote", "behavior"});
        ParticipantSpec ps;
        ps.vote = detail::as_i64(detail::require(parts[i], where, "vote"),
                                 where + ".vote");
        if (const detail::json* b = detail::find(parts[i], "behavior"))
            ps.behavior = detail::parse_behavior(*b, where + ".behavior");
        cfg.participants.push_back(std::move(ps));
    }
    if (const detail::json* v = detail::find(root, "tampers")) {
        if (!v->is_array()) detail::cfg_fail("config.tampers", "must be an array");
        for (size_t a = 0; a < v->size(); ++a)
            cfg.tampers.push_back(detail::parse_tamper(
                (*v)[a], "config.tampers[" + std::to_string(a) + "]"));
    }
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Setup and execution

struct ScenarioSetup {
    KeyPair initiator;
    std::vector<KeyPair> voter_keys; // aligned with params.voters
    ReferendumParams params;
};

// Deterministic identities and parameters. Workers are the first n voters,
// worker j evaluates at point j+1. Does NOT call params.validate(): the
// runner does (config error), while replay leaves judgement to the verifier.
inline ScenarioSetup build_setup(const ScenarioConfig& cfg) {
    ScenarioSetup s;
    SeededRng key_rng(cfg.seed);
    s.initiator = gen_keypair(key_rng);
    s.params.initiator = s.initiator.id;
    for (uint64_t i = 0; i < cfg.voters; ++i) {
        s.voter_keys.push_back(gen_keypair(key_rng));
        s.params.voters.push_back(s.voter_keys.back().id);
    }
    for (uint64_t j = 0; j < cfg.workers && j < cfg.voters; ++j) {
        s.params.workers.push_back(s.voter_keys[j].id);
        s.params.share_affiliation.push_back(j + 1);
    }
    s.params.threshold = cfg.threshold;
    s.params.modulus = cfg.modulus;
    s.params.q12 = cfg.q12;
    s.params.q23 = cfg.q23;
    s.params.q34 = cfg.q34;
    s.params.context_text = cfg.question;
    s.params.option_plus = cfg.option_plus;
    s.params.option_minus = cfg.option_minus;
    return s;
}

namespace detail {

inline Behavior materialize(const BehaviorSpec& bs,
                            const std::vector<KeyPair>& voter_keys) {
    switch (bs.kind) {
        case BehaviorSpec::Kind::Honest: return Honest{};
        case BehaviorSpec::Kind::Inactive: return Inactive{};
        case BehaviorSpec::Kind::PartialDistribution:
            return PartialDistribution{bs.serve};
        case BehaviorSpec::Kind::SyntacticGarbage: return SyntacticGarbage{};
        case BehaviorSpec::Kind::Impersonate:
            return Impersonate{voter_keys.at(bs.target).id};
        case BehaviorSpec::Kind::InvalidVote: return InvalidVote{bs.value};
        case BehaviorSpec::Kind::WrongIntermediate:
            return WrongIntermediate{bs.offset, bs.wi_target};
        case BehaviorSpec::Kind::DoubleVote: return DoubleVote{bs.revotes};
    }
    return Honest{};
}

inline std::string tamper_label(const TamperSpec& ts) {
    switch (ts.mutation) {
        case TamperKind::FlipBit:
            return "flip-bit seq=" + std::to_string(ts.seq) +
                   " offset=" + std::to_string(ts.offset);
        case TamperKind::FlipByte:
            return "flip-byte seq=" + std::to_string(ts.seq) +
                   " offset=" + std::to_string(ts.offset);
        case TamperKind::EraseRecord:
            return "erase-record seq=" + std::to_string(ts.seq);
        case TamperKind::TruncateChain:
            return "truncate-chain size=" + std::to_string(ts.seq);
        case TamperKind::Identity: return "identity";
    }
    return "?";
}

} // namespace detail

struct ScenarioResult {
    ReferendumParams params;
    Ledger ledger;
    VerdictReport report;
    std::string report_text;
    std::string trace_text; // carries a timing line; not byte-reproducible
    int exit_code = 1;
};

inline int exit_code_of(VerdictReport::Overall overall) {
    switch (overall) {
        case VerdictReport::Overall::Valid: return 0;
        case VerdictReport::Overall::Invalid: return 2;
        case VerdictReport::Overall::Inconclusive: return 3;
    }
    return 1;
}

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    cfg.validate();
    ScenarioSetup setup = build_setup(cfg);
    setup.params.validate(); // unrunnable parameters are a config error
    const ReferendumParams& params = setup.params;

    std::vector<Behavior> behaviors;
    for (const auto& ps : cfg.participants)
        behaviors.push_back(detail::materialize(ps.behavior, setup.voter_keys));

    SeededRng act_master(cfg.seed + 1);
    std::vector<SeededRng> voter_rngs;
    for (uint64_t i = 0; i < cfg.voters; ++i)
        voter_rngs.push_back(act_master.fork());
    SeededRng order_rng(cfg.seed + 2);

    // schedule: initiator at q12; voters spread over the submission window
    // (double-voters at their listed ticks); workers spread over theirs
    struct Action {
        enum class Stage { Announce, Voter, Worker } stage;
        size_t index = 0;
    };
    std::map<uint64_t, std::vector<Action>> plan;
    plan[params.q12].push_back({Action::Stage::Announce, 0});
    const uint64_t vwindow =
        params.q23 - params.q12 > 1 ? params.q23 - params.q12 - 1 : 1;
    const uint64_t vbase =
        params.q23 - params.q12 > 1 ? params.q12 + 1 : params.q12;
    for (size_t i = 0; i < behaviors.size(); ++i) {
        if (const auto* dv = std::get_if<DoubleVote>(&behaviors[i])) {
            std::set<uint64_t> due;
            for (const auto& [vote, tick] : dv->revotes) due.insert(tick);
            for (uint64_t tick : due)
                plan[tick].push_back({Action::Stage::Voter, i});
        } else {
            plan[vbase + (i % vwindow)].push_back({Action::Stage::Voter, i});
        }
    }
    const uint64_t wwindow = params.q34 - params.q23;
    for (size_t j = 0; j < params.worker_count(); ++j)
        plan[params.q23 + (j % wwindow)].push_back({Action::Stage::Worker, j});

    std::map<uint64_t, std::vector<size_t>> tamper_plan;
    for (size_t a = 0; a < cfg.tampers.size(); ++a)
        tamper_plan[cfg.tampers[a].after_tick].push_back(a);

    ScenarioResult res;
    res.params = params;
    std::string& trace = res.trace_text;
    trace += "scenario-trace/v1\n";
    trace += "name: " + (cfg.name.empty() ? std::string("-") : cfg.name) + "\n";
    trace += "seed: " + std::to_string(cfg.seed) + "\n";
    trace += "electorate: voters=" + std::to_string(cfg.voters) +
             " workers=" + std::to_string(cfg.workers) +
             " threshold=" + std::to_string(cfg.threshold) +
             " modulus=" + std::to_string(cfg.modulus) + "\n";
    trace += "deadlines: q12=" + std::to_string(params.q12) +
             " q23=" + std::to_string(params.q23) +
             " q34=" + std::to_string(params.q34) + "\n";

    std::set<uint64_t> ticks;
    for (const auto& [tick, acts] : plan) ticks.insert(tick);
    for (const auto& [tick, idx] : tamper_plan) ticks.insert(tick);

    for (uint64_t tick : ticks) {
        if (auto it = plan.find(tick); it != plan.end()) {
            auto& acts = it->second;
            for (size_t i = acts.size(); i > 1; --i)
                std::swap(acts[i - 1], acts[order_rng.uniform(i)]);
            for (const Action& act : acts) {
                std::vector<uint64_t> seqs;
                std::string who;
                switch (act.stage) {
                    case Action::Stage::Announce:
                        seqs.push_back(
                            initiator_publish(params, setup.initiator, res.ledger));
                        who = "initiator announce";
                        break;
                    case Action::Stage::Voter:
                        seqs = voter_act(cfg.participants[act.index].vote,
                                         behaviors[act.index],
                                         setup.voter_keys[act.index], params,
                                         res.ledger, tick, voter_rngs[act.index]);
                        who = "voter[" + std::to_string(act.index) + "] " +
                              behavior_name(behaviors[act.index]);
                        break;
                    case Action::Stage::Worker:
                        seqs = worker_act(behaviors[act.index],
                                          setup.voter_keys[act.index], params,
                                          res.ledger, tick);
                        who = "worker[" + std::to_string(act.index) + "] " +
                              behavior_name(behaviors[act.index]);
                        break;
                }
                trace += "tick " + std::to_string(tick) + ": " + who + " -> seq " +
                         detail::join_seqs(seqs) + "\n";
            }
        }
#ifdef REFSIM_ENABLE_TAMPER
        if (auto it = tamper_plan.find(tick); it != tamper_plan.end()) {
            for (size_t a : it->second) {
                const TamperSpec& ts = cfg.tampers[a];
                res.ledger.tamper_for_test(
                    Tamper{ts.mutation, ts.seq, ts.offset});
                trace += "tick " + std::to_string(tick) +
                         ": tamper " + detail::tamper_label(ts) + "\n";
            }
        }
#endif
    }

    res.report = run_verifier(res.ledger, params);
    res.report_text = render(res.report, params);
    res.exit_code = exit_code_of(res.report.overall);

    trace += std::string("verdict: ") + to_string(res.report.overall) + "\n";
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    trace += "elapsed-ms: " + std::to_string(elapsed.count()) + "\n";
    trace += "end-trace\n";
    return res;
}

// Verifier-only pass over an existing dump, judged against the referendum
// the config describes. Structurally corrupt dumps throw ErrorKind::Encoding;
// content-level corruption surfaces as an integrity violation in the report.
inline ScenarioResult replay_scenario(std::string_view dump_text,
                                      const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioSetup setup = build_setup(cfg);
    ScenarioResult res;
    res.params = setup.params;
    res.ledger = Ledger::load(dump_text);
    res.report = run_verifier(res.ledger, res.params);
    res.report_text = render(res.report, res.params);
    res.exit_code = exit_code_of(res.report.overall);
    return res;
}

// ---------------------------------------------------------------------------
// Artifacts

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Config, "cannot open for writing: " + path.string());
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) fail(ErrorKind::Config, "write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Config, "cannot open: " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

// Writes ledger.dump, report.txt and trace.txt under dir (created if needed).
inline void write_artifacts(const ScenarioResult& res,
                            const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Config,
                 "cannot create output directory " + dir.string() + ": " +
                     ec.message());
    write_text_file(dir / "ledger.dump", res.ledger.dump());
    write_text_file(dir / "report.txt", res.report_text);
    if (!res.trace_text.empty()) write_text_file(dir / "trace.txt", res.trace_text);
}

} // namespace refsim
