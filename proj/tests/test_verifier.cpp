#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "refsim/participants.hpp"
#include "refsim/verifier.hpp"
#include "sim_fixture.hpp"

using namespace refsim;
using testutil::SimFixture;

TEST_CASE("expected census arithmetic") {
    SimFixture a(3, 3, 2);
    CHECK(expected_census(a.params) == Census{1, 9, 3, 3});
    SimFixture b(5, 3, 2);
    CHECK(expected_census(b.params) == Census{1, 15, 3, 3});
    // degenerate zero-voter census is {1, 0, n, n}
    ReferendumParams p = a.params;
    p.voters.clear();
    CHECK(expected_census(p) == Census{1, 0, 3, 3});
}

TEST_CASE("honest run: r and c match the oracle, verdict VALID") {
    SimFixture fx(3, 3, 2);
    fx.run({+1, +1, -1});
    auto rep = fx.verify();

    CHECK_FALSE(rep.integrity.has_value());
    CHECK(rep.params_valid);
    CHECK(rep.announcement_ok);
    CHECK(rep.actual == rep.expected);
    CHECK(rep.accepted_voters == 3);
    REQUIRE(rep.outcome_signed.has_value());
    CHECK(*rep.outcome_signed == 1);
    REQUIRE(rep.checksum.value.has_value());
    CHECK(rep.checksum.value->value() == 3);
    REQUIRE(rep.checksum_valid.has_value());
    CHECK(*rep.checksum_valid);
    CHECK(rep.overall == VerdictReport::Overall::Valid);
    CHECK(rep.reasons.empty());
    for (const auto& entry : rep.compliance) CHECK(entry.violations.empty());
}

TEST_CASE("symmetric votes cancel to a tie") {
    SimFixture fx(4, 3, 2);
    fx.run({+1, -1, +1, -1});
    auto rep = fx.verify();
    REQUIRE(rep.outcome_signed.has_value());
    CHECK(*rep.outcome_signed == 0);
    CHECK(rep.overall == VerdictReport::Overall::Valid);
}

TEST_CASE("a lone invalid vote breaks the checksum and the verdict") {
    SimFixture fx(5, 3, 2);
    fx.run({+1, +1, +1, +1, +1}, {{2, InvalidVote{3}}});
    auto rep = fx.verify();

    CHECK(rep.accepted_voters == 5); // metadata-compliant, content illegal
    REQUIRE(rep.checksum.value.has_value());
    CHECK(rep.checksum.value->value() == 4 + 9); // four 1² and one 3²
    REQUIRE(rep.checksum_valid.has_value());
    CHECK_FALSE(*rep.checksum_valid);
    CHECK(rep.overall == VerdictReport::Overall::Invalid);
    REQUIRE_FALSE(rep.reasons.empty());
    CHECK(rep.reasons[0] == "checksum-mismatch");
}

TEST_CASE("colluding invalid votes that fool the checksum stay Hölder-bounded") {
    // votes {2, 0, 0, 0, 1}: Σx² = 5 = k', so c passes; Σx = 3 ≤ k'
    SimFixture fx(5, 3, 2);
    fx.run({0, 0, 0, 0, 0}, {{0, InvalidVote{2}},
                             {1, InvalidVote{0}},
                             {2, InvalidVote{0}},
                             {3, InvalidVote{0}},
                             {4, InvalidVote{1}}});
    auto rep = fx.verify();
    CHECK(rep.accepted_voters == 5);
    REQUIRE(rep.checksum_valid.has_value());
    CHECK(*rep.checksum_valid);
    REQUIRE(rep.outcome_signed.has_value());
    CHECK(*rep.outcome_signed == 3);
    CHECK(std::abs(*rep.outcome_signed) <= int64_t(rep.accepted_voters));
    CHECK(rep.overall == VerdictReport::Overall::Valid);
}

TEST_CASE("tampered ledger short-circuits to INVALID{ledger-integrity}") {
    SimFixture fx(3, 3, 2);
    fx.run({+1, +1, +1});
    fx.ledger.tamper_for_test({TamperKind::FlipByte, 4, 50});
    auto rep = fx.verify();
    REQUIRE(rep.integrity.has_value());
    CHECK(rep.integrity->seq == 4);
    CHECK(rep.overall == VerdictReport::Overall::Invalid);
    REQUIRE(rep.reasons.size() == 1);
    CHECK(rep.reasons[0] == "ledger-integrity");
}

TEST_CASE("invalid params short-circuit to INVALID{params-invalid}") {
    SimFixture fx(3, 3, 2);
    fx.run({+1, +1, +1});
    ReferendumParams broken = fx.params;
    broken.modulus = 2147483646; // composite
    auto rep = run_verifier(fx.ledger, broken);
    CHECK(rep.overall == VerdictReport::Overall::Invalid);
    REQUIRE(rep.reasons.size() == 1);
    CHECK(rep.reasons[0] == "params-invalid");
}

TEST_CASE("verifying against foreign params is a census mismatch") {
    SimFixture fx(3, 3, 2);
    fx.run({+1, +1, +1});
    ReferendumParams other = fx.params;
    other.context_text = "A different question entirely?";
    auto rep = run_verifier(fx.ledger, other);
    CHECK_FALSE(rep.announcement_ok);
    CHECK(rep.overall == VerdictReport::Overall::Invalid);
    REQUIRE_FALSE(rep.reasons.empty());
    CHECK(rep.reasons[0] == "census-mismatch");
}

TEST_CASE("a second announcement spoils announcement uniqueness") {
    SimFixture fx(3, 3, 2);
    fx.run({+1, +1, +1});
    fx.ledger.append(make_init_broadcast(fx.params, fx.initiator), fx.params.q12);
    auto rep = fx.verify();
    CHECK_FALSE(rep.announcement_ok);
    CHECK(rep.overall == VerdictReport::Overall::Invalid);
}

TEST_CASE("equal-size camps of intermediates are ambiguous, never guessed") {
    // n=4, t=2: two honest workers vs two workers offset by the same +1.
    // Both camps lie on degree-1 polynomials, so no majority exists.
    SimFixture fx(4, 4, 2);
    fx.run({+1, +1, +1, -1},
           {{2, WrongIntermediate{+1, WrongIntermediate::Target::Result}},
            {3, WrongIntermediate{+1, WrongIntermediate::Target::Result}}});
    auto rep = fx.verify();
    CHECK(rep.outcome.status == TallySide::Status::Ambiguous);
    CHECK(rep.overall == VerdictReport::Overall::Inconclusive);
    REQUIRE_FALSE(rep.reasons.empty());
    CHECK(rep.reasons[0] == "ambiguous-consensus");
}

TEST_CASE("too few intermediates: outcome unavailable") {
    SimFixture fx(4, 3, 2);
    fx.run({+1, +1, +1, +1},
           {{0, Inactive{}}, {1, Inactive{}}}); // workers 0 and 1 silent
    auto rep = fx.verify();
    CHECK(rep.outcome.status == TallySide::Status::Unavailable);
    CHECK(rep.checksum.status == TallySide::Status::Unavailable);
    CHECK(rep.overall == VerdictReport::Overall::Inconclusive);
    CHECK(rep.reasons ==
          std::vector<std::string>{"outcome-unavailable", "checksum-unavailable"});
}

TEST_CASE("tolerance bounds are reported for both readings") {
    SimFixture fx(5, 5, 2);
    fx.run({+1, +1, +1, +1, +1});
    auto rep = fx.verify();
    CHECK(rep.outcome_max_inactive == 3);  // n − t
    CHECK(rep.checksum_max_inactive == 2); // n − (2t−1)
    CHECK(rep.cited_checksum_bound == 1);  // n − t²
}

TEST_CASE("phase violations: early and late intermediates are rejected") {
    SimFixture fx(3, 3, 2);
    initiator_publish(fx.params, fx.initiator, fx.ledger);
    SeededRng rng(3);
    for (size_t i = 0; i < 3; ++i)
        voter_act(+1, Honest{}, fx.voters[i], fx.params, fx.ledger, 12, rng);
    // worker 0 fires before q23, worker 1 after q34, worker 2 in time
    worker_act(Honest{}, fx.worker_keypair(0), fx.params, fx.ledger, 15);
    worker_act(Honest{}, fx.worker_keypair(1), fx.params, fx.ledger, 35);
    worker_act(Honest{}, fx.worker_keypair(2), fx.params, fx.ledger, 25);

    auto audited = audit(fx.ledger, fx.params);
    const size_t k = fx.params.voter_count();
    CHECK(audited.compliance[k + 0].has(ViolationKind::IllegalPhase));
    CHECK(audited.compliance[k + 1].has(ViolationKind::Late));
    CHECK(audited.compliance[k + 2].violations.empty());
    CHECK(audited.result_seq.size() == 1);

    auto rep = fx.verify();
    CHECK(rep.outcome.status == TallySide::Status::Unavailable);
    CHECK(rep.overall == VerdictReport::Overall::Inconclusive);
}

TEST_CASE("early vote shares are illegal-phase, not late") {
    SimFixture fx(3, 3, 2);
    initiator_publish(fx.params, fx.initiator, fx.ledger);
    SeededRng rng(4);
    voter_act(+1, Honest{}, fx.voters[0], fx.params, fx.ledger, 5, rng); // < q12
    voter_act(+1, Honest{}, fx.voters[1], fx.params, fx.ledger, 12, rng);
    voter_act(+1, Honest{}, fx.voters[2], fx.params, fx.ledger, 12, rng);
    for (size_t j = 0; j < 3; ++j)
        worker_act(Honest{}, fx.worker_keypair(j), fx.params, fx.ledger, 22);

    auto audited = audit(fx.ledger, fx.params);
    CHECK(audited.compliance[0].has(ViolationKind::IllegalPhase));
    CHECK(audited.compliance[0].has(ViolationKind::Inactivity));
    CHECK(audited.accepted_voters == std::set<size_t>{1, 2});
}

TEST_CASE("intermediates from a non-worker voter are illegal-phase for them") {
    SimFixture fx(4, 3, 2);
    fx.run({+1, +1, +1, +1});
    // voter 3 is not a worker; it publishes a plausible-looking result share
    Share s{FieldElement(1, fx.params.modulus), FieldElement(5, fx.params.modulus),
            fx.params.sharing().fresh_degree()};
    fx.ledger.append(make_result_share(s, fx.voters[3]), 25);

    auto audited = audit(fx.ledger, fx.params);
    CHECK(audited.compliance[3].has(ViolationKind::IllegalPhase));
    auto rep = fx.verify();
    CHECK(rep.overall == VerdictReport::Overall::Valid); // tally unaffected
}

TEST_CASE("intermediates with foreign eval points or degrees are syntax") {
    SimFixture fx(3, 3, 2);
    fx.run({+1, +1, +1});
    const uint64_t p = fx.params.modulus;
    const size_t k = fx.params.voter_count();

    SECTION("wrong eval point for this worker") {
        // worker 0 publishes a share positioned at worker 1's point
        Share s{FieldElement(2, p), FieldElement(5, p),
                fx.params.sharing().fresh_degree()};
        uint64_t seq = fx.ledger.append(
            make_result_share(s, fx.worker_keypair(0)), 25);
        auto audited = audit(fx.ledger, fx.params);
        CHECK(audited.compliance[k + 0].has(ViolationKind::Syntax));
        // a syntax-dropped record never reaches duplicate resolution, so the
        // honest (older) record still stands
        CHECK(audited.result_seq.at(0) != seq);
    }
    SECTION("wrong degree hint") {
        Share s{FieldElement(1, p), FieldElement(5, p), 7};
        fx.ledger.append(make_result_share(s, fx.worker_keypair(0)), 25);
        auto audited = audit(fx.ledger, fx.params);
        CHECK(audited.compliance[k + 0].has(ViolationKind::Syntax));
    }
    SECTION("foreign modulus") {
        Share s{FieldElement(1, 13), FieldElement(5, 13),
                fx.params.sharing().fresh_degree()};
        fx.ledger.append(make_result_share(s, fx.worker_keypair(0)), 25);
        auto audited = audit(fx.ledger, fx.params);
        CHECK(audited.compliance[k + 0].has(ViolationKind::Syntax));
    }
}

TEST_CASE("duplicate intermediates resolve to the latest") {
    SimFixture fx(5, 5, 2);
    fx.run({+1, +1, -1, +1, -1});
    // worker 0 republishes its result share with a different value
    auto audited_before = audit(fx.ledger, fx.params);
    Share honest = fx.ledger.record(audited_before.result_seq.at(0))
                       .parsed()->share_payload();
    Share bumped{honest.eval_point, honest.value + FieldElement(1, fx.params.modulus),
                 honest.degree_hint};
    uint64_t seq = fx.ledger.append(
        make_result_share(bumped, fx.worker_keypair(0)), 26);

    auto audited = audit(fx.ledger, fx.params);
    const size_t k = fx.params.voter_count();
    CHECK(audited.compliance[k + 0].has(ViolationKind::DuplicateResolved));
    CHECK(audited.result_seq.at(0) == seq);
    // the bumped value now disagrees with the other four workers
    auto rep = fx.verify();
    CHECK(rep.outcome.outlier_workers == std::vector<size_t>{0});
    REQUIRE(rep.outcome_signed.has_value());
    CHECK(*rep.outcome_signed == 1);
}

TEST_CASE("monotone attribution: adversarial noise never alters honest tallies") {
    const std::vector<int64_t> votes{+1, -1, +1, +1};
    SimFixture clean(4, 3, 2, 2147483647ULL, 555);
    clean.run(votes);
    auto clean_audit = audit(clean.ledger, clean.params);
    auto clean_rep = clean.verify();

    // identical honest run (same seed), then adversarial records on top
    SimFixture noisy(4, 3, 2, 2147483647ULL, 555);
    noisy.run(votes);
    SeededRng adv(999);
    // unattributable junk
    std::vector<uint8_t> blob(30, 0xFF);
    noisy.ledger.append_raw(blob, 12);
    // impersonation of an honest voter (bad signature)
    KeyPair outsider = gen_keypair(adv);
    Share s{FieldElement(1, noisy.params.modulus),
            FieldElement(7, noisy.params.modulus),
            noisy.params.sharing().fresh_degree()};
    noisy.ledger.append(
        make_with_forged_sender(MessageType::VoteShare, noisy.voters[0].id,
                                noisy.params.workers[0],
                                encrypt(encode_share(s), noisy.params.workers[0], adv).blob,
                                outsider),
        12);
    // a full share set from an unregistered keypair
    voter_act(+1, Honest{}, outsider, noisy.params, noisy.ledger, 13, adv);

    auto noisy_audit = audit(noisy.ledger, noisy.params);
    CHECK(noisy_audit.accepted == clean_audit.accepted);
    CHECK(noisy_audit.accepted_voters == clean_audit.accepted_voters);

    auto noisy_rep = noisy.verify();
    CHECK(noisy_rep.outcome_signed == clean_rep.outcome_signed);
    CHECK(noisy_rep.checksum.value->value() == clean_rep.checksum.value->value());
    CHECK(noisy_rep.overall == VerdictReport::Overall::Valid);
}

TEST_CASE("verifier unanimity: repeated passes render byte-identical reports") {
    SimFixture fx(5, 3, 2);
    fx.run({+1, -1, +1, -1, +1},
           {{1, SyntacticGarbage{}}, {4, DoubleVote{{{+1, 12}, {-1, 14}}}}});
    auto r1 = render(fx.verify(), fx.params);
    auto r2 = render(run_verifier(fx.ledger, fx.params), fx.params);
    CHECK(r1 == r2);
    CHECK(r1.find("referendum-report/v1\n") == 0);
    CHECK(r1.find("end-report\n") != std::string::npos);
}

TEST_CASE("render pins every section in canonical order") {
    SimFixture fx(3, 3, 2);
    fx.run({+1, +1, -1});
    std::string text = render(fx.verify(), fx.params);

    const char* expected_lines[] = {
        "referendum-report/v1",
        "overall: VALID",
        "reasons: -",
        "ledger: records=16 integrity=ok",
        "params: valid=yes announcement=ok",
        "census: expected b=1 s=9 r=3 c=3 ; actual b=1 s=9 r=3 c=3",
        "accepted-voters: 3",
        "outcome: status=ok value=1 leading=yes no-redundancy=no",
        "checksum: status=ok value=3 valid=yes no-redundancy=yes",
        "outliers: -",
        "tolerance: outcome-max-inactive=1 checksum-max-inactive=0 cited-checksum-bound=-1",
        "warning-outlier-majority: no",
        "compliance:",
    };
    size_t pos = 0;
    for (const char* line : expected_lines) {
        size_t found = text.find(std::string(line) + "\n", pos);
        REQUIRE(found != std::string::npos);
        pos = found;
    }
    CHECK(text.find("unattributed: -\n") != std::string::npos);
}

TEST_CASE("no private key bytes ever appear in dumps or reports") {
    SimFixture fx(4, 3, 2);
    fx.run({+1, -1, +1, -1}, {{3, InvalidVote{2}}});
    std::string dump = fx.ledger.dump();
    std::string report = render(fx.verify(), fx.params);

    auto leaks = [&](const std::array<uint8_t, 32>& key) {
        // look for any 8-byte window of the key in either artifact
        for (size_t off = 0; off + 8 <= key.size(); ++off) {
            std::string needle(key.begin() + off, key.begin() + off + 8);
            if (dump.find(needle) != std::string::npos) return true;
            if (report.find(needle) != std::string::npos) return true;
        }
        return false;
    };
    CHECK_FALSE(leaks(fx.initiator.private_key));
    for (const auto& kp : fx.voters) CHECK_FALSE(leaks(kp.private_key));
}

TEST_CASE("outliers across both scans are pooled for the majority warning") {
    // n=6, t=2: workers 0,1 corrupt only their checksum shares, workers 2,3
    // corrupt only their result shares. Each scan still finds a clean 4-vs-2
    // consensus, but pooled outliers reach half the workforce.
    SimFixture fx(6, 6, 2);
    WrongIntermediate on_c{+3, WrongIntermediate::Target::Checksum};
    WrongIntermediate on_r{+2, WrongIntermediate::Target::Result};
    fx.run({+1, +1, +1, +1, +1, +1},
           {{0, on_c}, {1, on_c}, {2, on_r}, {3, on_r}});
    auto rep = fx.verify();

    CHECK(rep.outcome.outlier_workers == std::vector<size_t>{2, 3});
    CHECK(rep.checksum.outlier_workers == std::vector<size_t>{0, 1});
    REQUIRE(rep.outcome_signed.has_value());
    CHECK(*rep.outcome_signed == 6);
    REQUIRE(rep.checksum_valid.has_value());
    CHECK(*rep.checksum_valid);
    CHECK(rep.outlier_majority_warning); // 4 distinct outliers of 6 workers
    CHECK(rep.overall == VerdictReport::Overall::Valid);
}

TEST_CASE("a colluding majority hijacks consensus without tripping the warning") {
    // n=5, t=2: three workers collude on the same offset. Their camp is the
    // larger one, so consensus follows the forgery and the two honest workers
    // are the ones flagged — and 2 outliers of 5 stays under the warning
    // threshold. Detecting this needs out-of-band trust, not more math; the
    // report still names the disagreeing pair for a human to chase.
    SimFixture fx(5, 5, 2);
    WrongIntermediate w{+2, WrongIntermediate::Target::Result};
    fx.run({+1, +1, +1, +1, +1}, {{0, w}, {1, w}, {2, w}});
    auto rep = fx.verify();
    CHECK(rep.outcome.status == TallySide::Status::Ok);
    CHECK(rep.outcome.outlier_workers == std::vector<size_t>{3, 4});
    REQUIRE(rep.outcome_signed.has_value());
    CHECK(*rep.outcome_signed == 5 + 2); // hijacked value
    CHECK_FALSE(rep.outlier_majority_warning);
    REQUIRE(rep.checksum_valid.has_value());
    CHECK(*rep.checksum_valid); // checksum side untouched, so no alarm there
    CHECK(rep.overall == VerdictReport::Overall::Valid); // documented limit
}
