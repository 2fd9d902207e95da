// Quickstart walkthrough: run a small referendum with one misbehaving voter
// and one skewed worker, print the proceedings and the verdict, then show
// that replaying the published dump reproduces the report byte for byte and
// that a single flipped byte in the ledger is caught.

#include <iostream>

#include "refsim/refsim.hpp"

using namespace refsim;

int main() {
    ScenarioConfig cfg;
    cfg.name = "quickstart";
    cfg.voters = 5;
    cfg.workers = 5;
    cfg.threshold = 2;
    cfg.seed = 2026;
    cfg.participants.resize(5);
    cfg.participants[0].vote = +1;
    cfg.participants[1].vote = -1;
    cfg.participants[2].vote = +1;
    // voter 3 never shows up
    cfg.participants[3].behavior.kind = BehaviorSpec::Kind::Inactive;
    cfg.participants[4].vote = +1;
    // worker 4 adds +7 to its intermediate result share
    cfg.participants[4].behavior.kind = BehaviorSpec::Kind::WrongIntermediate;
    cfg.participants[4].behavior.offset = 7;

    ScenarioResult res = run_scenario(cfg);
    std::cout << res.trace_text << "\n" << res.report_text << "\n";

    ScenarioResult again = replay_scenario(res.ledger.dump(), cfg);
    std::cout << "replay report identical: "
              << (again.report_text == res.report_text ? "yes" : "NO") << "\n";

    Ledger forged = res.ledger;
    forged.tamper_for_test({TamperKind::FlipByte, 3, 100});
    auto violation = forged.verify_integrity();
    std::cout << "tampered copy detected: " << (violation ? "yes" : "NO");
    if (violation)
        std::cout << " (seq " << violation->seq << ", "
                  << to_string(violation->kind) << ")";
    std::cout << "\n";
    return res.exit_code;
}
