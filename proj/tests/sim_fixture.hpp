#pragma once

// Hand-driven end-to-end harness for unit tests: builds a legal referendum,
// lets tests assign per-voter behaviors, and runs the three phases without
// the full scenario scheduler (which has its own tests).

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "refsim/ledger.hpp"
#include "refsim/messages.hpp"
#include "refsim/participants.hpp"
#include "refsim/rng.hpp"
#include "refsim/verifier.hpp"

namespace testutil {

struct SimFixture {
    refsim::KeyPair initiator;
    std::vector<refsim::KeyPair> voters; // aligned with params.voters
    refsim::ReferendumParams params;
    refsim::Ledger ledger;
    uint64_t seed;

    SimFixture(size_t k, size_t n, uint32_t t,
               uint64_t p = 2147483647ULL, uint64_t seed_in = 1234)
        : seed(seed_in) {
        refsim::SeededRng rng(seed);
        initiator = refsim::gen_keypair(rng);
        params.initiator = initiator.id;
        for (size_t i = 0; i < k; ++i) {
            voters.push_back(refsim::gen_keypair(rng));
            params.voters.push_back(voters.back().id);
        }
        for (size_t j = 0; j < n; ++j) {
            params.workers.push_back(voters[j].id);
            params.share_affiliation.push_back(j + 1);
        }
        params.threshold = t;
        params.modulus = p;
        params.q12 = 10;
        params.q23 = 20;
        params.q34 = 30;
        params.context_text = "Adopt the proposal?";
        params.option_plus = "yes";
        params.option_minus = "no";
        params.validate();
    }

    const refsim::KeyPair& worker_keypair(size_t j) const {
        for (const auto& kp : voters)
            if (kp.id == params.workers[j]) return kp;
        throw std::logic_error("worker index out of range");
    }

    // Runs init + voting + intermediate phases. Voters act in index order at
    // spread ticks inside the submission window (DoubleVote at its listed
    // ticks); workers act in index order inside the intermediate window.
    void run(const std::vector<int64_t>& votes,
             const std::map<size_t, refsim::Behavior>& behaviors = {}) {
        refsim::SeededRng master(seed + 1);
        std::vector<refsim::SeededRng> voter_rng;
        for (size_t i = 0; i < voters.size(); ++i)
            voter_rng.push_back(master.fork());

        refsim::initiator_publish(params, initiator, ledger);

        const uint64_t window = params.q23 - params.q12 - 1;
        for (size_t i = 0; i < voters.size(); ++i) {
            refsim::Behavior b = refsim::Honest{};
            if (auto it = behaviors.find(i); it != behaviors.end()) b = it->second;
            if (auto* dv = std::get_if<refsim::DoubleVote>(&b)) {
                std::set<uint64_t> due;
                for (const auto& entry : dv->revotes) due.insert(entry.second);
                for (uint64_t tick : due)
                    refsim::voter_act(votes[i], b, voters[i], params, ledger,
                                      tick, voter_rng[i]);
            } else {
                const uint64_t tick = params.q12 + 1 + (i % window);
                refsim::voter_act(votes[i], b, voters[i], params, ledger, tick,
                                  voter_rng[i]);
            }
        }

        const uint64_t wwindow = params.q34 - params.q23;
        for (size_t j = 0; j < params.worker_count(); ++j) {
            refsim::Behavior b = refsim::Honest{};
            auto vi = params.voter_index(params.workers[j]);
            if (auto it = behaviors.find(*vi); it != behaviors.end()) b = it->second;
            const uint64_t tick = params.q23 + (j % wwindow);
            refsim::worker_act(b, worker_keypair(j), params, ledger, tick);
        }
    }

    refsim::VerdictReport verify() const {
        return refsim::run_verifier(ledger, params);
    }
};

} // namespace testutil
