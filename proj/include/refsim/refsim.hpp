#pragma once

// Umbrella header: the whole library in one include.

#include "refsim/bytes.hpp"
#include "refsim/crypto.hpp"
#include "refsim/errors.hpp"
#include "refsim/field.hpp"
#include "refsim/hash.hpp"
#include "refsim/ledger.hpp"
#include "refsim/messages.hpp"
#include "refsim/participants.hpp"
#include "refsim/rng.hpp"
#include "refsim/scenario.hpp"
#include "refsim/sss.hpp"
#include "refsim/verifier.hpp"
