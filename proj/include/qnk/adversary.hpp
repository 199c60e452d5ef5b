/**
 * This code is part of the QNK workbench.
 *
 * (C) Copyright The QNK Workbench Authors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#pragma once

// Concrete adversaries against the three-pass protocols.
//
//   mim-unauth     Eve impersonates Bob against the unauthenticated protocol.
//   forge-auth     Eve, holding neither s nor r, answers Alice's round-1
//                  message herself (reflect / random-state / wrong-s).
//   basis-measure  passive Eve measures register I of all three messages of
//                  the unauthenticated protocol in the computational basis and
//                  XORs the three outcomes together.
//
// Every attack only touches WireMessages; party states and secrets are created
// by the harness and never handed to attack code. Trial k of a batch uses
// rng.stream(k), so batch results do not depend on evaluation order.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qnk/bits.hpp"
#include "qnk/pqc.hpp"
#include "qnk/protocol.hpp"
#include "qnk/rng.hpp"

namespace qnk::adversary {

enum class ForgeStrategy { Reflect, RandomState, WrongS };

std::string_view strategy_name(ForgeStrategy strategy);
ForgeStrategy parse_strategy(std::string_view name);

struct AttackOutcome {
  std::string attack;
  std::string family;
  std::string strategy;  // empty unless attack == "forge-auth"
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  // Recovered plaintext of the last trial (mim-unauth, basis-measure).
  std::optional<std::string> recovered;
  // Rejections per authentication check.
  std::map<std::string, std::size_t> detection;
  // basis-measure: trials in which Bob still decrypted the right plaintext.
  std::optional<std::size_t> receiver_correct;
  // Exhaustive evaluations report the exact rate instead of sampling.
  std::optional<double> exact_rate;
  std::optional<std::size_t> enumerated_cases;

  double success_rate() const;
  // Every trial succeeded (or, for exact evaluations, exact_rate == 1).
  bool success() const;
};

nlohmann::ordered_json to_json(const AttackOutcome& outcome);

// How Eve undoes her own encryption at the end of the MIM. WrongKey is the
// chance-level control: she decrypts with a fresh independent key.
enum class EveDecryption { OwnKey, WrongKey };

// Plaintext per trial: `x` if given, otherwise uniform from the trial stream.
AttackOutcome mim_unauthenticated(const protocol::SessionConfig& cfg, const pqc::PqcFamily& family,
                                  const std::optional<BitString>& x, std::size_t trials, Rng& rng,
                                  EveDecryption decryption = EveDecryption::OwnKey);

// Eve's round-2 forgery built from the intercepted round-1 message.
// `guessed_s` is used by WrongS only; `eve_rng` supplies her own randomness.
protocol::WireMessage forge_round2(ForgeStrategy strategy, const protocol::WireMessage& round1,
                                   const BitString& guessed_s, const pqc::PqcFamily& family,
                                   Rng& eve_rng);

// Sampled: each trial draws fresh s, r, x and Alice's randomness, lets Eve
// answer round 1, and records whether Alice's round-3 check accepts.
AttackOutcome forge_authenticated(const protocol::SessionConfig& cfg, ForgeStrategy strategy,
                                  std::size_t trials, Rng& rng);

// Exact acceptance probability at n = 2: enumerates s, r, r_A, x, Alice's PQC
// key and (for wrong-s) every s' != s, Eve's key, Eve's nonce and every branch
// of Eve's measurement, weighting Alice's acceptance by Born probabilities.
// Random-state uses `random_states` seeded states per secret assignment.
AttackOutcome forge_authenticated_exhaustive(
    ForgeStrategy strategy, const pqc::PqcFamily& family = pqc::PqcFamily::of(pqc::FamilyId::PQC4),
    std::size_t random_states = 16, std::uint64_t seed = 0);

AttackOutcome basis_measure_attack(const protocol::SessionConfig& cfg, const pqc::PqcFamily& family,
                                   const std::optional<BitString>& x, std::size_t trials, Rng& rng);

}  // namespace qnk::adversary
