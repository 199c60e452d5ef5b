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

// Mutually authenticated three-pass quantum no-key session.
//
//   round 1  Alice -> Bob    registers {I, II}:  E_A|x>,  II = F_s(m) ^ (r   || r_A)
//   round 2  Bob   -> Alice  registers {I, III}: E_B E_A|x>, III = F_s(m) ^ (r_A || r_B)
//   round 3  Alice -> Bob    registers {I, IV}:  D_A E_B E_A|x>, IV = F_s(m) ^ (r_B || r_C)
//
// Each receiver applies U_s to disentangle the authentication register,
// measures it, and compares the first n/2 bits with the nonce it expects.
// A mismatch is an ABORT verdict, not an error. After a fully accepted
// session both sides replace r with r_C; s is kept.
//
// Every round operation comes in two forms: one that draws its fresh
// randomness (PQC key, nonce) from an Rng, and one that takes it explicitly so
// analyses can enumerate it.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnk/bits.hpp"
#include "qnk/boolperm.hpp"
#include "qnk/pqc.hpp"
#include "qnk/qsim.hpp"
#include "qnk/rng.hpp"

namespace qnk::protocol {

struct AuthSecret {
  BitString s;  // n bits, keys F_s
  BitString r;  // n/2 bits, current authentication nonce

  // Validates |s| even >= 2 and |r| = |s| / 2.
  static AuthSecret make(BitString s, BitString r);
  static AuthSecret random(std::size_t n, Rng& rng);
  std::size_t n() const { return s.width(); }
};

struct SessionConfig {
  std::size_t n = 4;
  pqc::PqcFamily family = pqc::PqcFamily::of(pqc::FamilyId::PQC4);
  std::uint64_t seed = 0;

  // n even and >= 2.
  void validate() const;
  std::size_t half() const { return n / 2; }
};

struct WireMessage {
  int round = 0;
  qsim::PureState payload;
  qsim::RegisterLayout layout;

  std::vector<qsim::RegisterId> registers() const { return layout.ids(); }
};

// Registers each round must carry: {I,II}, {I,III}, {I,IV}.
qsim::RegisterId auth_register_for_round(int round);
qsim::RegisterLayout message_layout(int round, std::size_t n);
// Same payload, carried as a message of another round (used by adversaries
// that replay a captured message in a different position).
WireMessage relabel(const WireMessage& msg, int round);
// Register I joined with a fresh |0..0> authentication register, entangled by
// U_s and then XOR-ed with `tag`: sum_m a_m |m>|F_s(m) xor tag>.
WireMessage build_message(int round, const qsim::PureState& register_one, const BitString& s,
                          const BitString& tag);

struct CheckRecord {
  std::string name;
  int round = 0;
  bool accepted = false;
  // Born weight of the sampled authentication outcome.
  double born_weight = 0.0;
};

enum class Role { Alice, Bob };

// A party's private session state. Only the round operations below can read
// the keys and nonces inside; nothing here is ever placed in a WireMessage.
class PartyState {
 public:
  Role role() const { return role_; }
  int phase() const { return phase_; }
  const SessionConfig& config() const { return config_; }

 private:
  PartyState(Role role, SessionConfig config, AuthSecret secret, pqc::PqcKey key, int phase)
      : role_(role), config_(std::move(config)), secret_(std::move(secret)), key_(std::move(key)),
        phase_(phase) {}

  Role role_;
  SessionConfig config_;
  AuthSecret secret_;
  pqc::PqcKey key_;
  std::optional<BitString> r_a_;
  std::optional<BitString> r_b_;
  std::optional<BitString> r_c_;
  int phase_;

  friend struct PartyAccess;
};

struct Round1Choices {
  pqc::PqcKey key;
  BitString r_a;
};
struct Round2Choices {
  pqc::PqcKey key;
  BitString r_b;
};
struct Round3Choices {
  BitString r_c;
};

Round1Choices sample_round1(const SessionConfig& cfg, Rng& rng);
Round2Choices sample_round2(const SessionConfig& cfg, Rng& rng);
Round3Choices sample_round3(const SessionConfig& cfg, Rng& rng);

struct Round1Result {
  PartyState alice;
  WireMessage message;
};

struct ReplyResult {
  CheckRecord check;
  std::optional<PartyState> party;     // present on accept (bob_round2 only)
  std::optional<WireMessage> message;  // present on accept
  bool accepted() const { return check.accepted; }
};

struct FinishResult {
  CheckRecord check;
  std::optional<BitString> plaintext;  // present on accept
  double plaintext_born_weight = 0.0;
  BitString new_r;  // r_C on accept, the old r on abort
  bool accepted() const { return check.accepted; }
};

Round1Result alice_round1(const SessionConfig& cfg, const AuthSecret& secret, const BitString& x,
                          Rng& rng);
Round1Result alice_round1(const SessionConfig& cfg, const AuthSecret& secret, const BitString& x,
                          const Round1Choices& choices);

ReplyResult bob_round2(const SessionConfig& cfg, const AuthSecret& secret, const WireMessage& msg,
                       Rng& rng);
ReplyResult bob_round2(const SessionConfig& cfg, const AuthSecret& secret, const WireMessage& msg,
                       const Round2Choices& choices, Rng& measurement_rng);

// Returns the updated Alice state in `party` on accept.
ReplyResult alice_round3(const PartyState& alice, const WireMessage& msg, Rng& rng);
ReplyResult alice_round3(const PartyState& alice, const WireMessage& msg,
                         const Round3Choices& choices, Rng& measurement_rng);

FinishResult bob_finish(const PartyState& bob, const WireMessage& msg, Rng& rng);

// Born weight with which each verifier's check would accept `msg`, computed
// without sampling. Used by exact (enumerating) attack evaluations.
double bob_round2_accept_probability(const SessionConfig& cfg, const AuthSecret& secret,
                                     const WireMessage& msg);
double alice_round3_accept_probability(const PartyState& alice, const WireMessage& msg);
double bob_finish_accept_probability(const PartyState& bob, const WireMessage& msg);

// Channel interceptor. It sees and may replace every message, but is handed
// nothing else.
using Hook = std::function<WireMessage(const WireMessage&)>;

struct MessageRecord {
  WireMessage message;  // as delivered to the receiver (after the hook)
  std::vector<CheckRecord> checks_so_far;
};

struct Transcript {
  SessionConfig config;
  std::vector<MessageRecord> messages;
  std::vector<CheckRecord> checks;
  std::optional<BitString> final_plaintext;
  BitString updated_r;
  std::optional<int> aborted_at;  // round whose receiver aborted

  bool aborted() const { return aborted_at.has_value(); }
};

Transcript run_session(const SessionConfig& cfg, const AuthSecret& secret, const BitString& x,
                       Rng& rng, const Hook& hook = {});

// `sessions` back-to-back sessions with r <- r_C after each accepted one.
// Session k uses rng.stream(k) and plaintext plaintexts[k % size].
std::vector<Transcript> run_chained(const SessionConfig& cfg, AuthSecret secret,
                                    const std::vector<BitString>& plaintexts, std::size_t sessions,
                                    Rng& rng, const Hook& hook = {});

// Trace records: one per delivered message, then a final record.
std::vector<nlohmann::ordered_json> trace_records(const Transcript& transcript);

// ---------------------------------------------------------------------------
// Unauthenticated three-pass baseline on an arbitrary n-qubit pure state.

class UnauthenticatedAlice {
 public:
  UnauthenticatedAlice(pqc::PqcFamily family, qsim::PureState input, Rng& rng);
  UnauthenticatedAlice(pqc::PqcFamily family, qsim::PureState input, pqc::PqcKey key);

  // rho_1 = E_A(rho)
  WireMessage first_message() const;
  // rho_3 = D_A(rho_2)
  WireMessage respond(const WireMessage& second) const;

 private:
  pqc::PqcFamily family_;
  qsim::PureState input_;
  pqc::PqcKey key_;
};

class UnauthenticatedBob {
 public:
  UnauthenticatedBob(pqc::PqcFamily family, std::size_t n, Rng& rng);
  UnauthenticatedBob(pqc::PqcFamily family, pqc::PqcKey key);

  // rho_2 = E_B(rho_1)
  WireMessage respond(const WireMessage& first) const;
  // D_B(rho_3)
  qsim::PureState finish(const WireMessage& third) const;

 private:
  pqc::PqcFamily family_;
  pqc::PqcKey key_;
};

struct UnauthenticatedTranscript {
  std::vector<WireMessage> messages;  // as delivered
  qsim::PureState output;
};

UnauthenticatedTranscript run_unauthenticated(const SessionConfig& cfg, const pqc::PqcFamily& family,
                                              const qsim::PureState& input, Rng& rng,
                                              const Hook& hook = {});

}  // namespace qnk::protocol
