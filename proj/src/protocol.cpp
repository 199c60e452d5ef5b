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

#include "qnk/protocol.hpp"

#include <cmath>

#include "qnk/errors.hpp"

namespace qnk::protocol {

using qsim::PureState;
using qsim::RegisterId;
using qsim::RegisterLayout;

struct PartyAccess {
  static PartyState make(Role role, const SessionConfig& cfg, const AuthSecret& secret,
                         const pqc::PqcKey& key, int phase) {
    return PartyState(role, cfg, secret, key, phase);
  }
  static const AuthSecret& secret(const PartyState& p) { return p.secret_; }
  static const pqc::PqcKey& key(const PartyState& p) { return p.key_; }
  static const std::optional<BitString>& r_a(const PartyState& p) { return p.r_a_; }
  static const std::optional<BitString>& r_b(const PartyState& p) { return p.r_b_; }
  static std::optional<BitString>& r_a(PartyState& p) { return p.r_a_; }
  static std::optional<BitString>& r_b(PartyState& p) { return p.r_b_; }
  static std::optional<BitString>& r_c(PartyState& p) { return p.r_c_; }
  static void set_phase(PartyState& p, int phase) { p.phase_ = phase; }
};

// ---------------------------------------------------------------------------
// Configuration

AuthSecret AuthSecret::make(BitString s, BitString r) {
  if (s.width() < 2 || s.width() % 2 != 0) {
    throw ArgumentError("secret s must have even width >= 2, got " + std::to_string(s.width()));
  }
  if (r.width() != s.width() / 2) {
    throw ArgumentError("secret r must have width n/2 = " + std::to_string(s.width() / 2) +
                        ", got " + std::to_string(r.width()));
  }
  return {s, r};
}

AuthSecret AuthSecret::random(std::size_t n, Rng& rng) {
  BitString s = rng.bits(n);
  BitString r = rng.bits(n / 2);
  return make(s, r);
}

void SessionConfig::validate() const {
  if (n < 2 || n % 2 != 0) {
    throw ArgumentError("session width n must be even and >= 2, got " + std::to_string(n));
  }
}

RegisterId auth_register_for_round(int round) {
  switch (round) {
    case 1: return RegisterId::II;
    case 2: return RegisterId::III;
    case 3: return RegisterId::IV;
    default: throw ArgumentError("protocol rounds are 1, 2 and 3");
  }
}

RegisterLayout message_layout(int round, std::size_t n) {
  return RegisterLayout::sequential({{RegisterId::I, n}, {auth_register_for_round(round), n}});
}

WireMessage relabel(const WireMessage& msg, int round) {
  const std::size_t n = msg.layout.slot(RegisterId::I).width;
  if (msg.layout.num_qubits() != 2 * n) {
    throw DimensionError("only two-register messages can be relabeled");
  }
  return {round, msg.payload, message_layout(round, n)};
}

WireMessage build_message(int round, const PureState& register_one, const BitString& s,
                          const BitString& tag) {
  const std::size_t n = register_one.num_qubits();
  const RegisterLayout layout = message_layout(round, n);
  const RegisterId auth = auth_register_for_round(round);
  PureState state = qsim::tensor(register_one, PureState::zero(n));
  state = boolperm::apply_us(state, layout, boolperm::PermKey(s), RegisterId::I, auth);
  state = qsim::apply_gate_layer(state, layout, auth, qsim::Gate::of(qsim::GateKind::X), tag);
  return {round, std::move(state), layout};
}

namespace {

void check_inputs(const SessionConfig& cfg, const AuthSecret& secret) {
  cfg.validate();
  if (secret.n() != cfg.n || secret.r.width() != cfg.half()) {
    throw ArgumentError("secret widths do not match session width n = " + std::to_string(cfg.n));
  }
}

void check_message(const WireMessage& msg, int round, std::size_t n) {
  if (msg.round != round) {
    throw PreconditionError("expected a round-" + std::to_string(round) + " message, got round " +
                            std::to_string(msg.round));
  }
  const RegisterId auth = auth_register_for_round(round);
  if (!msg.layout.contains(RegisterId::I) || !msg.layout.contains(auth) ||
      msg.layout.slots().size() != 2 || msg.layout.slot(RegisterId::I).width != n ||
      msg.layout.slot(auth).width != n || msg.payload.num_qubits() != 2 * n) {
    throw DimensionError("round-" + std::to_string(round) + " message must carry registers I and " +
                         std::string(qsim::register_name(auth)) + " of width " +
                         std::to_string(n));
  }
}

struct Verified {
  CheckRecord check;
  BitString outcome;
  PureState register_one;  // valid only when accepted
};

// U_s on (I, auth), measure auth, compare prefix with `expected`; on accept
// drop the auth register.
Verified verify(const WireMessage& msg, const BitString& s, const BitString& expected,
                std::string name, Rng& rng) {
  const RegisterId auth = auth_register_for_round(msg.round);
  const PureState untangled =
      boolperm::apply_us(msg.payload, msg.layout, boolperm::PermKey(s), RegisterId::I, auth);
  const qsim::MeasurementResult m = qsim::measure_register(untangled, msg.layout, auth, rng);
  CheckRecord check{std::move(name), msg.round, m.outcome.prefix(expected.width()) == expected,
                    m.probability};
  const auto rest = qsim::discard_register(m.post_state, msg.layout, auth, m.outcome);
  return {check, m.outcome, rest.state};
}

double accept_weight(const WireMessage& msg, const BitString& s, const BitString& expected) {
  const RegisterId auth = auth_register_for_round(msg.round);
  const PureState untangled =
      boolperm::apply_us(msg.payload, msg.layout, boolperm::PermKey(s), RegisterId::I, auth);
  const std::vector<double> probs = qsim::register_distribution(untangled, msg.layout, auth);
  const std::size_t width = msg.layout.slot(auth).width;
  const std::size_t tail = width - expected.width();
  double weight = 0.0;
  for (std::size_t v = 0; v < probs.size(); ++v) {
    if ((v >> tail) == expected.value()) weight += probs[v];
  }
  return weight;
}

void check_party(const PartyState& p, Role role, int phase, const char* op) {
  if (p.role() != role || p.phase() != phase) {
    throw PreconditionError(std::string(op) + " called with a party in the wrong role or phase");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Rounds

Round1Choices sample_round1(const SessionConfig& cfg, Rng& rng) {
  pqc::PqcKey key = pqc::sample_key(cfg.n, rng);
  BitString r_a = rng.bits(cfg.half());
  return {key, r_a};
}

Round2Choices sample_round2(const SessionConfig& cfg, Rng& rng) {
  pqc::PqcKey key = pqc::sample_key(cfg.n, rng);
  BitString r_b = rng.bits(cfg.half());
  return {key, r_b};
}

Round3Choices sample_round3(const SessionConfig& cfg, Rng& rng) { return {rng.bits(cfg.half())}; }

Round1Result alice_round1(const SessionConfig& cfg, const AuthSecret& secret, const BitString& x,
                          Rng& rng) {
  return alice_round1(cfg, secret, x, sample_round1(cfg, rng));
}

Round1Result alice_round1(const SessionConfig& cfg, const AuthSecret& secret, const BitString& x,
                          const Round1Choices& choices) {
  check_inputs(cfg, secret);
  if (x.width() != cfg.n) {
    throw ArgumentError("plaintext must have width n = " + std::to_string(cfg.n));
  }
  if (choices.r_a.width() != cfg.half()) {
    throw ArgumentError("nonce r_A must have width n/2");
  }
  const PureState encrypted =
      pqc::pqc_apply(PureState::basis(x), cfg.family, choices.key, pqc::Direction::Encrypt);
  WireMessage msg = build_message(1, encrypted, secret.s, secret.r.concat(choices.r_a));
  PartyState alice = PartyAccess::make(Role::Alice, cfg, secret, choices.key, 1);
  PartyAccess::r_a(alice) = choices.r_a;
  return {std::move(alice), std::move(msg)};
}

ReplyResult bob_round2(const SessionConfig& cfg, const AuthSecret& secret, const WireMessage& msg,
                       Rng& rng) {
  const Round2Choices choices = sample_round2(cfg, rng);
  return bob_round2(cfg, secret, msg, choices, rng);
}

ReplyResult bob_round2(const SessionConfig& cfg, const AuthSecret& secret, const WireMessage& msg,
                       const Round2Choices& choices, Rng& measurement_rng) {
  check_inputs(cfg, secret);
  check_message(msg, 1, cfg.n);
  Verified v = verify(msg, secret.s, secret.r, "bob_checks_r", measurement_rng);
  if (!v.check.accepted) return {v.check, std::nullopt, std::nullopt};

  const BitString r_a = v.outcome.suffix(cfg.half());
  const PureState encrypted =
      pqc::pqc_apply(v.register_one, cfg.family, choices.key, pqc::Direction::Encrypt);
  WireMessage reply = build_message(2, encrypted, secret.s, r_a.concat(choices.r_b));
  PartyState bob = PartyAccess::make(Role::Bob, cfg, secret, choices.key, 2);
  PartyAccess::r_a(bob) = r_a;
  PartyAccess::r_b(bob) = choices.r_b;
  return {v.check, std::move(bob), std::move(reply)};
}

ReplyResult alice_round3(const PartyState& alice, const WireMessage& msg, Rng& rng) {
  const Round3Choices choices = sample_round3(alice.config(), rng);
  return alice_round3(alice, msg, choices, rng);
}

ReplyResult alice_round3(const PartyState& alice, const WireMessage& msg,
                         const Round3Choices& choices, Rng& measurement_rng) {
  check_party(alice, Role::Alice, 1, "alice_round3");
  const SessionConfig& cfg = alice.config();
  check_message(msg, 2, cfg.n);
  if (choices.r_c.width() != cfg.half()) {
    throw ArgumentError("nonce r_C must have width n/2");
  }
  const AuthSecret& secret = PartyAccess::secret(alice);
  Verified v = verify(msg, secret.s, *PartyAccess::r_a(alice), "alice_checks_rA", measurement_rng);
  if (!v.check.accepted) return {v.check, std::nullopt, std::nullopt};

  const BitString r_b = v.outcome.suffix(cfg.half());
  const PureState decrypted = pqc::pqc_apply(v.register_one, cfg.family, PartyAccess::key(alice),
                                             pqc::Direction::Decrypt);
  WireMessage reply = build_message(3, decrypted, secret.s, r_b.concat(choices.r_c));
  PartyState next = alice;
  PartyAccess::r_b(next) = r_b;
  PartyAccess::r_c(next) = choices.r_c;
  PartyAccess::set_phase(next, 3);
  return {v.check, std::move(next), std::move(reply)};
}

FinishResult bob_finish(const PartyState& bob, const WireMessage& msg, Rng& rng) {
  check_party(bob, Role::Bob, 2, "bob_finish");
  const SessionConfig& cfg = bob.config();
  check_message(msg, 3, cfg.n);
  const AuthSecret& secret = PartyAccess::secret(bob);
  Verified v = verify(msg, secret.s, *PartyAccess::r_b(bob), "bob_checks_rB", rng);
  FinishResult result;
  result.check = v.check;
  result.new_r = secret.r;
  if (!v.check.accepted) return result;

  const PureState decrypted = pqc::pqc_apply(v.register_one, cfg.family, PartyAccess::key(bob),
                                             pqc::Direction::Decrypt);
  const RegisterLayout layout = RegisterLayout::sequential({{RegisterId::I, cfg.n}});
  const qsim::MeasurementResult m = qsim::measure_register(decrypted, layout, RegisterId::I, rng);
  result.plaintext = m.outcome;
  result.plaintext_born_weight = m.probability;
  result.new_r = v.outcome.suffix(cfg.half());
  return result;
}

double bob_round2_accept_probability(const SessionConfig& cfg, const AuthSecret& secret,
                                     const WireMessage& msg) {
  check_inputs(cfg, secret);
  check_message(msg, 1, cfg.n);
  return accept_weight(msg, secret.s, secret.r);
}

double alice_round3_accept_probability(const PartyState& alice, const WireMessage& msg) {
  check_party(alice, Role::Alice, 1, "alice_round3_accept_probability");
  check_message(msg, 2, alice.config().n);
  return accept_weight(msg, PartyAccess::secret(alice).s, *PartyAccess::r_a(alice));
}

double bob_finish_accept_probability(const PartyState& bob, const WireMessage& msg) {
  check_party(bob, Role::Bob, 2, "bob_finish_accept_probability");
  check_message(msg, 3, bob.config().n);
  return accept_weight(msg, PartyAccess::secret(bob).s, *PartyAccess::r_b(bob));
}

// ---------------------------------------------------------------------------
// Sessions

namespace {

WireMessage deliver(const Hook& hook, const WireMessage& msg) { return hook ? hook(msg) : msg; }

}  // namespace

Transcript run_session(const SessionConfig& cfg, const AuthSecret& secret, const BitString& x,
                       Rng& rng, const Hook& hook) {
  Transcript t;
  t.config = cfg;
  t.updated_r = secret.r;

  auto record = [&t](const WireMessage& m) { t.messages.push_back({m, t.checks}); };

  Round1Result r1 = alice_round1(cfg, secret, x, rng);
  const WireMessage m1 = deliver(hook, r1.message);
  record(m1);

  ReplyResult r2 = bob_round2(cfg, secret, m1, rng);
  t.checks.push_back(r2.check);
  if (!r2.accepted()) {
    t.aborted_at = 1;
    return t;
  }
  const WireMessage m2 = deliver(hook, *r2.message);
  record(m2);

  ReplyResult r3 = alice_round3(r1.alice, m2, rng);
  t.checks.push_back(r3.check);
  if (!r3.accepted()) {
    t.aborted_at = 2;
    return t;
  }
  const WireMessage m3 = deliver(hook, *r3.message);
  record(m3);

  FinishResult fin = bob_finish(*r2.party, m3, rng);
  t.checks.push_back(fin.check);
  if (!fin.accepted()) {
    t.aborted_at = 3;
    return t;
  }
  t.final_plaintext = fin.plaintext;
  t.updated_r = fin.new_r;
  return t;
}

std::vector<Transcript> run_chained(const SessionConfig& cfg, AuthSecret secret,
                                    const std::vector<BitString>& plaintexts, std::size_t sessions,
                                    Rng& rng, const Hook& hook) {
  if (plaintexts.empty() && sessions > 0) {
    throw ArgumentError("run_chained needs at least one plaintext");
  }
  std::vector<Transcript> out;
  out.reserve(sessions);
  for (std::size_t k = 0; k < sessions; ++k) {
    Rng session_rng = rng.stream(k);
    out.push_back(run_session(cfg, secret, plaintexts[k % plaintexts.size()], session_rng, hook));
    secret.r = out.back().updated_r;
  }
  return out;
}

namespace {

nlohmann::ordered_json check_json(const CheckRecord& c) {
  nlohmann::ordered_json j;
  j["check"] = c.name;
  j["round"] = c.round;
  j["accepted"] = c.accepted;
  j["born_weight"] = c.born_weight;
  return j;
}

}  // namespace

std::vector<nlohmann::ordered_json> trace_records(const Transcript& transcript) {
  std::vector<nlohmann::ordered_json> out;
  for (const auto& rec : transcript.messages) {
    nlohmann::ordered_json j;
    j["round"] = rec.message.round;
    nlohmann::ordered_json regs = nlohmann::ordered_json::array();
    for (RegisterId id : rec.message.registers()) regs.push_back(std::string(qsim::register_name(id)));
    j["registers"] = std::move(regs);
    j["state"] = qsim::to_json(rec.message.payload);
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (const auto& c : rec.checks_so_far) verdicts.push_back(check_json(c));
    j["verdicts"] = std::move(verdicts);
    out.push_back(std::move(j));
  }
  nlohmann::ordered_json fin;
  fin["final"] = transcript.final_plaintext ? nlohmann::ordered_json(transcript.final_plaintext->str())
                                            : nlohmann::ordered_json("ABORT");
  fin["updated_r"] = transcript.updated_r.str();
  fin["aborted_at"] = transcript.aborted_at ? nlohmann::ordered_json(*transcript.aborted_at)
                                            : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  for (const auto& c : transcript.checks) verdicts.push_back(check_json(c));
  fin["verdicts"] = std::move(verdicts);
  out.push_back(std::move(fin));
  return out;
}

// ---------------------------------------------------------------------------
// Unauthenticated baseline

namespace {

RegisterLayout single_register(std::size_t n) {
  return RegisterLayout::sequential({{RegisterId::I, n}});
}

void check_single(const WireMessage& msg, int round, std::size_t n) {
  if (msg.round != round) {
    throw PreconditionError("expected a round-" + std::to_string(round) + " message");
  }
  if (msg.payload.num_qubits() != n || msg.layout.num_qubits() != n) {
    throw DimensionError("unauthenticated message width mismatch");
  }
}

}  // namespace

UnauthenticatedAlice::UnauthenticatedAlice(pqc::PqcFamily family, PureState input, Rng& rng)
    : UnauthenticatedAlice(family, input, pqc::sample_key(input.num_qubits(), rng)) {}

UnauthenticatedAlice::UnauthenticatedAlice(pqc::PqcFamily family, PureState input, pqc::PqcKey key)
    : family_(std::move(family)), input_(std::move(input)), key_(std::move(key)) {
  if (key_.width() != input_.num_qubits()) {
    throw DimensionError("key width does not match input width");
  }
}

WireMessage UnauthenticatedAlice::first_message() const {
  const std::size_t n = input_.num_qubits();
  return {1, pqc::pqc_apply(input_, family_, key_, pqc::Direction::Encrypt), single_register(n)};
}

WireMessage UnauthenticatedAlice::respond(const WireMessage& second) const {
  const std::size_t n = input_.num_qubits();
  check_single(second, 2, n);
  return {3, pqc::pqc_apply(second.payload, family_, key_, pqc::Direction::Decrypt),
          single_register(n)};
}

UnauthenticatedBob::UnauthenticatedBob(pqc::PqcFamily family, std::size_t n, Rng& rng)
    : UnauthenticatedBob(family, pqc::sample_key(n, rng)) {}

UnauthenticatedBob::UnauthenticatedBob(pqc::PqcFamily family, pqc::PqcKey key)
    : family_(std::move(family)), key_(std::move(key)) {}

WireMessage UnauthenticatedBob::respond(const WireMessage& first) const {
  const std::size_t n = key_.width();
  check_single(first, 1, n);
  return {2, pqc::pqc_apply(first.payload, family_, key_, pqc::Direction::Encrypt),
          single_register(n)};
}

PureState UnauthenticatedBob::finish(const WireMessage& third) const {
  check_single(third, 3, key_.width());
  return pqc::pqc_apply(third.payload, family_, key_, pqc::Direction::Decrypt);
}

UnauthenticatedTranscript run_unauthenticated(const SessionConfig& cfg, const pqc::PqcFamily& family,
                                              const PureState& input, Rng& rng, const Hook& hook) {
  if (input.num_qubits() != cfg.n) {
    throw DimensionError("input state must have n = " + std::to_string(cfg.n) + " qubits");
  }
  UnauthenticatedAlice alice(family, input, rng);
  UnauthenticatedBob bob(family, cfg.n, rng);
  std::vector<WireMessage> delivered;

  delivered.push_back(deliver(hook, alice.first_message()));
  delivered.push_back(deliver(hook, bob.respond(delivered.back())));
  delivered.push_back(deliver(hook, alice.respond(delivered.back())));
  PureState output = bob.finish(delivered.back());
  return {std::move(delivered), std::move(output)};
}

}  // namespace qnk::protocol
