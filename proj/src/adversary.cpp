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

#include "qnk/adversary.hpp"

#include <cmath>
#include <vector>

#include "qnk/boolperm.hpp"
#include "qnk/errors.hpp"

namespace qnk::adversary {

using protocol::WireMessage;
using qsim::PureState;
using qsim::RegisterId;
using qsim::RegisterLayout;

std::string_view strategy_name(ForgeStrategy strategy) {
  switch (strategy) {
    case ForgeStrategy::Reflect: return "reflect";
    case ForgeStrategy::RandomState: return "random-state";
    case ForgeStrategy::WrongS: return "wrong-s";
  }
  return "?";
}

ForgeStrategy parse_strategy(std::string_view name) {
  if (name == "reflect") return ForgeStrategy::Reflect;
  if (name == "random-state") return ForgeStrategy::RandomState;
  if (name == "wrong-s") return ForgeStrategy::WrongS;
  throw ArgumentError("unknown forgery strategy '" + std::string(name) +
                      "' (expected reflect, random-state or wrong-s)");
}

double AttackOutcome::success_rate() const {
  if (exact_rate) return *exact_rate;
  return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
}

bool AttackOutcome::success() const {
  if (exact_rate) return *exact_rate == 1.0;
  return trials > 0 && successes == trials;
}

nlohmann::ordered_json to_json(const AttackOutcome& o) {
  nlohmann::ordered_json j;
  j["attack"] = o.attack;
  j["family"] = o.family;
  if (!o.strategy.empty()) j["strategy"] = o.strategy;
  j["n"] = o.n;
  j["trials"] = o.trials;
  j["successes"] = o.successes;
  j["success_rate"] = o.success_rate();
  j["success"] = o.success();
  j["recovered"] = o.recovered ? nlohmann::ordered_json(*o.recovered) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json detection = nlohmann::ordered_json::object();
  for (const auto& [check, count] : o.detection) detection[check] = count;
  j["detection"] = std::move(detection);
  if (o.receiver_correct) j["receiver_correct"] = *o.receiver_correct;
  if (o.exact_rate) j["exact_rate"] = *o.exact_rate;
  if (o.enumerated_cases) j["enumerated_cases"] = *o.enumerated_cases;
  return j;
}

namespace {

RegisterLayout register_one_layout(std::size_t n) {
  return RegisterLayout::sequential({{RegisterId::I, n}});
}

BitString measure_all(const PureState& state, Rng& rng) {
  return qsim::measure_register(state, register_one_layout(state.num_qubits()), RegisterId::I, rng)
      .outcome;
}

// Some s' != s, uniform over the 2^n - 1 alternatives.
BitString wrong_guess(const BitString& s, Rng& rng) {
  const std::uint64_t offset = 1 + rng.below(width_mask(s.width()));
  return s ^ BitString(s.width(), offset);
}

// Eve plays Bob with her guessed s': disentangle with U_{s'}, take the tail of
// the measured tag as r_A, re-encrypt register I and tag it for round 2.
WireMessage wrong_s_reply(const PureState& register_one, const BitString& measured_tag,
                          const BitString& guessed_s, const pqc::PqcFamily& family,
                          const pqc::PqcKey& key, const BitString& nonce) {
  const std::size_t half = guessed_s.width() / 2;
  const PureState encrypted = pqc::pqc_apply(register_one, family, key, pqc::Direction::Encrypt);
  return protocol::build_message(2, encrypted, guessed_s, measured_tag.suffix(half).concat(nonce));
}

}  // namespace

WireMessage forge_round2(ForgeStrategy strategy, const WireMessage& round1,
                         const BitString& guessed_s, const pqc::PqcFamily& family, Rng& eve_rng) {
  const std::size_t n = round1.layout.slot(RegisterId::I).width;
  switch (strategy) {
    case ForgeStrategy::Reflect:
      return protocol::relabel(round1, 2);
    case ForgeStrategy::RandomState:
      return {2, PureState::random(2 * n, eve_rng), protocol::message_layout(2, n)};
    case ForgeStrategy::WrongS: {
      const PureState untangled = boolperm::apply_us(round1.payload, round1.layout,
                                                     boolperm::PermKey(guessed_s), RegisterId::I,
                                                     RegisterId::II);
      const auto m = qsim::measure_register(untangled, round1.layout, RegisterId::II, eve_rng);
      const auto rest = qsim::discard_register(m.post_state, round1.layout, RegisterId::II, m.outcome);
      const pqc::PqcKey key = pqc::sample_key(n, eve_rng);
      const BitString nonce = eve_rng.bits(n / 2);
      return wrong_s_reply(rest.state, m.outcome, guessed_s, family, key, nonce);
    }
  }
  throw ArgumentError("unknown forgery strategy");
}

AttackOutcome mim_unauthenticated(const protocol::SessionConfig& cfg, const pqc::PqcFamily& family,
                                  const std::optional<BitString>& x, std::size_t trials, Rng& rng,
                                  EveDecryption decryption) {
  AttackOutcome out;
  out.attack = decryption == EveDecryption::OwnKey ? "mim-unauth" : "mim-unauth-wrong-key";
  out.family = family.name;
  out.n = cfg.n;
  out.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng trial = rng.stream(k);
    const BitString plaintext = x ? *x : trial.bits(cfg.n);
    protocol::UnauthenticatedAlice alice(family, PureState::basis(plaintext), trial);

    Rng eve = trial.stream(1);
    const pqc::PqcKey eve_key = pqc::sample_key(cfg.n, eve);
    const WireMessage rho1 = alice.first_message();
    const WireMessage rho2{2, pqc::pqc_apply(rho1.payload, family, eve_key, pqc::Direction::Encrypt),
                           rho1.layout};
    const WireMessage rho3 = alice.respond(rho2);
    const pqc::PqcKey unlock = decryption == EveDecryption::OwnKey ? eve_key : pqc::sample_key(cfg.n, eve);
    const PureState recovered_state =
        pqc::pqc_apply(rho3.payload, family, unlock, pqc::Direction::Decrypt);
    const BitString recovered = measure_all(recovered_state, eve);
    out.recovered = recovered.str();
    if (recovered == plaintext) ++out.successes;
  }
  return out;
}

AttackOutcome forge_authenticated(const protocol::SessionConfig& cfg, ForgeStrategy strategy,
                                  std::size_t trials, Rng& rng) {
  cfg.validate();
  AttackOutcome out;
  out.attack = "forge-auth";
  out.family = cfg.family.name;
  out.strategy = std::string(strategy_name(strategy));
  out.n = cfg.n;
  out.trials = trials;
  out.detection["alice_checks_rA"] = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng trial = rng.stream(k);
    const auto secret = protocol::AuthSecret::random(cfg.n, trial);
    const BitString x = trial.bits(cfg.n);
    const auto r1 = protocol::alice_round1(cfg, secret, x, trial);

    Rng eve = trial.stream(1);
    const BitString guess = wrong_guess(secret.s, eve);
    const WireMessage forged = forge_round2(strategy, r1.message, guess, cfg.family, eve);
    const auto r3 = protocol::alice_round3(r1.alice, forged, trial);
    if (r3.accepted()) {
      ++out.successes;
    } else {
      ++out.detection["alice_checks_rA"];
    }
  }
  return out;
}

AttackOutcome forge_authenticated_exhaustive(ForgeStrategy strategy, const pqc::PqcFamily& family,
                                             std::size_t random_states, std::uint64_t seed) {
  constexpr std::size_t n = 2;
  constexpr std::size_t half = 1;
  protocol::SessionConfig cfg;
  cfg.n = n;
  cfg.family = family;

  std::vector<PureState> eve_states;
  if (strategy == ForgeStrategy::RandomState) {
    Rng rng(seed, 0x666f726765ULL);
    for (std::size_t i = 0; i < random_states; ++i) eve_states.push_back(PureState::random(2 * n, rng));
  }

  double total = 0.0;
  std::size_t cases = 0;
  for (std::uint64_t s = 0; s < (1u << n); ++s) {
    for (std::uint64_t r = 0; r < (1u << half); ++r) {
      const auto secret = protocol::AuthSecret::make(BitString(n, s), BitString(half, r));
      for (std::uint64_t r_a = 0; r_a < (1u << half); ++r_a) {
        for (std::uint64_t x = 0; x < (1u << n); ++x) {
          for (std::uint64_t ka = 0; ka < (1u << (2 * n)); ++ka) {
            const protocol::Round1Choices choices{pqc::key_from_index(n, ka), BitString(half, r_a)};
            const auto r1 = protocol::alice_round1(cfg, secret, BitString(n, x), choices);

            switch (strategy) {
              case ForgeStrategy::Reflect:
                total += protocol::alice_round3_accept_probability(r1.alice,
                                                                   protocol::relabel(r1.message, 2));
                ++cases;
                break;
              case ForgeStrategy::RandomState:
                for (const auto& psi : eve_states) {
                  total += protocol::alice_round3_accept_probability(
                      r1.alice, WireMessage{2, psi, protocol::message_layout(2, n)});
                  ++cases;
                }
                break;
              case ForgeStrategy::WrongS:
                for (std::uint64_t guess = 0; guess < (1u << n); ++guess) {
                  if (guess == s) continue;
                  const BitString guessed(n, guess);
                  const PureState untangled =
                      boolperm::apply_us(r1.message.payload, r1.message.layout,
                                         boolperm::PermKey(guessed), RegisterId::I, RegisterId::II);
                  const auto probs =
                      qsim::register_distribution(untangled, r1.message.layout, RegisterId::II);
                  for (std::uint64_t ke = 0; ke < (1u << (2 * n)); ++ke) {
                    for (std::uint64_t nonce = 0; nonce < (1u << half); ++nonce) {
                      double weighted = 0.0;
                      for (std::uint64_t o = 0; o < probs.size(); ++o) {
                        if (probs[o] <= 1e-15) continue;
                        const BitString tag(n, o);
                        const auto projected = qsim::project_register(untangled, r1.message.layout,
                                                                      RegisterId::II, tag);
                        const auto rest = qsim::discard_register(projected, r1.message.layout,
                                                                 RegisterId::II, tag);
                        const WireMessage forged =
                            wrong_s_reply(rest.state, tag, guessed, cfg.family, pqc::key_from_index(n, ke),
                                          BitString(half, nonce));
                        weighted +=
                            probs[o] * protocol::alice_round3_accept_probability(r1.alice, forged);
                      }
                      total += weighted;
                      ++cases;
                    }
                  }
                }
                break;
            }
          }
        }
      }
    }
  }

  AttackOutcome out;
  out.attack = "forge-auth";
  out.family = cfg.family.name;
  out.strategy = std::string(strategy_name(strategy));
  out.n = n;
  out.exact_rate = total / static_cast<double>(cases);
  out.enumerated_cases = cases;
  return out;
}

AttackOutcome basis_measure_attack(const protocol::SessionConfig& cfg, const pqc::PqcFamily& family,
                                   const std::optional<BitString>& x, std::size_t trials, Rng& rng) {
  AttackOutcome out;
  out.attack = "basis-measure";
  out.family = family.name;
  out.n = cfg.n;
  out.trials = trials;
  out.receiver_correct = 0;
  for (std::size_t k = 0; k < trials; ++k) {
    Rng trial = rng.stream(k);
    const BitString plaintext = x ? *x : trial.bits(cfg.n);
    Rng eve = trial.stream(1);
    std::vector<BitString> observed;
    const protocol::Hook measure_in_flight = [&observed, &eve](const WireMessage& msg) {
      const auto m = qsim::measure_register(msg.payload, msg.layout, RegisterId::I, eve);
      observed.push_back(m.outcome);
      return WireMessage{msg.round, m.post_state, msg.layout};
    };
    const auto transcript =
        protocol::run_unauthenticated(cfg, family, PureState::basis(plaintext), trial, measure_in_flight);
    const BitString recovered = observed.at(0) ^ observed.at(1) ^ observed.at(2);
    out.recovered = recovered.str();
    if (recovered == plaintext) ++out.successes;
    if (measure_all(transcript.output, trial) == plaintext) ++*out.receiver_correct;
  }
  return out;
}

}  // namespace qnk::adversary
