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

#include <type_traits>

#include "doctest.h"
#include "qnk/errors.hpp"
#include "qnk/protocol.hpp"

using namespace qnk;
using namespace qnk::protocol;
using qsim::PureState;
using qsim::RegisterId;

// Attack code is handed only wire messages, and party state cannot be built
// or inspected outside the round operations.
static_assert(std::is_same_v<Hook, std::function<WireMessage(const WireMessage&)>>);
static_assert(!std::is_default_constructible_v<PartyState>);
static_assert(!std::is_constructible_v<PartyState, Role, SessionConfig, AuthSecret, pqc::PqcKey, int>);
static_assert(std::is_copy_constructible_v<PartyState>);

namespace {

SessionConfig config(std::size_t n, pqc::FamilyId id = pqc::FamilyId::PQC4) {
  SessionConfig cfg;
  cfg.n = n;
  cfg.family = pqc::PqcFamily::of(id);
  return cfg;
}

}  // namespace

TEST_CASE("honest sessions deliver the plaintext") {
  for (pqc::FamilyId id : {pqc::FamilyId::PQC1, pqc::FamilyId::PQC2, pqc::FamilyId::PQC4}) {
    for (std::size_t n : {2, 4, 6}) {
      Rng rng(n * 31 + static_cast<int>(id));
      for (int t = 0; t < 10; ++t) {
        const auto secret = AuthSecret::random(n, rng);
        const BitString x = rng.bits(n);
        const auto tr = run_session(config(n, id), secret, x, rng);
        REQUIRE(!tr.aborted());
        CHECK(*tr.final_plaintext == x);
        REQUIRE(tr.checks.size() == 3);
        for (const auto& c : tr.checks) CHECK(c.born_weight == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(tr.messages.size() == 3);
      }
    }
  }
}

TEST_CASE("message registers per round") {
  Rng rng(1);
  const auto tr = run_session(config(4), AuthSecret::random(4, rng), BitString::parse("0110"), rng);
  REQUIRE(tr.messages.size() == 3);
  using V = std::vector<RegisterId>;
  CHECK(tr.messages[0].message.registers() == V{RegisterId::I, RegisterId::II});
  CHECK(tr.messages[1].message.registers() == V{RegisterId::I, RegisterId::III});
  CHECK(tr.messages[2].message.registers() == V{RegisterId::I, RegisterId::IV});
  CHECK(tr.messages[0].checks_so_far.empty());
  CHECK(tr.messages[2].checks_so_far.size() == 2);
}

TEST_CASE("the updated nonce is Alice's r_C") {
  const auto cfg = config(4);
  const auto secret = AuthSecret::make(BitString::parse("1001"), BitString::parse("01"));
  Rng rng(5);
  const BitString x = BitString::parse("1110");
  const auto r1 = alice_round1(cfg, secret, x, Round1Choices{pqc::key_from_index(4, 77), BitString::parse("10")});
  const auto r2 = bob_round2(cfg, secret, r1.message, Round2Choices{pqc::key_from_index(4, 200), BitString::parse("11")}, rng);
  REQUIRE(r2.accepted());
  const auto r3 = alice_round3(r1.alice, *r2.message, Round3Choices{BitString::parse("00")}, rng);
  REQUIRE(r3.accepted());
  const auto fin = bob_finish(*r2.party, *r3.message, rng);
  REQUIRE(fin.accepted());
  CHECK(fin.new_r.str() == "00");
  CHECK(fin.plaintext->str() == "1110");
  CHECK(fin.plaintext_born_weight == doctest::Approx(1.0));
}

TEST_CASE("chained sessions rotate r and keep succeeding") {
  for (std::size_t n : {2, 4, 6}) {
    Rng rng(n);
    const auto secret = AuthSecret::random(n, rng);
    const auto trs = run_chained(config(n), secret, {rng.bits(n), rng.bits(n)}, 12, rng);
    REQUIRE(trs.size() == 12);
    for (const auto& t : trs) CHECK(!t.aborted());
  }
}

TEST_CASE("a wrong r is rejected by Bob with certainty") {
  const auto cfg = config(4);
  Rng rng(9);
  const auto alice_secret = AuthSecret::make(BitString::parse("0110"), BitString::parse("10"));
  const auto bob_secret = AuthSecret::make(BitString::parse("0110"), BitString::parse("11"));
  const auto r1 = alice_round1(cfg, alice_secret, BitString::parse("0001"), rng);
  CHECK(bob_round2_accept_probability(cfg, bob_secret, r1.message) == doctest::Approx(0.0));
  CHECK(bob_round2_accept_probability(cfg, alice_secret, r1.message) == doctest::Approx(1.0));
  const auto r2 = bob_round2(cfg, bob_secret, r1.message, rng);
  CHECK(!r2.accepted());
  CHECK(r2.check.name == "bob_checks_r");
  CHECK(!r2.message.has_value());
}

TEST_CASE("reflecting round 1 passes Alice's check exactly when r == r_A") {
  const auto cfg = config(4);
  for (std::uint64_t r = 0; r < 4; ++r) {
    for (std::uint64_t ra = 0; ra < 4; ++ra) {
      const auto secret = AuthSecret::make(BitString::parse("1100"), BitString(2, r));
      const auto r1 = alice_round1(cfg, secret, BitString::parse("1011"),
                                   Round1Choices{pqc::key_from_index(4, 13), BitString(2, ra)});
      const double p = alice_round3_accept_probability(r1.alice, relabel(r1.message, 2));
      CHECK(p == doctest::Approx(r == ra ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("round operations enforce message shape and party phase") {
  const auto cfg = config(2);
  Rng rng(2);
  const auto secret = AuthSecret::random(2, rng);
  const auto r1 = alice_round1(cfg, secret, BitString::parse("01"), rng);
  CHECK_THROWS_AS(alice_round3(r1.alice, r1.message, rng), PreconditionError);
  CHECK_THROWS_AS(bob_round2(cfg, secret, relabel(r1.message, 2), rng), PreconditionError);
  CHECK_THROWS_AS(alice_round1(cfg, secret, BitString::parse("011"), rng), ArgumentError);
  SessionConfig odd;
  odd.n = 3;
  CHECK_THROWS_AS(odd.validate(), ArgumentError);
  CHECK_THROWS_AS(AuthSecret::make(BitString::parse("1010"), BitString::parse("1")), ArgumentError);
}

TEST_CASE("trace records: three messages and a final record") {
  Rng rng(7);
  const auto tr = run_session(config(2), AuthSecret::random(2, rng), BitString::parse("10"), rng);
  const auto recs = trace_records(tr);
  REQUIRE(recs.size() == 4);
  for (int i = 0; i < 3; ++i) {
    CHECK(recs[i]["round"] == i + 1);
    CHECK(recs[i].contains("registers"));
    CHECK(recs[i].contains("state"));
    CHECK(recs[i]["verdicts"].size() == static_cast<std::size_t>(i));
  }
  CHECK(recs[3]["final"] == "10");
  CHECK(recs[3]["aborted_at"].is_null());
  CHECK(recs[3]["updated_r"] == tr.updated_r.str());
}

TEST_CASE("unauthenticated three-pass works exactly for anticommuting families") {
  Rng rng(4);
  for (const auto& fam : pqc::named_families()) {
    double worst = 1.0;
    for (int t = 0; t < 30; ++t) {
      const PureState psi = PureState::random(4, rng);
      const auto tr = run_unauthenticated(config(4, fam.id), fam, psi, rng);
      CHECK(tr.messages.size() == 3);
      worst = std::min(worst, qsim::fidelity(tr.output, psi));
    }
    if (fam.id == pqc::FamilyId::PQC3) {
      CHECK(worst < 0.99);
    } else {
      CHECK(worst == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
