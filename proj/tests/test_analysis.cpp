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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qnk/analysis.hpp"
#include "qnk/errors.hpp"

using namespace qnk;
using namespace qnk::analysis;

namespace {

protocol::SessionConfig config(std::size_t n) {
  protocol::SessionConfig cfg;
  cfg.n = n;
  return cfg;
}

oracle::Mat to_oracle(const qsim::Matrix& m) {
  oracle::Mat out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

}  // namespace

TEST_CASE("averaging space sizes") {
  CHECK(averaging_space_size(1, 2) == 256);
  CHECK(averaging_space_size(2, 2) == 4096);
  CHECK(averaging_space_size(3, 2) == 4096);
  CHECK_THROWS_AS(averaging_space_size(4, 2), ArgumentError);
}

TEST_CASE("exhaustive views at n = 2 are maximally mixed") {
  const auto mixed = oracle::identity(16);
  oracle::Mat mixed_scaled = mixed;
  for (auto& v : mixed_scaled.a) v /= 16.0;
  for (int round = 1; round <= 3; ++round) {
    std::vector<qsim::Matrix> views;
    for (std::uint64_t x = 0; x < 4; ++x) {
      const auto v = adversary_view(round, BitString(2, x), config(2));
      CHECK(v.report.trace_distance_to_mixed <= 1e-9);
      CHECK(v.report.averaging_space_size == averaging_space_size(round, 2));
      views.push_back(v.density);
    }
    CHECK(oracle::trace_distance(to_oracle(views[0]), mixed_scaled) <= 1e-9);
    double worst = 0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b) worst = std::max(worst, qsim::trace_distance(views[a], views[b]));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("exhaustive views for the Pauli families") {
  for (pqc::FamilyId id : {pqc::FamilyId::PQC1, pqc::FamilyId::PQC2}) {
    auto cfg = config(2);
    cfg.family = pqc::PqcFamily::of(id);
    CHECK(adversary_view(2, BitString::parse("01"), cfg).report.trace_distance_to_mixed <= 1e-9);
  }
}

TEST_CASE("parallel and serial sweeps agree") {
  const auto serial = adversary_view(3, BitString::parse("10"), config(2), 1);
  const auto parallel = adversary_view(3, BitString::parse("10"), config(2), 4);
  CHECK((serial.density - parallel.density).cwiseAbs().maxCoeff() <= 1e-12);
  const auto s1 = adversary_view_sampled(1, BitString::parse("10"), config(2), 500, 3, 1);
  const auto s4 = adversary_view_sampled(1, BitString::parse("10"), config(2), 500, 3, 4);
  CHECK((s1.density - s4.density).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sampled views agree with exhaustive ones within 4 standard errors") {
  for (int round = 1; round <= 3; ++round) {
    const auto exact = adversary_view(round, BitString::parse("11"), config(2));
    const auto est = adversary_view_sampled(round, BitString::parse("11"), config(2), 3000, 17);
    REQUIRE(est.report.standard_error.has_value());
    CHECK((est.density - exact.density).norm() <= 4 * *est.report.standard_error);
  }
}

TEST_CASE("view resource limits") {
  CHECK_THROWS_AS(adversary_view(1, BitString::parse("0000"), config(4)), ResourceLimitError);
  CHECK_THROWS_AS(adversary_view_sampled(1, BitString::parse("000000"), config(6), 10, 0),
                  ResourceLimitError);
  CHECK_THROWS_AS(adversary_view(1, BitString::parse("000"), config(2)), ArgumentError);
  const auto v = adversary_view_sampled(2, BitString::parse("0101"), config(4), 50, 1);
  CHECK(v.density.rows() == 256);
}

TEST_CASE("view report JSON omits the runtime by default") {
  const auto v = adversary_view(1, BitString::parse("00"), config(2));
  CHECK(!to_json(v.report).contains("runtime_seconds"));
  CHECK(to_json(v.report, true).contains("runtime_seconds"));
  CHECK(to_json(v.report)["mode"] == "exhaustive");
}

TEST_CASE("joint view estimate: identical plaintexts give zero separation") {
  const auto r = joint_view_estimate(BitString::parse("00"), BitString::parse("00"), config(2), 10000, 1);
  CHECK(r.estimate == 0.0);
  CHECK(r.bases.size() == 2);
}

TEST_CASE("joint view estimate: standard error shrinks with more samples") {
  const auto a = joint_view_estimate(BitString::parse("00"), BitString::parse("11"), config(2), 10000, 5, 50);
  const auto b = joint_view_estimate(BitString::parse("00"), BitString::parse("11"), config(2), 20000, 5, 50);
  const double ratio = b.standard_error / a.standard_error;
  CHECK(ratio > 0.45);
  CHECK(ratio < 1.0);
}

TEST_CASE("joint view estimate preconditions") {
  CHECK_THROWS_AS(joint_view_estimate(BitString::parse("0000"), BitString::parse("1111"), config(4), 10000, 1),
                  ResourceLimitError);
  CHECK_THROWS_AS(joint_view_estimate(BitString::parse("00"), BitString::parse("11"), config(2), 100, 1),
                  ArgumentError);
}
