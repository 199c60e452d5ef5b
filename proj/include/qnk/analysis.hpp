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

// Adversary views of the authenticated protocol.
//
// The view of round k is the density matrix of the in-flight message
// averaged over everything Eve does not know. Exhaustive mode enumerates:
//
//   round 1  Alice's PQC key, s, r, r_A                       2^{4n} terms
//   round 2  both PQC keys, s, r_A, r_B                         2^{6n} terms
//   round 3  both PQC keys, s, r_B, r_C                         2^{6n} terms
//
// Nonces that do not enter a round's message are held at zero. Sampled mode
// draws the same variables uniformly; sample k uses rng.stream(k).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnk/bits.hpp"
#include "qnk/protocol.hpp"
#include "qnk/qsim.hpp"

namespace qnk::analysis {

inline constexpr std::size_t kMaxExhaustiveN = 2;
inline constexpr std::size_t kMaxSampledN = 4;

enum class ViewMode { Exhaustive, Sampled };

struct ViewReport {
  int round = 1;
  std::size_t n = 0;
  std::string plaintext;
  std::string family;
  ViewMode mode = ViewMode::Exhaustive;
  // Exhaustive: number of enumerated terms. Sampled: number of samples.
  std::uint64_t averaging_space_size = 0;
  double trace_distance_to_mixed = 0.0;
  // Sampled only: Frobenius-norm standard error of the averaged matrix.
  std::optional<double> standard_error;
  double runtime_seconds = 0.0;
};

struct ViewResult {
  ViewReport report;
  qsim::Matrix density;
};

// Size of the exhaustive averaging space for `round` at width n.
std::uint64_t averaging_space_size(int round, std::size_t n);

// Exhaustive for n <= 2; throws ResourceLimitError beyond that.
ViewResult adversary_view(int round, const BitString& x, const protocol::SessionConfig& cfg,
                          std::size_t workers = 1);

// Monte-Carlo estimate from `samples` draws; n <= 4.
ViewResult adversary_view_sampled(int round, const BitString& x, const protocol::SessionConfig& cfg,
                                  std::size_t samples, std::uint64_t seed, std::size_t workers = 1);

// `include_runtime` is off by default so reports are reproducible byte for byte.
nlohmann::ordered_json to_json(const ViewReport& report, bool include_runtime = false);

// ---------------------------------------------------------------------------
// Exploratory: the three in-flight messages of one session taken jointly.
//
// For each sampled secret assignment the product state of the three messages
// is measured (exactly, via Born probabilities) in each declared basis. The
// averaged outcome distributions for plaintexts a and b are compared by total
// variation distance, which lower-bounds the trace distance between the two
// joint views. Both plaintexts see the same secret samples.

struct BasisSeparation {
  std::string basis;  // "Z" or "X" on every qubit
  double separation = 0.0;
  double standard_error = 0.0;
};

struct JointViewReport {
  std::size_t n = 2;
  std::string plaintext_a;
  std::string plaintext_b;
  std::string family;
  std::size_t samples = 0;
  std::size_t batches = 0;
  std::vector<BasisSeparation> bases;
  // Largest separation over the basis set, and its batch-means standard error.
  double estimate = 0.0;
  double standard_error = 0.0;
};

inline constexpr std::size_t kMinJointSamples = 10000;

// n must be 2 (ResourceLimitError otherwise); samples >= kMinJointSamples.
JointViewReport joint_view_estimate(const BitString& a, const BitString& b,
                                    const protocol::SessionConfig& cfg, std::size_t samples,
                                    std::uint64_t seed, std::size_t batches = 20);

nlohmann::ordered_json to_json(const JointViewReport& report);

}  // namespace qnk::analysis
