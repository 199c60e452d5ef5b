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

#include <cstdint>
#include <random>

#include "qnk/bits.hpp"

namespace qnk {

// SplitMix64 finalizer; used to turn (seed, stream counter) pairs into
// well-separated engine seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic random source: an mt19937_64 engine seeded from
// splitmix64(seed ^ splitmix64(stream)). The engine output sequence is fixed
// by the C++ standard and all draws below are computed from raw 64-bit
// outputs, so streams are bit-identical across platforms and toolchains.
//
// `stream(k)` derives an independent child generator from the same
// (seed, counter) rule, so parallel and serial runs see the same draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  Rng stream(std::uint64_t counter) const;

  std::uint64_t next_u64() { return engine_(); }
  // Uniform width-bit string.
  BitString bits(std::size_t width);
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  // Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace qnk
