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

#include "qnk/boolperm.hpp"

#include <vector>

#include "qnk/errors.hpp"

namespace qnk::boolperm {

PermKey::PermKey(BitString s) : s_(s) {
  if (s_.width() < 2 || s_.width() % 2 != 0) {
    throw ArgumentError("permutation key width must be even and >= 2, got " +
                        std::to_string(s_.width()));
  }
}

std::uint64_t round_function(std::uint64_t key, std::uint64_t x, std::size_t half_width) {
  const std::uint64_t mask = width_mask(half_width);
  if (half_width == 1) return (x ^ key) & 1u;
  const std::uint64_t mixed = (x ^ key) & mask;
  const std::uint64_t rotated = ((mixed << 1) | (mixed >> (half_width - 1))) & mask;
  return ((x + key) & mask) ^ rotated;
}

BitString feistel_permute(const PermKey& key, const BitString& m) {
  if (m.width() != key.width()) {
    if (m.width() % 2 != 0) {
      throw ArgumentError("Feistel input width must be even, got " + std::to_string(m.width()));
    }
    throw DimensionError("Feistel input width " + std::to_string(m.width()) +
                         " does not match key width " + std::to_string(key.width()));
  }
  const std::size_t h = key.half_width();
  const std::uint64_t k1 = key.bits().prefix(h).value();
  const std::uint64_t k2 = key.bits().suffix(h).value();
  const std::uint64_t round_keys[3] = {k1, k2, k1 ^ k2};

  std::uint64_t left = m.prefix(h).value();
  std::uint64_t right = m.suffix(h).value();
  for (std::uint64_t k : round_keys) {
    const std::uint64_t next_right = left ^ round_function(k, right, h);
    left = right;
    right = next_right;
  }
  return BitString(h, left).concat(BitString(h, right));
}

bool verify_bijection(const Mapping& candidate, std::size_t n) {
  if (n > kMaxBijectionWidth) {
    throw ResourceLimitError("verify_bijection enumerates 2^n inputs; n = " + std::to_string(n) +
                             " exceeds the bound n <= " + std::to_string(kMaxBijectionWidth));
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<bool> seen(size, false);
  for (std::size_t m = 0; m < size; ++m) {
    const BitString out = candidate(BitString(n, m));
    if (out.width() != n || seen[out.value()]) return false;
    seen[out.value()] = true;
  }
  return true;
}

bool verify_bijection(const PermKey& key, std::size_t n) {
  if (n != key.width()) {
    throw DimensionError("bijection width does not match key width");
  }
  return verify_bijection([&key](const BitString& m) { return feistel_permute(key, m); }, n);
}

qsim::PureState apply_us(const qsim::PureState& state, const qsim::RegisterLayout& layout,
                         const PermKey& key, qsim::RegisterId source, qsim::RegisterId target) {
  if (layout.num_qubits() != state.num_qubits()) {
    throw DimensionError("layout does not match state width");
  }
  const auto& src = layout.slot(source);
  const auto& dst = layout.slot(target);
  if (src.width != key.width() || dst.width != key.width()) {
    throw DimensionError("U_s needs source and target registers of width " +
                         std::to_string(key.width()));
  }
  if (source == target) {
    throw ArgumentError("U_s source and target must differ");
  }
  const std::size_t n = state.num_qubits();
  const std::size_t src_shift = n - src.offset - src.width;
  const std::size_t dst_shift = n - dst.offset - dst.width;
  const std::uint64_t reg_mask = width_mask(key.width());

  // F_s over every possible source value.
  std::vector<std::uint64_t> table(std::size_t{1} << key.width());
  for (std::size_t m = 0; m < table.size(); ++m) {
    table[m] = feistel_permute(key, BitString(key.width(), m)).value();
  }

  qsim::Vector out(static_cast<Eigen::Index>(state.dim()));
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const std::uint64_t m = (i >> src_shift) & reg_mask;
    const std::size_t j = i ^ static_cast<std::size_t>(table[m] << dst_shift);
    out(static_cast<Eigen::Index>(j)) = state.amplitude(i);
  }
  return qsim::PureState(n, std::move(out));
}

}  // namespace qnk::boolperm
