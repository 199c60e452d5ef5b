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

// Minimal dense simulator for the handful of qubits a protocol session needs.
//
// Conventions used throughout the project:
//   * qubit 0 is the most-significant bit of a basis-state index, so the
//     textual bit string "b0 b1 ... b(k-1)" names basis state |b0 b1 ...>;
//   * registers occupy contiguous qubit ranges laid out in ascending order;
//   * states are only ever compared through densities or probabilities, never
//     amplitude-wise, because Y and anticommutation phases are unobservable.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "qnk/bits.hpp"
#include "qnk/rng.hpp"

namespace qnk::qsim {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kStructuralTol = 1e-9;
inline constexpr double kAlgebraTol = 1e-12;
// Widest state the simulator will allocate (2^kMaxQubits amplitudes).
inline constexpr std::size_t kMaxQubits = 24;

enum class GateKind { I, X, Y, Z, H, Custom };

struct Gate {
  GateKind kind = GateKind::I;
  std::string name;
  Matrix2 matrix;

  static Gate of(GateKind kind);
  // Any 2x2 unitary; used to feed the family verifier arbitrary gate pairs.
  static Gate custom(std::string name, const Matrix2& matrix);
  static Gate parse(std::string_view name);

  Gate adjoint() const;
  bool is_unitary(double tol = kAlgebraTol) const;
};

class PureState {
 public:
  // Validates length 2^num_qubits and unit norm (kStructuralTol).
  PureState(std::size_t num_qubits, Vector amplitudes);

  static PureState basis(const BitString& bits);
  static PureState zero(std::size_t num_qubits);
  // Gaussian amplitudes, normalized; unitarily invariant distribution.
  static PureState random(std::size_t num_qubits, Rng& rng);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }
  double norm_squared() const { return amplitudes_.squaredNorm(); }
  // Number of amplitudes with magnitude above tol.
  std::size_t support_size(double tol = kStructuralTol) const;

 private:
  std::size_t num_qubits_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  // Validates shape, Hermiticity and unit trace (kStructuralTol).
  DensityMatrix(std::size_t num_qubits, Matrix entries);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  // Smallest eigenvalue; the positivity invariant is min_eigenvalue() >= -1e-9.
  double min_eigenvalue() const;

 private:
  std::size_t num_qubits_;
  Matrix entries_;
};

enum class RegisterId { I, II, III, IV };

std::string_view register_name(RegisterId id);
RegisterId parse_register(std::string_view name);

struct RegisterSlot {
  RegisterId id;
  std::size_t offset;
  std::size_t width;
};

class RegisterLayout {
 public:
  // Slots must be pairwise distinct, disjoint, and tile [0, total) exactly.
  explicit RegisterLayout(std::vector<RegisterSlot> slots);
  // Registers placed back to back in the given order.
  static RegisterLayout sequential(const std::vector<std::pair<RegisterId, std::size_t>>& widths);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<RegisterSlot>& slots() const { return slots_; }
  bool contains(RegisterId id) const;
  const RegisterSlot& slot(RegisterId id) const;
  std::vector<RegisterId> ids() const;
  // Layout with `id` removed and later registers shifted down.
  RegisterLayout without(RegisterId id) const;

 private:
  std::vector<RegisterSlot> slots_;
  std::size_t num_qubits_ = 0;
};

struct MeasurementResult {
  BitString outcome;
  PureState post_state;
  double probability;
};

// Applies `gate` to every qubit whose mask bit is 1. Mask width must equal the
// state's qubit count.
PureState apply_gate_layer(const PureState& state, const Gate& gate, const BitString& mask);
// Same, restricted to one register; mask width must equal the register width.
PureState apply_gate_layer(const PureState& state, const RegisterLayout& layout, RegisterId reg,
                           const Gate& gate, const BitString& mask);
PureState apply_single_qubit(const PureState& state, const Matrix2& matrix, std::size_t qubit);

// Born probabilities of every outcome of a computational-basis measurement of
// `reg`, indexed by the outcome's integer value.
std::vector<double> register_distribution(const PureState& state, const RegisterLayout& layout,
                                          RegisterId reg);
MeasurementResult measure_register(const PureState& state, const RegisterLayout& layout,
                                   RegisterId reg, Rng& rng);
// Renormalized projection of `reg` onto `outcome`; throws PreconditionError if
// the outcome has zero weight.
PureState project_register(const PureState& state, const RegisterLayout& layout, RegisterId reg,
                           const BitString& outcome);

struct LaidOutState {
  PureState state;
  RegisterLayout layout;
};

// Removes a register that is in the definite basis state `outcome` (as after a
// measurement), returning the remaining registers. Throws PreconditionError if
// the register is not in that basis state.
LaidOutState discard_register(const PureState& state, const RegisterLayout& layout, RegisterId reg,
                              const BitString& outcome);

// |a> (x) |b>, with a on the lower qubit indices.
PureState tensor(const PureState& a, const PureState& b);
Matrix kron(const Matrix& a, const Matrix& b);

DensityMatrix to_density(const PureState& state);
// Reduced state on the listed qubits (ascending order kept in the output).
DensityMatrix partial_trace_qubits(const DensityMatrix& rho, const std::vector<std::size_t>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterLayout& layout,
                            const std::vector<RegisterId>& keep);
// (1/2) sum |eigenvalues of (rho - sigma)|.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double trace_distance(const Matrix& rho, const Matrix& sigma);
DensityMatrix maximally_mixed(std::size_t num_qubits);

// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);
// <psi|rho|psi>
double fidelity(const DensityMatrix& rho, const PureState& psi);

nlohmann::ordered_json to_json(const PureState& state);
nlohmann::ordered_json to_json(const DensityMatrix& rho);
PureState pure_state_from_json(const nlohmann::ordered_json& j);

}  // namespace qnk::qsim
