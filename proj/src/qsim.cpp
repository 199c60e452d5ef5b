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

#include "qnk/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "qnk/errors.hpp"

namespace qnk::qsim {

namespace {

constexpr Complex kI{0.0, 1.0};

std::size_t checked_dim(std::size_t num_qubits) {
  if (num_qubits > kMaxQubits) {
    throw ResourceLimitError("state of " + std::to_string(num_qubits) +
                             " qubits exceeds the simulator limit of " + std::to_string(kMaxQubits));
  }
  return std::size_t{1} << num_qubits;
}

// Shift that moves qubit `q` of an n-qubit index to bit 0.
std::size_t qubit_shift(std::size_t num_qubits, std::size_t q) { return num_qubits - 1 - q; }

std::uint64_t register_value(std::size_t index, std::size_t num_qubits, const RegisterSlot& slot) {
  const std::size_t shift = num_qubits - slot.offset - slot.width;
  return (index >> shift) & width_mask(slot.width);
}

}  // namespace

// ---------------------------------------------------------------------------
// Gate

Gate Gate::of(GateKind kind) {
  Gate g;
  g.kind = kind;
  switch (kind) {
    case GateKind::I:
      g.name = "I";
      g.matrix << 1, 0, 0, 1;
      break;
    case GateKind::X:
      g.name = "X";
      g.matrix << 0, 1, 1, 0;
      break;
    case GateKind::Y:
      g.name = "Y";
      g.matrix << 0, -kI, kI, 0;
      break;
    case GateKind::Z:
      g.name = "Z";
      g.matrix << 1, 0, 0, -1;
      break;
    case GateKind::H: {
      g.name = "H";
      const double s = 1.0 / std::numbers::sqrt2;
      g.matrix << s, s, s, -s;
      break;
    }
    case GateKind::Custom:
      throw ArgumentError("Gate::of cannot build a custom gate; use Gate::custom");
  }
  return g;
}

Gate Gate::custom(std::string name, const Matrix2& matrix) {
  Gate g;
  g.kind = GateKind::Custom;
  g.name = std::move(name);
  g.matrix = matrix;
  if (!g.is_unitary(kStructuralTol)) {
    throw ArgumentError("custom gate '" + g.name + "' is not unitary");
  }
  return g;
}

Gate Gate::parse(std::string_view name) {
  if (name == "I" || name == "i") return of(GateKind::I);
  if (name == "X" || name == "x") return of(GateKind::X);
  if (name == "Y" || name == "y") return of(GateKind::Y);
  if (name == "Z" || name == "z") return of(GateKind::Z);
  if (name == "H" || name == "h") return of(GateKind::H);
  throw ArgumentError("unknown gate '" + std::string(name) + "'");
}

Gate Gate::adjoint() const {
  Gate g = *this;
  g.matrix = matrix.adjoint();
  if (kind == GateKind::Custom) g.name = name + "^dagger";
  return g;
}

bool Gate::is_unitary(double tol) const {
  return (matrix.adjoint() * matrix - Matrix2::Identity()).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// PureState / DensityMatrix

PureState::PureState(std::size_t num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != checked_dim(num_qubits)) {
    throw DimensionError("pure state of " + std::to_string(num_qubits) + " qubits needs " +
                         std::to_string(checked_dim(num_qubits)) + " amplitudes, got " +
                         std::to_string(amplitudes_.size()));
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kStructuralTol) {
    throw ArgumentError("pure state is not normalized (norm^2 = " +
                        std::to_string(amplitudes_.squaredNorm()) + ")");
  }
}

PureState PureState::basis(const BitString& bits) {
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(checked_dim(bits.width())));
  amps(static_cast<Eigen::Index>(bits.value())) = 1.0;
  return PureState(bits.width(), std::move(amps));
}

PureState PureState::zero(std::size_t num_qubits) { return basis(BitString::zeros(num_qubits)); }

PureState PureState::random(std::size_t num_qubits, Rng& rng) {
  Vector amps(static_cast<Eigen::Index>(checked_dim(num_qubits)));
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    amps(i) = Complex(re, im);
  }
  amps /= amps.norm();
  return PureState(num_qubits, std::move(amps));
}

std::size_t PureState::support_size(double tol) const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    if (std::abs(amplitudes_(i)) > tol) ++count;
  }
  return count;
}

DensityMatrix::DensityMatrix(std::size_t num_qubits, Matrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  const auto dim = static_cast<Eigen::Index>(checked_dim(num_qubits));
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw DimensionError("density matrix of " + std::to_string(num_qubits) + " qubits must be " +
                         std::to_string(dim) + "x" + std::to_string(dim));
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kStructuralTol) {
    throw ArgumentError("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0, 0.0)) > kStructuralTol) {
    throw ArgumentError("density matrix trace is not 1");
  }
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// RegisterLayout

std::string_view register_name(RegisterId id) {
  switch (id) {
    case RegisterId::I: return "I";
    case RegisterId::II: return "II";
    case RegisterId::III: return "III";
    case RegisterId::IV: return "IV";
  }
  return "?";
}

RegisterId parse_register(std::string_view name) {
  if (name == "I") return RegisterId::I;
  if (name == "II") return RegisterId::II;
  if (name == "III") return RegisterId::III;
  if (name == "IV") return RegisterId::IV;
  throw ArgumentError("unknown register '" + std::string(name) + "'");
}

RegisterLayout::RegisterLayout(std::vector<RegisterSlot> slots) : slots_(std::move(slots)) {
  std::set<RegisterId> seen;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (const auto& s : slots_) {
    if (!seen.insert(s.id).second) {
      throw ArgumentError("register " + std::string(register_name(s.id)) + " listed twice");
    }
    if (s.width == 0) {
      throw ArgumentError("register " + std::string(register_name(s.id)) + " has zero width");
    }
    ranges.emplace_back(s.offset, s.width);
    num_qubits_ += s.width;
  }
  std::sort(ranges.begin(), ranges.end());
  std::size_t next = 0;
  for (const auto& [offset, width] : ranges) {
    if (offset != next) {
      throw ArgumentError("register ranges overlap or leave gaps");
    }
    next = offset + width;
  }
}

RegisterLayout RegisterLayout::sequential(
    const std::vector<std::pair<RegisterId, std::size_t>>& widths) {
  std::vector<RegisterSlot> slots;
  std::size_t offset = 0;
  for (const auto& [id, width] : widths) {
    slots.push_back({id, offset, width});
    offset += width;
  }
  return RegisterLayout(std::move(slots));
}

bool RegisterLayout::contains(RegisterId id) const {
  return std::any_of(slots_.begin(), slots_.end(), [id](const auto& s) { return s.id == id; });
}

const RegisterSlot& RegisterLayout::slot(RegisterId id) const {
  for (const auto& s : slots_) {
    if (s.id == id) return s;
  }
  throw ArgumentError("register " + std::string(register_name(id)) + " is not in the layout");
}

std::vector<RegisterId> RegisterLayout::ids() const {
  std::vector<RegisterId> out;
  for (const auto& s : slots_) out.push_back(s.id);
  return out;
}

RegisterLayout RegisterLayout::without(RegisterId id) const {
  const RegisterSlot removed = slot(id);
  std::vector<RegisterSlot> rest;
  for (const auto& s : slots_) {
    if (s.id == id) continue;
    RegisterSlot copy = s;
    if (copy.offset > removed.offset) copy.offset -= removed.width;
    rest.push_back(copy);
  }
  return RegisterLayout(std::move(rest));
}

// ---------------------------------------------------------------------------
// Gates on states

namespace {

Complex mul(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void apply_in_place(Vector& amps, std::size_t num_qubits, const Matrix2& m, std::size_t qubit) {
  const std::size_t bit = std::size_t{1} << qubit_shift(num_qubits, qubit);
  const auto dim = static_cast<std::size_t>(amps.size());
  Complex* data = amps.data();
  const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::size_t base = 0; base < dim; base += 2 * bit) {
    for (std::size_t i = base; i < base + bit; ++i) {
      const Complex a0 = data[i];
      const Complex a1 = data[i | bit];
      data[i] = mul(m00, a0) + mul(m01, a1);
      data[i | bit] = mul(m10, a0) + mul(m11, a1);
    }
  }
}

bool is_pauli(GateKind kind) {
  return kind == GateKind::I || kind == GateKind::X || kind == GateKind::Y || kind == GateKind::Z;
}

// One pass for a layer of identical Pauli gates on the qubits whose index bits
// are set in `bits`: |i> -> phase(i) |i ^ flip>.
Vector apply_pauli_layer(const Vector& amps, GateKind kind, std::size_t bits) {
  const std::size_t flip = (kind == GateKind::X || kind == GateKind::Y) ? bits : 0;
  const std::size_t sign = (kind == GateKind::Z || kind == GateKind::Y) ? bits : 0;
  Complex global{1.0, 0.0};
  if (kind == GateKind::Y) {
    static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    global = kPowers[std::popcount(bits) % 4];
  }
  const auto dim = static_cast<std::size_t>(amps.size());
  Vector out(amps.size());
  const Complex* in = amps.data();
  Complex* dst = out.data();
  for (std::size_t i = 0; i < dim; ++i) {
    const Complex v = (std::popcount(i & sign) & 1) ? -in[i] : in[i];
    dst[i ^ flip] = mul(global, v);
  }
  return out;
}

}  // namespace

PureState apply_single_qubit(const PureState& state, const Matrix2& m, std::size_t qubit) {
  if (qubit >= state.num_qubits()) {
    throw DimensionError("qubit index " + std::to_string(qubit) + " out of range");
  }
  Vector amps = state.amplitudes();
  apply_in_place(amps, state.num_qubits(), m, qubit);
  return PureState(state.num_qubits(), std::move(amps));
}

PureState apply_gate_layer(const PureState& state, const Gate& gate, const BitString& mask) {
  if (mask.width() != state.num_qubits()) {
    throw DimensionError("gate mask has width " + std::to_string(mask.width()) + " but state has " +
                         std::to_string(state.num_qubits()) + " qubits");
  }
  if (mask.is_zero()) return state;
  if (is_pauli(gate.kind)) {
    const std::size_t bits = mask.value();
    return PureState(state.num_qubits(), apply_pauli_layer(state.amplitudes(), gate.kind, bits));
  }
  Vector amps = state.amplitudes();
  for (std::size_t q = 0; q < mask.width(); ++q) {
    if (mask.at(q)) apply_in_place(amps, state.num_qubits(), gate.matrix, q);
  }
  return PureState(state.num_qubits(), std::move(amps));
}

PureState apply_gate_layer(const PureState& state, const RegisterLayout& layout, RegisterId reg,
                           const Gate& gate, const BitString& mask) {
  if (layout.num_qubits() != state.num_qubits()) {
    throw DimensionError("layout does not match state width");
  }
  const RegisterSlot& slot = layout.slot(reg);
  if (mask.width() != slot.width) {
    throw DimensionError("gate mask has width " + std::to_string(mask.width()) + " but register " +
                         std::string(register_name(reg)) + " has " + std::to_string(slot.width) +
                         " qubits");
  }
  if (mask.is_zero()) return state;
  if (is_pauli(gate.kind)) {
    const std::size_t bits = mask.value() << (state.num_qubits() - slot.offset - slot.width);
    return PureState(state.num_qubits(), apply_pauli_layer(state.amplitudes(), gate.kind, bits));
  }
  Vector amps = state.amplitudes();
  for (std::size_t q = 0; q < slot.width; ++q) {
    if (mask.at(q)) apply_in_place(amps, state.num_qubits(), gate.matrix, slot.offset + q);
  }
  return PureState(state.num_qubits(), std::move(amps));
}

// ---------------------------------------------------------------------------
// Measurement

std::vector<double> register_distribution(const PureState& state, const RegisterLayout& layout,
                                          RegisterId reg) {
  if (layout.num_qubits() != state.num_qubits()) {
    throw DimensionError("layout does not match state width");
  }
  const RegisterSlot& slot = layout.slot(reg);
  std::vector<double> probs(std::size_t{1} << slot.width, 0.0);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    probs[register_value(i, state.num_qubits(), slot)] += std::norm(state.amplitude(i));
  }
  return probs;
}

PureState project_register(const PureState& state, const RegisterLayout& layout, RegisterId reg,
                           const BitString& outcome) {
  const RegisterSlot& slot = layout.slot(reg);
  if (outcome.width() != slot.width) {
    throw DimensionError("outcome width does not match register width");
  }
  Vector amps = state.amplitudes();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (register_value(i, state.num_qubits(), slot) != outcome.value()) {
      amps(static_cast<Eigen::Index>(i)) = 0.0;
    }
  }
  const double norm = amps.norm();
  if (norm == 0.0) {
    throw PreconditionError("projection onto a zero-weight outcome");
  }
  amps /= norm;
  return PureState(state.num_qubits(), std::move(amps));
}

MeasurementResult measure_register(const PureState& state, const RegisterLayout& layout,
                                   RegisterId reg, Rng& rng) {
  const std::vector<double> probs = register_distribution(state, layout, reg);
  const double u = rng.uniform01();
  double cumulative = 0.0;
  std::size_t chosen = probs.size();
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    cumulative += probs[k];
    if (u < cumulative) {
      chosen = k;
      break;
    }
  }
  // Rounding can leave u above the final cumulative sum.
  if (chosen == probs.size()) chosen = last_positive;
  const BitString outcome(layout.slot(reg).width, chosen);
  return {outcome, project_register(state, layout, reg, outcome), probs[chosen]};
}

LaidOutState discard_register(const PureState& state, const RegisterLayout& layout, RegisterId reg,
                              const BitString& outcome) {
  const RegisterSlot& slot = layout.slot(reg);
  if (outcome.width() != slot.width) {
    throw DimensionError("outcome width does not match register width");
  }
  const std::size_t n = state.num_qubits();
  const std::size_t rest_qubits = n - slot.width;
  const std::size_t low_width = n - slot.offset - slot.width;
  Vector rest = Vector::Zero(static_cast<Eigen::Index>(checked_dim(rest_qubits)));
  double kept_weight = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (register_value(i, n, slot) != outcome.value()) continue;
    const std::size_t low = i & width_mask(low_width);
    const std::size_t high = i >> (low_width + slot.width);
    const std::size_t j = (high << low_width) | low;
    rest(static_cast<Eigen::Index>(j)) = state.amplitude(i);
    kept_weight += std::norm(state.amplitude(i));
  }
  if (std::abs(kept_weight - 1.0) > kStructuralTol) {
    throw PreconditionError("register " + std::string(register_name(reg)) +
                            " is not in basis state " + outcome.str());
  }
  rest /= rest.norm();
  return {PureState(rest_qubits, std::move(rest)), layout.without(reg)};
}

// ---------------------------------------------------------------------------
// Products, densities, distances

PureState tensor(const PureState& a, const PureState& b) {
  const std::size_t n = a.num_qubits() + b.num_qubits();
  Vector amps(static_cast<Eigen::Index>(checked_dim(n)));
  const auto db = static_cast<Eigen::Index>(b.dim());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i) {
    amps.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  }
  return PureState(n, std::move(amps));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix to_density(const PureState& state) {
  return DensityMatrix(state.num_qubits(), state.amplitudes() * state.amplitudes().adjoint());
}

DensityMatrix partial_trace_qubits(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  const std::size_t n = rho.num_qubits();
  if (keep.empty()) {
    throw ArgumentError("partial trace must keep at least one qubit");
  }
  std::vector<bool> kept(n, false);
  for (std::size_t q : keep) {
    if (q >= n) throw DimensionError("kept qubit out of range");
    if (kept[q]) throw ArgumentError("qubit listed twice in keep set");
    kept[q] = true;
  }
  std::vector<std::size_t> keep_sorted, traced;
  for (std::size_t q = 0; q < n; ++q) (kept[q] ? keep_sorted : traced).push_back(q);

  // Scatter a compact index over the given qubits into a full-register index.
  auto scatter = [n](std::size_t compact, const std::vector<std::size_t>& qubits) {
    std::size_t full = 0;
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      const std::size_t bit = (compact >> (qubits.size() - 1 - k)) & 1u;
      full |= bit << qubit_shift(n, qubits[k]);
    }
    return full;
  };
  const std::size_t dk = std::size_t{1} << keep_sorted.size();
  const std::size_t dt = std::size_t{1} << traced.size();
  std::vector<std::size_t> kept_part(dk), traced_part(dt);
  for (std::size_t i = 0; i < dk; ++i) kept_part[i] = scatter(i, keep_sorted);
  for (std::size_t t = 0; t < dt; ++t) traced_part[t] = scatter(t, traced);

  Matrix reduced = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t i = 0; i < dk; ++i) {
    for (std::size_t j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        sum += rho(kept_part[i] | traced_part[t], kept_part[j] | traced_part[t]);
      }
      reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum;
    }
  }
  return DensityMatrix(keep_sorted.size(), std::move(reduced));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const RegisterLayout& layout,
                            const std::vector<RegisterId>& keep) {
  if (keep.empty()) {
    throw ArgumentError("partial trace needs a non-empty keep set");
  }
  if (layout.num_qubits() != rho.num_qubits()) {
    throw DimensionError("layout does not match density matrix width");
  }
  std::vector<std::size_t> qubits;
  for (RegisterId id : keep) {
    const RegisterSlot& s = layout.slot(id);
    for (std::size_t q = 0; q < s.width; ++q) qubits.push_back(s.offset + q);
  }
  std::sort(qubits.begin(), qubits.end());
  return partial_trace_qubits(rho, qubits);
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("trace distance of matrices with different dimensions");
  }
  const Matrix diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.num_qubits() != sigma.num_qubits()) {
    throw DimensionError("trace distance of states with different qubit counts");
  }
  return trace_distance(rho.entries(), sigma.entries());
}

DensityMatrix maximally_mixed(std::size_t num_qubits) {
  if (num_qubits == 0) {
    throw ArgumentError("maximally mixed state needs at least one qubit");
  }
  const auto dim = static_cast<Eigen::Index>(checked_dim(num_qubits));
  return DensityMatrix(num_qubits, Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionError("fidelity of states with different qubit counts");
  }
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (rho.num_qubits() != psi.num_qubits()) {
    throw DimensionError("fidelity of states with different qubit counts");
  }
  return (psi.amplitudes().adjoint() * rho.entries() * psi.amplitudes())(0, 0).real();
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::ordered_json to_json(const PureState& state) {
  nlohmann::ordered_json amps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    amps.push_back({state.amplitude(i).real(), state.amplitude(i).imag()});
  }
  nlohmann::ordered_json j;
  j["num_qubits"] = state.num_qubits();
  j["amps"] = std::move(amps);
  return j;
}

nlohmann::ordered_json to_json(const DensityMatrix& rho) {
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      entries.push_back({rho(r, c).real(), rho(r, c).imag()});
    }
  }
  nlohmann::ordered_json j;
  j["num_qubits"] = rho.num_qubits();
  j["entries"] = std::move(entries);
  return j;
}

PureState pure_state_from_json(const nlohmann::ordered_json& j) {
  const auto n = j.at("num_qubits").get<std::size_t>();
  const auto& amps = j.at("amps");
  Vector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = Complex(amps[i].at(0).get<double>(), amps[i].at(1).get<double>());
  }
  return PureState(n, std::move(v));
}

}  // namespace qnk::qsim
