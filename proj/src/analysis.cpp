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

#include "qnk/analysis.hpp"

#include <chrono>
#include <cmath>

#include "qnk/errors.hpp"
#include "qnk/parallel.hpp"

namespace qnk::analysis {

using qsim::Matrix;
using qsim::PureState;

namespace {

struct Draw {
  pqc::PqcKey key_a;
  pqc::PqcKey key_b;
  BitString s;
  BitString r;
  BitString r_a;
  BitString r_b;
  BitString r_c;
};

void check_round(int round) {
  if (round < 1 || round > 3) throw ArgumentError("view round must be 1, 2 or 3");
}

void check_plaintext(const BitString& x, const protocol::SessionConfig& cfg) {
  cfg.validate();
  if (x.width() != cfg.n) {
    throw ArgumentError("plaintext must have width n = " + std::to_string(cfg.n));
  }
}

// The honest in-flight message of `round` for the given secrets.
PureState honest_message(int round, const BitString& x, const protocol::SessionConfig& cfg,
                         const Draw& d) {
  const auto secret = protocol::AuthSecret::make(d.s, d.r);
  const auto r1 = protocol::alice_round1(cfg, secret, x, protocol::Round1Choices{d.key_a, d.r_a});
  if (round == 1) return r1.message.payload;
  // Every check in an honest run sees a basis state, so this never draws.
  Rng unused(0);
  const auto r2 =
      protocol::bob_round2(cfg, secret, r1.message, protocol::Round2Choices{d.key_b, d.r_b}, unused);
  if (!r2.accepted()) throw PreconditionError("honest round-2 check rejected");
  if (round == 2) return r2.message->payload;
  const auto r3 =
      protocol::alice_round3(r1.alice, *r2.message, protocol::Round3Choices{d.r_c}, unused);
  if (!r3.accepted()) throw PreconditionError("honest round-3 check rejected");
  return r3.message->payload;
}

// Decodes an exhaustive case index. Low bits first: the two round nonces,
// then s, then Bob's key (rounds 2 and 3) and Alice's key. Round 1 uses r
// and r_A as its nonce pair.
Draw decode(int round, std::size_t n, std::uint64_t index) {
  const std::size_t h = n / 2;
  auto take = [&index](std::size_t width) {
    const std::uint64_t v = index & width_mask(width);
    index >>= width;
    return v;
  };
  const BitString zero_h = BitString::zeros(h);
  Draw d{pqc::key_from_index(n, 0), pqc::key_from_index(n, 0), BitString::zeros(n),
         zero_h, zero_h, zero_h, zero_h};
  const BitString second(h, take(h));
  const BitString first(h, take(h));
  d.s = BitString(n, take(n));
  if (round == 1) {
    d.r = first;
    d.r_a = second;
  } else {
    d.key_b = pqc::key_from_index(n, take(2 * n));
    if (round == 2) {
      d.r_a = first;
      d.r_b = second;
    } else {
      d.r_b = first;
      d.r_c = second;
    }
  }
  d.key_a = pqc::key_from_index(n, take(2 * n));
  return d;
}

Draw sample(std::size_t n, Rng& rng) {
  Draw d{pqc::sample_key(n, rng), pqc::sample_key(n, rng), rng.bits(n), rng.bits(n / 2),
         rng.bits(n / 2), rng.bits(n / 2), rng.bits(n / 2)};
  return d;
}

Matrix zero_density(std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (2 * n));
  return Matrix::Zero(dim, dim);
}

double trace_distance_to_mixed(const Matrix& rho) {
  const auto dim = rho.rows();
  return qsim::trace_distance(rho, Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::uint64_t averaging_space_size(int round, std::size_t n) {
  check_round(round);
  return round == 1 ? std::uint64_t{1} << (4 * n) : std::uint64_t{1} << (6 * n);
}

ViewResult adversary_view(int round, const BitString& x, const protocol::SessionConfig& cfg,
                          std::size_t workers) {
  check_round(round);
  check_plaintext(x, cfg);
  if (cfg.n > kMaxExhaustiveN) {
    throw ResourceLimitError("exhaustive adversary view is limited to n <= " +
                             std::to_string(kMaxExhaustiveN) + "; use sampled mode (--samples K)");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t total = averaging_space_size(round, cfg.n);
  Matrix sum = partitioned_sum<Matrix>(total, workers, [&](std::size_t begin, std::size_t end) {
    Matrix part = zero_density(cfg.n);
    for (std::size_t k = begin; k < end; ++k) {
      const PureState msg = honest_message(round, x, cfg, decode(round, cfg.n, k));
      part.noalias() += msg.amplitudes() * msg.amplitudes().adjoint();
    }
    return part;
  });
  sum /= static_cast<double>(total);

  ViewResult out;
  out.report.round = round;
  out.report.n = cfg.n;
  out.report.plaintext = x.str();
  out.report.family = cfg.family.name;
  out.report.mode = ViewMode::Exhaustive;
  out.report.averaging_space_size = total;
  out.report.trace_distance_to_mixed = trace_distance_to_mixed(sum);
  out.density = std::move(sum);
  out.report.runtime_seconds = seconds_since(start);
  return out;
}

ViewResult adversary_view_sampled(int round, const BitString& x, const protocol::SessionConfig& cfg,
                                  std::size_t samples, std::uint64_t seed, std::size_t workers) {
  check_round(round);
  check_plaintext(x, cfg);
  if (cfg.n > kMaxSampledN) {
    throw ResourceLimitError("sampled adversary view is limited to n <= " +
                             std::to_string(kMaxSampledN));
  }
  if (samples < 2) throw ArgumentError("sampled view needs at least 2 samples");
  const auto start = std::chrono::steady_clock::now();
  const Rng root(seed, 0x76696577ULL);
  Matrix sum = partitioned_sum<Matrix>(samples, workers, [&](std::size_t begin, std::size_t end) {
    Matrix part = zero_density(cfg.n);
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng = root.stream(k);
      const PureState msg = honest_message(round, x, cfg, sample(cfg.n, rng));
      part.noalias() += msg.amplitudes() * msg.amplitudes().adjoint();
    }
    return part;
  });
  const double count = static_cast<double>(samples);
  sum /= count;

  // Each term is a rank-one projector, so E||P - rho||_F^2 = 1 - ||rho||_F^2.
  const double spread = std::max(0.0, 1.0 - sum.squaredNorm());

  ViewResult out;
  out.report.round = round;
  out.report.n = cfg.n;
  out.report.plaintext = x.str();
  out.report.family = cfg.family.name;
  out.report.mode = ViewMode::Sampled;
  out.report.averaging_space_size = samples;
  out.report.trace_distance_to_mixed = trace_distance_to_mixed(sum);
  out.report.standard_error = std::sqrt(spread / (count - 1.0));
  out.density = std::move(sum);
  out.report.runtime_seconds = seconds_since(start);
  return out;
}

nlohmann::ordered_json to_json(const ViewReport& r, bool include_runtime) {
  nlohmann::ordered_json j;
  j["round"] = r.round;
  j["n"] = r.n;
  j["plaintext"] = r.plaintext;
  j["family"] = r.family;
  j["mode"] = r.mode == ViewMode::Exhaustive ? "exhaustive" : "sampled";
  j["averaging_space_size"] = r.averaging_space_size;
  j["trace_distance_to_mixed"] = r.trace_distance_to_mixed;
  j["standard_error"] =
      r.standard_error ? nlohmann::ordered_json(*r.standard_error) : nlohmann::ordered_json(nullptr);
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Joint view

namespace {

std::vector<double> basis_probabilities(const PureState& state, bool x_basis) {
  PureState rotated = state;
  if (x_basis) {
    rotated = qsim::apply_gate_layer(state, qsim::Gate::of(qsim::GateKind::H),
                                     BitString::ones(state.num_qubits()));
  }
  std::vector<double> p(rotated.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(rotated.amplitude(i));
  return p;
}

// acc += p1 (x) p2 (x) p3
void accumulate_product(std::vector<double>& acc, const std::vector<double>& p1,
                        const std::vector<double>& p2, const std::vector<double>& p3) {
  std::size_t k = 0;
  for (double a : p1) {
    for (double b : p2) {
      const double ab = a * b;
      for (double c : p3) acc[k++] += ab * c;
    }
  }
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q, double scale) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d * scale;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double batch_standard_error(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const auto b = static_cast<double>(v.size());
  return std::sqrt(ss / (b - 1.0) / b);
}

}  // namespace

JointViewReport joint_view_estimate(const BitString& a, const BitString& b,
                                    const protocol::SessionConfig& cfg, std::size_t samples,
                                    std::uint64_t seed, std::size_t batches) {
  cfg.validate();
  if (cfg.n != 2) {
    throw ResourceLimitError("joint view estimation is only available at n = 2");
  }
  check_plaintext(a, cfg);
  check_plaintext(b, cfg);
  if (samples < kMinJointSamples) {
    throw ArgumentError("joint view estimation needs at least " +
                        std::to_string(kMinJointSamples) + " samples");
  }
  if (batches < 2 || samples % batches != 0) {
    throw ArgumentError("batch count must be >= 2 and divide the sample count");
  }

  const std::size_t outcomes = std::size_t{1} << (3 * 2 * cfg.n);
  const std::size_t per_batch = samples / batches;
  const Rng root(seed, 0x6a6f696e74ULL);

  JointViewReport out;
  out.n = cfg.n;
  out.plaintext_a = a.str();
  out.plaintext_b = b.str();
  out.family = cfg.family.name;
  out.samples = samples;
  out.batches = batches;

  for (const bool x_basis : {false, true}) {
    std::vector<double> total_a(outcomes, 0.0);
    std::vector<double> total_b(outcomes, 0.0);
    std::vector<double> batch_tvd;
    for (std::size_t batch = 0; batch < batches; ++batch) {
      std::vector<double> acc_a(outcomes, 0.0);
      std::vector<double> acc_b(outcomes, 0.0);
      for (std::size_t k = batch * per_batch; k < (batch + 1) * per_batch; ++k) {
        Rng rng = root.stream(k);
        const Draw d = sample(cfg.n, rng);
        for (const auto& [x, acc] : {std::pair{&a, &acc_a}, std::pair{&b, &acc_b}}) {
          accumulate_product(*acc, basis_probabilities(honest_message(1, *x, cfg, d), x_basis),
                             basis_probabilities(honest_message(2, *x, cfg, d), x_basis),
                             basis_probabilities(honest_message(3, *x, cfg, d), x_basis));
        }
      }
      batch_tvd.push_back(total_variation(acc_a, acc_b, 1.0 / static_cast<double>(per_batch)));
      for (std::size_t i = 0; i < outcomes; ++i) {
        total_a[i] += acc_a[i];
        total_b[i] += acc_b[i];
      }
    }
    BasisSeparation sep;
    sep.basis = x_basis ? "X" : "Z";
    sep.separation = total_variation(total_a, total_b, 1.0 / static_cast<double>(samples));
    sep.standard_error = batch_standard_error(batch_tvd) / std::sqrt(static_cast<double>(batches));
    if (out.bases.empty() || sep.separation > out.estimate) {
      out.estimate = sep.separation;
      out.standard_error = sep.standard_error;
    }
    out.bases.push_back(sep);
  }
  return out;
}

nlohmann::ordered_json to_json(const JointViewReport& r) {
  nlohmann::ordered_json j;
  j["analysis"] = "joint-view";
  j["label"] = "EXPLORATORY";
  j["n"] = r.n;
  j["plaintext_a"] = r.plaintext_a;
  j["plaintext_b"] = r.plaintext_b;
  j["family"] = r.family;
  j["samples"] = r.samples;
  j["batches"] = r.batches;
  nlohmann::ordered_json bases = nlohmann::ordered_json::array();
  for (const auto& s : r.bases) {
    nlohmann::ordered_json e;
    e["basis"] = s.basis;
    e["separation"] = s.separation;
    e["standard_error"] = s.standard_error;
    bases.push_back(std::move(e));
  }
  j["bases"] = std::move(bases);
  j["estimate"] = r.estimate;
  j["standard_error"] = r.standard_error;
  return j;
}

}  // namespace qnk::analysis
