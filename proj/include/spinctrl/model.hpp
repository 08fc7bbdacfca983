// Copyright 2026 The spinctrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Spin-qubit Hamiltonians: the exchange-coupled pair in its rotating frame,
// effective single-qubit noise channels, lattices, and crosstalk extraction by
// least-action block diagonalization.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spinctrl/errors.hpp"
#include "spinctrl/linalg.hpp"
#include "spinctrl/pulse.hpp"

namespace spinctrl {

inline constexpr int kMaxDenseQubits = 12;

/// θ with tanθ = J / (ΔE_z + sqrt(J² + ΔE_z²)).
inline double mixing_angle(double J, double dEz) {
  if (!(dEz > 0.0)) throw DomainError("Zeeman difference must be positive");
  if (J < 0.0) throw DomainError("exchange coupling must be non-negative");
  return std::atan(J / (dEz + std::hypot(J, dEz)));
}

struct TwoQubitModel {
  double Ez = 0.0;
  double dEz = kReferenceDeltaEz;
  double J = 0.0;

  void validate() const {
    if (!(dEz > 0.0)) throw DomainError("Zeeman difference must be positive");
    if (J < 0.0) throw DomainError("exchange coupling must be non-negative");
  }
  double theta() const { return mixing_angle(J, dEz); }
  double tan_theta() const { return std::tan(theta()); }
  double dressed_splitting() const { return std::hypot(J, dEz); }
};

/// Lab-frame H_0 of the pair in {↑↑, ↑↓, ↓↑, ↓↓}.
inline Operator lab_frame_hamiltonian(const TwoQubitModel& m) {
  Operator h = Operator::Zero(4, 4);
  h(0, 0) = m.Ez;
  h(1, 1) = 0.5 * (-m.dEz - m.J);
  h(2, 2) = 0.5 * (m.dEz - m.J);
  h(1, 2) = h(2, 1) = 0.5 * m.J;
  h(3, 3) = -m.Ez;
  return h;
}

/// Rotating-frame pair Hamiltonian with qubit 2 (the right factor) driven at Ω_2:
/// (Ω_2/2) IX + (J/4) ZZ + (tanθ Ω_2/2)[cos(ΔẼt) XZ − sin(ΔẼt) YZ].
inline Operator rotating_frame_hamiltonian(const TwoQubitModel& m, double omega2, double t) {
  m.validate();
  static const Operator IX = pauli_string("IX");
  static const Operator ZZ = pauli_string("ZZ");
  static const Operator XZ = pauli_string("XZ");
  static const Operator YZ = pauli_string("YZ");
  Operator h = (0.5 * omega2) * IX + (0.25 * m.J) * ZZ;
  if (m.J != 0.0 && omega2 != 0.0) {
    const double c = 0.5 * m.tan_theta() * omega2;
    const double w = m.dressed_splitting() * t;
    h += (c * std::cos(w)) * XZ - (c * std::sin(w)) * YZ;
  }
  return h;
}

/// One effective single-qubit noise term ε·v(t)·Z seen by the driven qubit.
struct NoiseChannel {
  std::string label;
  double epsilon = 0.0;
  std::function<double(double)> v;
  Operator op;  // single-qubit noise operator
  Operator pair_op;  // the originating two-qubit Pauli string
};

/// ZZ coupling and the XZ/YZ crosstalk, projected onto the driven qubit.
template <Waveform W>
std::vector<NoiseChannel> effective_noise_channels(const TwoQubitModel& m, const W& pulse) {
  m.validate();
  const double tt = m.tan_theta();
  const double w = m.dressed_splitting();
  return {
      {"ZZ", 0.25 * m.J, [](double) { return 1.0; }, pauli::Z(), pauli_string("ZZ")},
      {"XZ", 0.5 * tt, [pulse, w](double t) { return pulse(t) * std::cos(w * t); }, pauli::Z(),
       pauli_string("XZ")},
      {"YZ", 0.5 * tt, [pulse, w](double t) { return -pulse(t) * std::sin(w * t); }, pauli::Z(),
       pauli_string("YZ")},
  };
}

/// Simplified neighbor-crosstalk pair: (Ω_2/2) X_2 + (J/4) Z_1Z_2
/// + βΩ_2 (cos Δt X_1 + sin Δt Y_1) Z_2, Δ = ω_2 − ω_1.
inline Operator crosstalk_pair_model(double omega1, double omega2, double J, double beta,
                                     double drive, double t) {
  static const Operator IX = pauli_string("IX");
  static const Operator ZZ = pauli_string("ZZ");
  static const Operator XZ = pauli_string("XZ");
  static const Operator YZ = pauli_string("YZ");
  const double d = omega2 - omega1;
  return (0.5 * drive) * IX + (0.25 * J) * ZZ +
         (beta * drive) * (std::cos(d * t) * XZ + std::sin(d * t) * YZ);
}

// ---------------------------------------------------------------------------
// Lattices

using Edge = std::pair<int, int>;

struct LatticeModel {
  int n_qubits = 0;
  std::vector<Edge> edges;
  std::vector<double> omegas;  // rad/ns
  double J = 0.0;
  double beta = 0.0;
  std::string name;

  void validate() const {
    if (n_qubits < 1) throw ValidationError("lattice needs at least one qubit");
    if (static_cast<int>(omegas.size()) != n_qubits)
      throw ValidationError("omegas must have one entry per qubit");
    if (J < 0.0) throw ValidationError("J must be non-negative");
    std::set<Edge> seen;
    for (auto [i, j] : edges) {
      if (i < 0 || j < 0 || i >= n_qubits || j >= n_qubits)
        throw ValidationError("edge references a qubit outside the register");
      if (i == j) throw ValidationError("self-loop in lattice edges");
      if (!seen.insert(std::minmax(i, j)).second) throw ValidationError("duplicate lattice edge");
    }
  }

  bool coupled(int i, int j) const {
    return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
      return (e.first == i && e.second == j) || (e.first == j && e.second == i);
    });
  }

  std::vector<int> neighbors(int q) const {
    std::vector<int> out;
    for (auto [i, j] : edges) {
      if (i == q) out.push_back(j);
      if (j == q) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Two-colouring of the coupling graph; throws if it is not bipartite.
  std::vector<int> sublattice() const {
    std::vector<int> color(n_qubits, -1);
    for (int s = 0; s < n_qubits; ++s) {
      if (color[s] >= 0) continue;
      color[s] = 0;
      std::vector<int> stack{s};
      while (!stack.empty()) {
        const int q = stack.back();
        stack.pop_back();
        for (int nb : neighbors(q)) {
          if (color[nb] < 0) {
            color[nb] = 1 - color[q];
            stack.push_back(nb);
          } else if (color[nb] == color[q]) {
            throw ValidationError("lattice is not bipartite");
          }
        }
      }
    }
    return color;
  }
};

/// 1-2-3-4 chain (0-based qubits 0..3).
inline LatticeModel chain4(double J = 0.0) {
  return {4, {{0, 1}, {1, 2}, {2, 3}}, {0.0, 0.2, 0.0, 0.2}, J, 0.0, "chain4"};
}

/// Bond-centred honeycomb cluster: central bond 3-4, leaves 1,2 on 3 and 5,6 on 4.
inline LatticeModel honeycomb6(double J = 0.0) {
  return {6, {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}}, {0.2, 0.2, 0.0, 0.2, 0.0, 0.0}, J, 0.0,
          "honeycomb6"};
}

/// Two rows of five, row bonds plus rungs at columns 0, 2 and 4 (brick-wall fragment).
/// Qubits 0..4 form the upper row, 5..9 the lower one.
inline LatticeModel grid10(double J = 0.0) {
  LatticeModel lat;
  lat.n_qubits = 10;
  lat.name = "grid10";
  lat.J = J;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) lat.edges.push_back({5 * r + c, 5 * r + c + 1});
  for (int c : {0, 2, 4}) lat.edges.push_back({c, c + 5});
  lat.omegas.assign(10, 0.0);
  const auto color = lat.sublattice();
  for (int q = 0; q < 10; ++q) lat.omegas[q] = 0.2 * color[q];
  return lat;
}

/// Apply the gate-simulation convention: ω_i = detuning · colour(i), β = tanθ/2.
inline LatticeModel with_gate_frame(LatticeModel lat, double detuning = kReferenceDeltaEz) {
  const auto color = lat.sublattice();
  for (int q = 0; q < lat.n_qubits; ++q) lat.omegas[q] = detuning * color[q];
  lat.beta = 0.5 * std::tan(mixing_angle(lat.J, detuning));
  return lat;
}

inline LatticeModel builtin_lattice(const std::string& name, double J = 0.0) {
  if (name == "chain4") return chain4(J);
  if (name == "honeycomb6") return honeycomb6(J);
  if (name == "grid10") return grid10(J);
  throw ValidationError("unknown lattice '" + name + "' (allowed: chain4, honeycomb6, grid10)");
}

inline nlohmann::json to_json(const LatticeModel& lat) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : lat.edges) edges.push_back({i, j});
  return {{"name", lat.name},   {"n_qubits", lat.n_qubits}, {"edges", edges},
          {"omegas", lat.omegas}, {"J", lat.J},             {"beta", lat.beta}};
}

inline LatticeModel lattice_from_json(const nlohmann::json& j) {
  LatticeModel lat;
  try {
    lat.n_qubits = j.at("n_qubits").get<int>();
    for (const auto& e : j.at("edges")) lat.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    lat.omegas = j.at("omegas").get<std::vector<double>>();
    lat.J = j.value("J", 0.0);
    lat.beta = j.value("beta", 0.0);
    lat.name = j.value("name", std::string("custom"));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("topology: ") + ex.what());
  }
  lat.validate();
  return lat;
}

inline void require_dense(int n) {
  if (n > kMaxDenseQubits)
    throw ResourceLimitError("dense operators are limited to " + std::to_string(kMaxDenseQubits) +
                             " qubits, got " + std::to_string(n));
}

/// −Σ (ω_i/2) Z_i + Σ_edges (J/4)(XX + YY + ZZ).
inline Operator lattice_hamiltonian(const LatticeModel& lat) {
  require_dense(lat.n_qubits);
  lat.validate();
  const int n = lat.n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Operator h = Operator::Zero(dim, dim);
  // Z terms and ZZ are diagonal; flip-flops swap antiparallel neighbours.
  for (Eigen::Index b = 0; b < dim; ++b) {
    double d = 0.0;
    for (int q = 0; q < n; ++q) d -= 0.5 * lat.omegas[q] * (((b >> (n - 1 - q)) & 1) ? -1.0 : 1.0);
    for (auto [i, j] : lat.edges) {
      const bool bi = (b >> (n - 1 - i)) & 1;
      const bool bj = (b >> (n - 1 - j)) & 1;
      d += 0.25 * lat.J * (bi == bj ? 1.0 : -1.0);
      if (bi != bj) {
        const Eigen::Index flipped = b ^ (Eigen::Index{1} << (n - 1 - i)) ^ (Eigen::Index{1} << (n - 1 - j));
        h(flipped, b) += 0.5 * lat.J;  // (XX + YY)/4 = (σ+σ- + σ-σ+)/2
      }
    }
    h(b, b) += d;
  }
  return h;
}

/// Σ_{k in driven} (1/2) X_k.
inline Operator drive_operator(int n, const std::vector<int>& driven) {
  require_dense(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Operator v = Operator::Zero(dim, dim);
  for (int k : driven) v += 0.5 * embed(pauli::X(), k, n);
  return v;
}

// ---------------------------------------------------------------------------
// Block diagonalization

/// Assignment of computational basis states to blocks.
struct Partition {
  std::vector<int> block_of;
  int blocks = 0;

  /// Every basis state its own block (dressed computational basis).
  static Partition finest(Eigen::Index dim) {
    Partition p;
    p.block_of.resize(dim);
    std::iota(p.block_of.begin(), p.block_of.end(), 0);
    p.blocks = static_cast<int>(dim);
    return p;
  }

  /// Blocks labelled by the configuration of the spectator qubits.
  static Partition spectator_configurations(int n, const std::vector<int>& spectators) {
    Partition p;
    const Eigen::Index dim = Eigen::Index{1} << n;
    p.block_of.resize(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      int label = 0;
      for (int s : spectators) label = 2 * label + static_cast<int>((b >> (n - 1 - s)) & 1);
      p.block_of[b] = label;
    }
    p.blocks = 1 << spectators.size();
    return p;
  }
};

struct BlockDiagonalization {
  Operator transform;       // T, unitary
  Operator hamiltonian;     // T† H T
  double leakage = 0.0;     // Frobenius norm of inter-block part of T† H T
  double spectrum_error = 0.0;
};

inline double inter_block_norm(const Operator& m, const Partition& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (p.block_of[i] != p.block_of[j]) s += std::norm(m(i, j));
  return std::sqrt(s);
}

/// Least-action unitary T = S S_BD† (S_BD S_BD†)^{-1/2} bringing H to block form.
/// Each eigenvector is assigned to the block holding the majority of its weight.
inline BlockDiagonalization block_diagonalize(const Operator& h, const Partition& part) {
  if (!is_hermitian(h)) throw ValidationError("block_diagonalize needs a Hermitian operator");
  const Eigen::Index dim = h.rows();
  if (static_cast<Eigen::Index>(part.block_of.size()) != dim)
    throw ValidationError("partition size does not match operator dimension");

  BlockDiagonalization out;
  if (inter_block_norm(h, part) <= 1e-14 * std::max(1.0, h.norm())) {
    out.transform = Operator::Identity(dim, dim);
    out.hamiltonian = h;
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  const Operator& s = es.eigenvectors();
  std::vector<int> assigned(dim);
  std::vector<int> count(part.blocks, 0), capacity(part.blocks, 0);
  for (Eigen::Index b = 0; b < dim; ++b) ++capacity[part.block_of[b]];
  for (Eigen::Index c = 0; c < dim; ++c) {
    std::vector<double> w(part.blocks, 0.0);
    for (Eigen::Index r = 0; r < dim; ++r) w[part.block_of[r]] += std::norm(s(r, c));
    const auto best = std::max_element(w.begin(), w.end());
    if (*best <= 0.5 + 1e-6)
      throw DegeneracyError("eigenvector " + std::to_string(c) +
                            " has no majority block; least-action transform is not unique");
    assigned[c] = static_cast<int>(best - w.begin());
    ++count[assigned[c]];
  }
  for (int k = 0; k < part.blocks; ++k)
    if (count[k] != capacity[k])
      throw DegeneracyError("eigenvector assignment does not fill block " + std::to_string(k));

  Operator sbd = Operator::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      if (part.block_of[r] == assigned[c]) sbd(r, c) = s(r, c);
  const Operator gram = sbd * sbd.adjoint();
  out.transform = s * sbd.adjoint() * inverse_sqrt_hermitian(gram, 1e-8);
  out.hamiltonian = out.transform.adjoint() * h * out.transform;
  out.leakage = inter_block_norm(out.hamiltonian, part);

  Eigen::SelfAdjointEigenSolver<Operator> check(
      Operator(0.5 * (out.hamiltonian + out.hamiltonian.adjoint())), Eigen::EigenvaluesOnly);
  out.spectrum_error = (check.eigenvalues() - es.eigenvalues()).cwiseAbs().maxCoeff();
  return out;
}

// ---------------------------------------------------------------------------
// Crosstalk extraction

struct CrosstalkReport {
  std::vector<int> driven;
  std::map<int, double> alpha;                     // per driven qubit
  std::map<std::pair<int, int>, double> c2;        // (j, k): flip on j conditioned on Z_k, / Ω
  std::map<std::array<int, 3>, double> c3;         // (i, j, k): flip on i, Z_j Z_k, / Ω
  std::map<std::pair<int, int>, double> zz;        // effective ZZ per edge (rad/ns)
  double leakage = 0.0;
  double spectrum_error = 0.0;

  double mean_c2() const { return mean_abs(c2); }
  double mean_c3() const { return mean_abs(c3); }

 private:
  template <class M>
  static double mean_abs(const M& m) {
    if (m.empty()) return 0.0;
    double s = 0.0;
    for (const auto& [k, v] : m) s += std::abs(v);
    return s / static_cast<double>(m.size());
  }
};

namespace detail {

inline std::string single_flip_string(int n, int flip, char axis, const std::vector<int>& zs) {
  std::string s(n, 'I');
  s[flip] = axis;
  for (int z : zs) s[z] = 'Z';
  return s;
}

inline bool connected(const LatticeModel& lat, std::array<int, 3> q) {
  int links = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) links += lat.coupled(q[a], q[b]) ? 1 : 0;
  return links >= 2;
}

}  // namespace detail

/// Crosstalk of a static drive Σ_k Ω/2 X_k on `driven` qubits, expressed in the
/// dressed computational frame of the lattice H_0. Coefficients are per unit Ω and
/// normalised by the mean drive efficiency α.
inline CrosstalkReport crosstalk_report(const LatticeModel& lat, const std::vector<int>& driven) {
  if (driven.empty()) throw DomainError("crosstalk report needs at least one driven qubit");
  const int n = lat.n_qubits;
  const Operator h0 = lattice_hamiltonian(lat);
  const auto bd = block_diagonalize(h0, Partition::finest(h0.rows()));
  const Operator v = bd.transform.adjoint() * drive_operator(n, driven) * bd.transform;

  CrosstalkReport rep;
  rep.driven = driven;
  rep.leakage = bd.leakage;
  rep.spectrum_error = bd.spectrum_error;

  const auto coef = [&](const std::string& label) {
    const Operator p = pauli_string(label);
    return pauli_coefficient(v, p);
  };
  const auto flip_strength = [&](int flip, const std::vector<int>& zs) {
    return std::hypot(coef(detail::single_flip_string(n, flip, 'X', zs)),
                      coef(detail::single_flip_string(n, flip, 'Y', zs)));
  };

  double alpha_sum = 0.0;
  for (int k : driven) {
    rep.alpha[k] = 2.0 * coef(detail::single_flip_string(n, k, 'X', {}));
    alpha_sum += rep.alpha[k];
  }
  const double alpha_mean = alpha_sum / static_cast<double>(driven.size());
  if (std::abs(alpha_mean) < 1e-12) throw DegeneracyError("drive has no effective X component");

  for (int k : driven)
    for (int j : lat.neighbors(k)) rep.c2[{j, k}] = flip_strength(j, {k}) / alpha_mean;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (i == j || i == k || !detail::connected(lat, {i, j, k})) continue;
        rep.c3[{i, j, k}] = flip_strength(i, {j, k}) / alpha_mean;
      }

  const Operator h_eff = bd.hamiltonian;
  for (auto [i, j] : lat.edges) {
    std::string s(n, 'I');
    s[i] = s[j] = 'Z';
    rep.zz[{i, j}] = pauli_coefficient(h_eff, pauli_string(s));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rotating-frame lattice drive model for gate simulations

/// Per-qubit drive amplitudes at one instant.
using DriveSample = std::vector<double>;

/// H(t) = Σ Ω_i/2 X_i + (J/4) Σ Z_iZ_j
///      + Σ_{edges, both directions} β Ω_j (cos Δ_ij t X_i + sin Δ_ij t Y_i) Z_j
///      [+ c3 Ω_k (cos Δ_ik t X_i + sin Δ_ik t Y_i) Z_j Z_k, i~k, j~i, j≠k],
/// Δ_ij = ω_j − ω_i.
class LatticeDriveModel {
 public:
  struct Crosstalk {
    int source;  // driven qubit whose Ω scales the term
    double phase_rate;
    double scale;
    Operator x, y;
  };

  LatticeDriveModel(LatticeModel lat, bool crosstalk = true, double c3 = 0.0)
      : lattice_(std::move(lat)) {
    lattice_.validate();
    const int n = lattice_.n_qubits;
    require_dense(n);
    const Eigen::Index dim = Eigen::Index{1} << n;
    static_zz_ = Operator::Zero(dim, dim);
    for (auto [i, j] : lattice_.edges) {
      std::string s(n, 'I');
      s[i] = s[j] = 'Z';
      static_zz_ += (0.25 * lattice_.J) * pauli_string(s);
    }
    for (int q = 0; q < n; ++q) x_.push_back(0.5 * embed(pauli::X(), q, n));
    if (crosstalk) {
      for (auto [a, b] : lattice_.edges)
        for (auto [i, j] : {Edge{a, b}, Edge{b, a}})
          terms_.push_back({j, lattice_.omegas[j] - lattice_.omegas[i], lattice_.beta,
                            pauli_string(detail::single_flip_string(n, i, 'X', {j})),
                            pauli_string(detail::single_flip_string(n, i, 'Y', {j}))});
    }
    if (c3 != 0.0) {
      for (int k = 0; k < n; ++k)
        for (int i : lattice_.neighbors(k))
          for (int j : lattice_.neighbors(i)) {
            if (j == k) continue;
            terms_.push_back({k, lattice_.omegas[k] - lattice_.omegas[i], c3,
                              pauli_string(detail::single_flip_string(n, i, 'X', {j, k})),
                              pauli_string(detail::single_flip_string(n, i, 'Y', {j, k}))});
          }
    }
  }

  const LatticeModel& lattice() const { return lattice_; }
  const std::vector<Crosstalk>& crosstalk_terms() const { return terms_; }

  Operator hamiltonian(const DriveSample& omega, double t) const {
    if (static_cast<int>(omega.size()) != lattice_.n_qubits)
      throw ValidationError("drive sample size does not match the lattice");
    Operator h = static_zz_;
    for (int q = 0; q < lattice_.n_qubits; ++q)
      if (omega[q] != 0.0) h += omega[q] * x_[q];
    for (const auto& c : terms_) {
      const double w = omega[c.source];
      if (w == 0.0 || c.scale == 0.0) continue;
      const double d = c.phase_rate * t;
      h += (c.scale * w * std::cos(d)) * c.x + (c.scale * w * std::sin(d)) * c.y;
    }
    return h;
  }

 private:
  LatticeModel lattice_;
  Operator static_zz_;
  std::vector<Operator> x_;
  std::vector<Crosstalk> terms_;
};

}  // namespace spinctrl
