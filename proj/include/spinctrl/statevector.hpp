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

// Statevector evolution under the rotating-frame lattice Hamiltonian without dense
// operators. H splits into the diagonal ZZ part and one term per qubit,
//
//   K_i = h_x X_i + h_y Y_i,   h_{x,y} depending on Z of neighbouring qubits only,
//
// and each step is the symmetric product e^{-iDτ/2} Π e^{-iK τ/2} Π^rev e^{-iK τ/2} e^{-iDτ/2}.
// Qubit 0 is the most significant bit, matching kron ordering.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "spinctrl/errors.hpp"
#include "spinctrl/linalg.hpp"
#include "spinctrl/model.hpp"
#include "spinctrl/propagate.hpp"

namespace spinctrl {

class LatticeStateSimulator {
 public:
  /// Crosstalk onto `target`, scaled by Ω_source and the product of Z over `controls`.
  struct Term {
    int target;
    std::vector<int> controls;
    int source;
    double phase_rate;
    double scale;
  };

  LatticeStateSimulator(LatticeModel lat, bool crosstalk = true, double c3 = 0.0) : lat_(std::move(lat)) {
    lat_.validate();
    n_ = lat_.n_qubits;
    require_dense(n_);
    dim_ = std::size_t{1} << n_;
    if (crosstalk) {
      for (auto [a, b] : lat_.edges)
        for (auto [i, j] : {Edge{a, b}, Edge{b, a}})
          terms_.push_back({i, {j}, j, lat_.omegas[j] - lat_.omegas[i], lat_.beta});
    }
    if (c3 != 0.0) {
      for (int k = 0; k < n_; ++k)
        for (int i : lat_.neighbors(k))
          for (int j : lat_.neighbors(i)) {
            if (j == k) continue;
            terms_.push_back({i, {j, k}, k, lat_.omegas[k] - lat_.omegas[i], c3});
          }
    }
    zz_.assign(dim_, 0.0);
    for (std::size_t b = 0; b < dim_; ++b)
      for (auto [i, j] : lat_.edges) zz_[b] += 0.25 * lat_.J * z(b, i) * z(b, j);
    per_qubit_.resize(n_);
    for (int q = 0; q < n_; ++q) {
      auto& pq = per_qubit_[q];
      for (std::size_t t = 0; t < terms_.size(); ++t) {
        if (terms_[t].target != q) continue;
        pq.terms.push_back(t);
        for (int c : terms_[t].controls)
          if (std::find(pq.controls.begin(), pq.controls.end(), c) == pq.controls.end()) pq.controls.push_back(c);
      }
      const std::size_t nc = std::size_t{1} << pq.controls.size();
      pq.config.resize(dim_);
      for (std::size_t b = 0; b < dim_; ++b) {
        std::size_t k = 0;
        for (std::size_t c = 0; c < pq.controls.size(); ++c)
          if (bit(b, pq.controls[c])) k |= std::size_t{1} << c;
        pq.config[b] = static_cast<std::uint16_t>(k);
      }
      // sign of each term's control product per configuration
      pq.sign.assign(pq.terms.size() * nc, 1.0);
      for (std::size_t t = 0; t < pq.terms.size(); ++t)
        for (std::size_t k = 0; k < nc; ++k) {
          double s = 1.0;
          for (int c : terms_[pq.terms[t]].controls) {
            const auto pos = std::find(pq.controls.begin(), pq.controls.end(), c) - pq.controls.begin();
            if ((k >> pos) & 1U) s = -s;
          }
          pq.sign[t * nc + k] = s;
        }
    }
  }

  int n_qubits() const { return n_; }
  const LatticeModel& lattice() const { return lat_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Z eigenvalue of qubit q in basis state b.
  double z(std::size_t b, int q) const { return bit(b, q) ? -1.0 : 1.0; }

  /// |0...0> in the Z basis; "all spins down" is the Z = +1 state here.
  StateVector ground() const {
    StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(dim_));
    psi[0] = 1.0;
    return psi;
  }

  /// One symmetric split step of length dt with drive sample `omega` at time t.
  void step(StateVector& psi, const DriveSample& omega, double t, double dt) const {
    if (static_cast<int>(omega.size()) != n_) throw ValidationError("drive sample size does not match the lattice");
    apply_diagonal(psi, 0.5 * dt);
    for (int q = 0; q < n_; ++q) apply_local(psi, q, omega, t, 0.5 * dt);
    for (int q = n_ - 1; q >= 0; --q) apply_local(psi, q, omega, t, 0.5 * dt);
    apply_diagonal(psi, 0.5 * dt);
  }

  /// Evolve across [t0, t0 + T] with midpoint drive samples.
  void evolve(StateVector& psi, const std::function<DriveSample(double)>& drive, double t0, double T,
              double steps_per_ns) const {
    const auto grid = TimeGrid::with_resolution(T, steps_per_ns);
    const double dt = grid.dt();
    for (int k = 0; k < grid.steps; ++k) {
      const double tm = t0 + grid.midpoint(k);
      step(psi, drive(tm - t0), tm, dt);
    }
  }

 private:
  struct PerQubit {
    std::vector<std::size_t> terms;
    std::vector<int> controls;
    std::vector<std::uint16_t> config;
    std::vector<double> sign;
  };

  bool bit(std::size_t b, int q) const { return (b >> (n_ - 1 - q)) & 1U; }

  void apply_diagonal(StateVector& psi, double tau) const {
    if (lat_.J == 0.0) return;
    for (std::size_t b = 0; b < dim_; ++b) psi[static_cast<Eigen::Index>(b)] *= std::polar(1.0, -zz_[b] * tau);
  }

  void apply_local(StateVector& psi, int q, const DriveSample& omega, double t, double tau) const {
    const auto& pq = per_qubit_[q];
    const std::size_t nc = std::size_t{1} << pq.controls.size();
    // 2x2 propagator per control configuration: exp(-iτ(h_x X + h_y Y))
    std::vector<cplx> u00(nc), u01(nc), u10(nc);
    bool trivial = true;
    for (std::size_t k = 0; k < nc; ++k) {
      double hx = 0.5 * omega[q], hy = 0.0;
      for (std::size_t t2 = 0; t2 < pq.terms.size(); ++t2) {
        const Term& term = terms_[pq.terms[t2]];
        const double w = omega[term.source];
        if (w == 0.0) continue;
        const double s = pq.sign[t2 * nc + k] * term.scale * w;
        hx += s * std::cos(term.phase_rate * t);
        hy += s * std::sin(term.phase_rate * t);
      }
      const double h = std::hypot(hx, hy);
      if (h != 0.0) trivial = false;
      const double c = std::cos(h * tau), sn = h == 0.0 ? 0.0 : std::sin(h * tau) / h;
      u00[k] = c;
      u01[k] = -kI * sn * cplx(hx, -hy);
      u10[k] = -kI * sn * cplx(hx, hy);
    }
    if (trivial) return;
    const std::size_t mask = std::size_t{1} << (n_ - 1 - q);
    for (std::size_t b = 0; b < dim_; ++b) {
      if (b & mask) continue;
      const std::size_t k = pq.config[b];
      const auto i0 = static_cast<Eigen::Index>(b), i1 = static_cast<Eigen::Index>(b | mask);
      const cplx a0 = psi[i0], a1 = psi[i1];
      psi[i0] = u00[k] * a0 + u01[k] * a1;
      psi[i1] = u10[k] * a0 + u00[k] * a1;
    }
  }

  LatticeModel lat_;
  int n_ = 0;
  std::size_t dim_ = 0;
  std::vector<Term> terms_;
  std::vector<double> zz_;
  std::vector<PerQubit> per_qubit_;
};

/// Von Neumann entropy (nats) of the reduced state on `subsystem`.
inline double entanglement_entropy(const StateVector& psi, int n_qubits, const std::vector<int>& subsystem) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (static_cast<std::size_t>(psi.size()) != dim) throw ValidationError("state size does not match qubit count");
  std::vector<bool> in_a(n_qubits, false);
  for (int q : subsystem) {
    if (q < 0 || q >= n_qubits) throw DomainError("subsystem qubit out of range");
    in_a[q] = true;
  }
  std::vector<int> a, b;
  for (int q = 0; q < n_qubits; ++q) (in_a[q] ? a : b).push_back(q);
  if (a.empty() || b.empty()) return 0.0;
  const Eigen::Index da = Eigen::Index{1} << a.size(), db = Eigen::Index{1} << b.size();
  Operator m = Operator::Zero(da, db);
  for (std::size_t s = 0; s < dim; ++s) {
    Eigen::Index ia = 0, ib = 0;
    for (int q : a) ia = (ia << 1) | static_cast<Eigen::Index>((s >> (n_qubits - 1 - q)) & 1U);
    for (int q : b) ib = (ib << 1) | static_cast<Eigen::Index>((s >> (n_qubits - 1 - q)) & 1U);
    m(ia, ib) = psi[static_cast<Eigen::Index>(s)];
  }
  const Operator rho = da <= db ? Operator(m * m.adjoint()) : Operator(m.adjoint() * m);
  const Eigen::SelfAdjointEigenSolver<Operator> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p > 1e-300) s -= p * std::log(p);
  }
  return std::max(0.0, s);
}

}  // namespace spinctrl
