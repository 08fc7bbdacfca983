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

// Time-ordered evolution with the piecewise-constant midpoint rule, frame
// changes and the average gate fidelity.

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <string>
#include <vector>

#include "spinctrl/errors.hpp"
#include "spinctrl/linalg.hpp"

namespace spinctrl {

/// Default resolution: 40 steps per ns resolves ~0.2 rad/ns carriers with >300 steps per period.
inline constexpr double kStepsPerNs = 40.0;

struct TimeGrid {
  double T = 0.0;
  int steps = 1;
  double t0 = 0.0;

  TimeGrid() = default;
  TimeGrid(double total, int n, double start = 0.0) : T(total), steps(n), t0(start) { validate(); }

  static TimeGrid with_resolution(double total, double per_ns = kStepsPerNs, double start = 0.0) {
    return TimeGrid(total, std::max(1, static_cast<int>(std::ceil(total * per_ns - 1e-9))), start);
  }

  void validate() const {
    if (steps < 1) throw DomainError("time grid needs at least one step");
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("time grid duration must be finite and >= 0");
  }
  double dt() const { return T / steps; }
  double node(int k) const { return t0 + T * static_cast<double>(k) / steps; }
  double midpoint(int k) const { return t0 + T * (static_cast<double>(k) + 0.5) / steps; }
};

template <class F>
concept HamiltonianSource = requires(const F& f, double t) {
  { f(t) } -> std::convertible_to<Operator>;
};

struct Trajectory {
  TimeGrid grid;
  std::vector<Operator> unitaries;  // U(t_k), k = 0..steps

  const Operator& final() const { return unitaries.back(); }

  /// U at the grid node nearest to t.
  const Operator& at(double t) const {
    const double x = (t - grid.t0) / grid.dt();
    const long k = std::lround(x);
    return unitaries[static_cast<std::size_t>(std::clamp<long>(k, 0, grid.steps))];
  }
};

struct EvolveOptions {
  ExpMethod method = ExpMethod::kEigen;
  bool check_hermitian = true;
};

namespace detail {

template <HamiltonianSource F>
Operator step_propagator(const F& h, const TimeGrid& grid, int k, const EvolveOptions& opt) {
  const Operator hk = h(grid.midpoint(k));
  if (opt.check_hermitian && !is_hermitian(hk))
    throw ValidationError("Hamiltonian sample at t = " + std::to_string(grid.midpoint(k)) +
                          " is not Hermitian (residual " + std::to_string(hermiticity_residual(hk)) + ")");
  return propagator(hk, grid.dt(), opt.method);
}

}  // namespace detail

/// U(t_{k+1}) = exp(−i H(t_k + dt/2) dt) U(t_k), U(t_0) = I.
template <HamiltonianSource F>
Trajectory evolve(const F& h, const TimeGrid& grid, const EvolveOptions& opt = {}) {
  grid.validate();
  Trajectory traj{grid, {}};
  traj.unitaries.reserve(grid.steps + 1);
  const Operator h0 = h(grid.midpoint(0));
  traj.unitaries.push_back(Operator::Identity(h0.rows(), h0.cols()));
  for (int k = 0; k < grid.steps; ++k)
    traj.unitaries.push_back(detail::step_propagator(h, grid, k, opt) * traj.unitaries.back());
  return traj;
}

/// Final propagator only; no trajectory storage.
template <HamiltonianSource F>
Operator evolve_final(const F& h, const TimeGrid& grid, const EvolveOptions& opt = {}) {
  grid.validate();
  Operator u;
  for (int k = 0; k < grid.steps; ++k) {
    const Operator step = detail::step_propagator(h, grid, k, opt);
    u = k == 0 ? step : Operator(step * u);
  }
  return u;
}

/// Average gate fidelity (|Tr(V†U)|² + d) / (d(d+1)).
inline double gate_fidelity(const Operator& u, const Operator& target) {
  if (u.rows() != target.rows() || u.cols() != target.cols() || u.rows() != u.cols())
    throw ValidationError("gate_fidelity: dimension mismatch");
  const double d = static_cast<double>(u.rows());
  const double overlap = std::norm((target.adjoint() * u).trace());
  return std::clamp((overlap + d) / (d * (d + 1.0)), 0.0, 1.0);
}

inline double gate_infidelity(const Operator& u, const Operator& target) {
  const double d = static_cast<double>(u.rows());
  const double overlap = std::norm((target.adjoint() * u).trace());
  // direct form keeps precision when 1 − F ~ 1e-16
  return std::max(0.0, (d * d - overlap) / (d * (d + 1.0)));
}

/// t ↦ U0(t)† V(t) U0(t), U0 taken at the nearest grid node. `traj` must outlive the result.
template <HamiltonianSource F>
auto interaction_picture(F v, const Trajectory& traj) {
  return [v = std::move(v), &traj](double t) -> Operator {
    const Operator& u = traj.at(t);
    return u.adjoint() * Operator(v(t)) * u;
  };
}

/// X rotation exp(−i θ X / 2).
inline Operator x_rotation(double theta) {
  Operator u(2, 2);
  u << std::cos(theta / 2), -kI * std::sin(theta / 2), -kI * std::sin(theta / 2), std::cos(theta / 2);
  return u;
}

inline Operator z_rotation(double theta) {
  Operator u = Operator::Zero(2, 2);
  u(0, 0) = std::exp(-kI * theta / 2.0);
  u(1, 1) = std::exp(kI * theta / 2.0);
  return u;
}

}  // namespace spinctrl
