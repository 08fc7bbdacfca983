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

// Error-curve geometry. A noise term v(t)·N seen through the ideal evolution U0
// integrates to R(t) = ∫ v U0† N U0 dτ = r(t)·σ; the curve r(t) closing at the
// gate time means the gate is insensitive to that noise at first order.
//
// Norms: with normalised Pauli strings σ_ν, ‖R‖_F / sqrt(2^d) equals the
// Euclidean norm of r, so the per-channel ‖r‖ is the Frobenius form up to the
// 2^{-d/2} factor.

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "spinctrl/errors.hpp"
#include "spinctrl/linalg.hpp"
#include "spinctrl/model.hpp"
#include "spinctrl/propagate.hpp"
#include "spinctrl/pulse.hpp"

namespace spinctrl {

struct ErrorCurve {
  std::string channel;
  double epsilon = 1.0;
  std::vector<std::string> basis;      // Pauli labels of the coefficient vector
  std::vector<Eigen::VectorXd> path;   // r(t_k), k = 0..steps

  const Eigen::VectorXd& final() const { return path.back(); }
  double final_norm() const { return path.back().norm(); }
};

/// Non-identity Pauli labels for the dimension of `op`.
inline std::vector<std::string> error_basis(Eigen::Index dim) {
  auto labels = pauli_labels(qubit_count(dim));
  labels.erase(labels.begin());
  return labels;
}

inline Eigen::VectorXd pauli_vector(const Operator& m, const std::vector<Operator>& basis) {
  Eigen::VectorXd r(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) r[i] = pauli_coefficient(m, basis[i]);
  return r;
}

/// r(t)·σ = ∫_0^t v(τ) U0(τ)† N U0(τ) dτ, trapezoidal on the trajectory grid.
inline ErrorCurve error_curve(const Trajectory& traj, const std::function<double(double)>& v,
                              const Operator& noise, std::string channel = "custom",
                              double epsilon = 1.0) {
  if (traj.unitaries.empty()) throw DomainError("error_curve needs a non-empty trajectory");
  if (noise.rows() != traj.final().rows())
    throw ValidationError("noise operator dimension does not match the trajectory");
  ErrorCurve c;
  c.channel = std::move(channel);
  c.epsilon = epsilon;
  c.basis = error_basis(noise.rows());
  std::vector<Operator> ops;
  ops.reserve(c.basis.size());
  for (const auto& l : c.basis) ops.push_back(pauli_string(l));

  const TimeGrid& g = traj.grid;
  const auto integrand = [&](int k) -> Eigen::VectorXd {
    const Operator& u = traj.unitaries[k];
    return v(std::clamp(g.node(k), g.t0, g.t0 + g.T)) * pauli_vector(u.adjoint() * noise * u, ops);
  };
  c.path.reserve(traj.unitaries.size());
  c.path.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ops.size())));
  Eigen::VectorXd prev = integrand(0);
  for (int k = 0; k < g.steps; ++k) {
    Eigen::VectorXd next = integrand(k + 1);
    c.path.push_back(c.path.back() + 0.5 * g.dt() * (prev + next));
    prev = std::move(next);
  }
  return c;
}

/// D = Σ_μ ‖r_μ(T)‖, prefactors excluded.
inline double error_distance(const std::vector<ErrorCurve>& curves) {
  if (curves.empty()) throw DomainError("error_distance of an empty channel list");
  double d = 0.0;
  for (const auto& c : curves) d += c.final_norm();
  return d;
}

/// Σ_μ ε_μ ‖r_μ(T)‖.
inline double weighted_error_distance(const std::vector<ErrorCurve>& curves) {
  if (curves.empty()) throw DomainError("error_distance of an empty channel list");
  double d = 0.0;
  for (const auto& c : curves) d += std::abs(c.epsilon) * c.final_norm();
  return d;
}

/// I − i Σ_μ ε_μ r_μ(T)·σ.
inline Operator first_order_error_unitary(const std::vector<ErrorCurve>& curves) {
  if (curves.empty()) throw DomainError("first_order_error_unitary of an empty channel list");
  const auto d = static_cast<Eigen::Index>(
      std::lround(std::sqrt(static_cast<double>(curves[0].basis.size() + 1))));
  Operator r = Operator::Zero(d, d);
  for (const auto& c : curves) {
    if (static_cast<Eigen::Index>(c.basis.size()) != d * d - 1)
      throw ValidationError("error curves do not share a dimension");
    for (std::size_t i = 0; i < c.basis.size(); ++i)
      if (c.final()[i] != 0.0) r += (c.epsilon * c.final()[i]) * pauli_string(c.basis[i]);
  }
  return Operator::Identity(d, d) - kI * r;
}

/// Ideal evolution under H0 = Ω(t)/2 · X.
template <Waveform W>
Trajectory drive_trajectory(const W& pulse, double per_ns = kStepsPerNs) {
  static const Operator X = pauli::X();
  const auto grid = TimeGrid::with_resolution(pulse.duration(), per_ns);
  return evolve([&](double t) { return Operator(0.5 * pulse(t) * X); }, grid);
}

/// Curves of the three effective channels (ZZ, XZ, YZ) of the pair model.
template <Waveform W>
std::vector<ErrorCurve> channel_curves(const Trajectory& traj, const TwoQubitModel& m, const W& pulse) {
  std::vector<ErrorCurve> out;
  for (auto& ch : effective_noise_channels(m, pulse))
    out.push_back(error_curve(traj, ch.v, ch.op, ch.label, ch.epsilon));
  return out;
}

template <Waveform W>
std::vector<ErrorCurve> channel_curves(const TwoQubitModel& m, const W& pulse,
                                       double per_ns = kStepsPerNs) {
  return channel_curves(drive_trajectory(pulse, per_ns), m, pulse);
}

struct AmplitudeSweepPoint {
  double scale = 1.0;
  double peak = 0.0;  // max |Ω| of the stretched pulse (rad/ns)
  double distance = 0.0;
};

/// D of the area-preserving stretch Ω(t) → Ω(t/a)/a for each scale a.
template <Waveform W>
std::vector<AmplitudeSweepPoint> amplitude_sweep_distance(const W& pulse, const TwoQubitModel& m,
                                                          const std::vector<double>& scales,
                                                          double per_ns = kStepsPerNs) {
  const double peak0 = peak_amplitude(pulse);
  std::vector<AmplitudeSweepPoint> out;
  for (double a : scales) {
    if (!(a > 0.0)) throw DomainError("amplitude sweep scales must be positive");
    const auto s = stretch(pulse, a);
    out.push_back({a, peak0 / a, error_distance(channel_curves(m, s, per_ns))});
  }
  return out;
}

}  // namespace spinctrl
