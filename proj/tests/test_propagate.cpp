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

#include <gtest/gtest.h>

#include <random>

#include "spinctrl/model.hpp"
#include "spinctrl/propagate.hpp"
#include "spinctrl/pulse.hpp"

using namespace spinctrl;

namespace {

Operator x_drive(const PulseParams& p, double t) { return 0.5 * eval_pulse(p, t) * pauli::X(); }

StateVector haar_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = cplx(g(rng), g(rng));
  return v.normalized();
}

}  // namespace

TEST(Evolve, StaticZRotation) {
  const double w = 0.3, T = 7.0;
  const auto traj = evolve([&](double) { return Operator(0.5 * w * pauli::Z()); }, TimeGrid(T, 70));
  Operator expect = Operator::Zero(2, 2);
  expect(0, 0) = std::exp(-kI * w * T / 2.0);
  expect(1, 1) = std::exp(kI * w * T / 2.0);
  EXPECT_LT((traj.final() - expect).norm(), 1e-13);
  EXPECT_EQ(traj.unitaries.size(), 71u);
}

TEST(Evolve, ZeroHamiltonianIsIdentityEverywhere) {
  const auto traj = evolve([](double) { return Operator(Operator::Zero(4, 4)); }, TimeGrid(5.0, 10));
  for (const auto& u : traj.unitaries) EXPECT_EQ((u - Operator::Identity(4, 4)).norm(), 0.0);
}

TEST(Evolve, LibraryPulsesReachTheirGates) {
  for (const auto& e : builtin_library()) {
    const auto grid = TimeGrid::with_resolution(e.params.T);
    const auto traj = evolve([&](double t) { return x_drive(e.params, t); }, grid);
    EXPECT_GE(gate_fidelity(traj.final(), x_rotation(rotation_angle(e.gate))), 0.999);
    for (const auto& u : traj.unitaries) ASSERT_LT(unitarity_residual(u), 1e-10);
    const auto fine = evolve_final([&](double t) { return x_drive(e.params, t); },
                                   TimeGrid(e.params.T, 2 * grid.steps));
    // midpoint rule is second order; at 40 steps/ns halving dt moves U by ~1e-6
    EXPECT_LT((fine - traj.final()).norm(), 5e-6);
  }
}

TEST(Evolve, RichardsonBoundAtFineResolution) {
  const auto e = builtin_library().back();  // 50 ns X2π, largest curvature
  const auto h = [&](double t) { return x_drive(e.params, t); };
  const int n = static_cast<int>(e.params.T * 800);
  const Operator a = evolve_final(h, TimeGrid(e.params.T, n));
  const Operator b = evolve_final(h, TimeGrid(e.params.T, 2 * n));
  EXPECT_LT((a - b).norm(), 1e-8);
}

TEST(Evolve, SecondOrderConvergence) {
  const TwoQubitModel m{0.0, 0.2, 0.05};
  const PulseParams p{10.0, {1.2, 0.4}, {0.3}};
  const auto h = [&](double t) { return rotating_frame_hamiltonian(m, eval_pulse(p, t), t); };
  const Operator ref = evolve_final(h, TimeGrid(10.0, 3200));
  double prev = 0.0;
  for (int n : {50, 100, 200}) {
    const double err = (evolve_final(h, TimeGrid(10.0, n)) - ref).norm();
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 4.0 / 1.5);
      EXPECT_LT(prev / err, 4.0 * 1.5);
    }
    prev = err;
  }
}

TEST(Evolve, CompositionOnSharedGrid) {
  const TwoQubitModel m{0.0, 0.2, 0.04};
  const PulseParams p{20.0, {0.8, -0.2}, {0.1}};
  const auto h = [&](double t) { return rotating_frame_hamiltonian(m, eval_pulse(p, t), t); };
  const Operator full = evolve_final(h, TimeGrid(20.0, 800));
  const Operator first = evolve_final(h, TimeGrid(10.0, 400, 0.0));
  const Operator second = evolve_final(h, TimeGrid(10.0, 400, 10.0));
  EXPECT_LT((second * first - full).norm(), 1e-12);
}

TEST(Evolve, PadeAndEigenAgree) {
  const TwoQubitModel m{0.0, 0.2, 0.04};
  const auto h = [&](double t) { return rotating_frame_hamiltonian(m, 0.4, t); };
  const Operator a = evolve_final(h, TimeGrid(30.0, 600), {ExpMethod::kEigen, true});
  const Operator b = evolve_final(h, TimeGrid(30.0, 600), {ExpMethod::kPade, true});
  EXPECT_LT((a - b).norm(), 1e-11);
}

TEST(Evolve, RejectsNonHermitian) {
  EXPECT_THROW(evolve([](double) { return Operator(kI * pauli::X()); }, TimeGrid(1.0, 2)), ValidationError);
  EXPECT_THROW(TimeGrid(1.0, 0), DomainError);
}

TEST(Fidelity, BasicValues) {
  const Operator X = pauli::X();
  EXPECT_NEAR(gate_fidelity(X, X), 1.0, 1e-15);
  EXPECT_NEAR(gate_fidelity(pauli::I(), X), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(gate_fidelity(X, Operator::Identity(4, 4)), ValidationError);
}

TEST(Fidelity, PhaseInvariantAndSymmetric) {
  const Operator u = x_rotation(0.7) * z_rotation(-1.3);
  const Operator v = x_rotation(0.5);
  const cplx ph = std::exp(kI * 2.1);
  EXPECT_NEAR(gate_fidelity(ph * u, v), gate_fidelity(u, v), 1e-14);
  EXPECT_NEAR(gate_fidelity(u, ph * v), gate_fidelity(u, v), 1e-14);
  EXPECT_NEAR(gate_fidelity(u, v), gate_fidelity(v, u), 1e-14);
  EXPECT_NEAR(gate_infidelity(u, v), 1.0 - gate_fidelity(u, v), 1e-14);
}

TEST(Fidelity, MatchesStateAverageForTwoQubits) {
  // ZZ(π/2) phase gate against identity; Haar average of |<ψ|V†U|ψ>|²
  const Operator zz = propagator(pauli_string("ZZ"), kPi / 4);
  const Operator id = Operator::Identity(4, 4);
  std::mt19937_64 rng(2024);
  double acc = 0.0;
  const int n = 40000;
  for (int k = 0; k < n; ++k) {
    const StateVector psi = haar_state(4, rng);
    acc += std::norm(psi.dot(zz * psi));
  }
  EXPECT_NEAR(acc / n, gate_fidelity(zz, id), 5e-3);
}

TEST(InteractionPicture, IdentityAndCommutingCases) {
  const auto traj = evolve([](double) { return Operator(Operator::Zero(2, 2)); }, TimeGrid(3.0, 30));
  const auto v = interaction_picture([](double t) { return Operator(t * pauli::Y()); }, traj);
  EXPECT_LT((v(1.5) - 1.5 * pauli::Y()).norm(), 1e-15);

  const auto xt = evolve([](double) { return Operator(0.3 * pauli::X()); }, TimeGrid(3.0, 30));
  const auto vx = interaction_picture([](double) { return pauli::X(); }, xt);
  EXPECT_LT((vx(2.0) - pauli::X()).norm(), 1e-14);
}

TEST(InteractionPicture, ZUnderQuarterTurnBecomesY) {
  const double T = 10.0;
  const double omega = (kPi / 2) / T;  // constant speed, area π/2
  const auto traj = evolve([&](double) { return Operator(0.5 * omega * pauli::X()); }, TimeGrid(T, 100));
  const auto v = interaction_picture([](double) { return pauli::Z(); }, traj);
  EXPECT_LT((v(T) - pauli::Y()).norm(), 1e-13);
}
