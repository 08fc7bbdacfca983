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

#include <cmath>
#include <cstdlib>

#include "spinctrl/experiments.hpp"

using namespace spinctrl;

namespace {

PulseParams lib_params(GateLabel g, double T) { return find_entry(builtin_library(), g, T).params; }

/// Haar-random 2x2 unitary: QR of a complex Gaussian matrix with the R phases removed.
Operator haar_unitary(SplitMix& rng) {
  const auto gauss = [&] {
    const double u1 = 1.0 - rng.uniform(), u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * kPi * u2);
  };
  Eigen::Matrix2cd m;
  for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = cplx(gauss(), gauss());
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(m);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 2; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

}  // namespace

TEST(Results, CsvIsRoundTripAndLocaleFree) {
  ExperimentResult r;
  r.label = "t";
  r.x = {"x", "1", {0.1, 1e-300}};
  r.y = {{"y", "1", {1.0 / 3.0, -2.5}}};
  const auto csv = to_csv(r);
  EXPECT_EQ(csv, "x,y\n0.1,0.3333333333333333\n1e-300,-2.5\n");
  r.y[0].values.pop_back();
  EXPECT_THROW(to_csv(r), ValidationError);
}

TEST(Results, CreatedComesFromSourceDateEpoch) {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  EXPECT_EQ(creation_stamp(), "2023-11-14T22:13:20Z");
  setenv("SOURCE_DATE_EPOCH", "951782400", 1);
  EXPECT_EQ(creation_stamp(), "2000-02-29T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(creation_stamp(), "1970-01-01T00:00:00Z");
}

TEST(Results, LogLogSlopeOfPowerLaw) {
  const auto x = logspace(1e-3, 1e-1, 11);
  std::vector<double> y;
  for (double v : x) y.push_back(7.0 * std::pow(v, 3.0));
  EXPECT_NEAR(loglog_slope(x, y, 1e-3, 1e-2), 3.0, 1e-9);
  EXPECT_NEAR(x.front(), 1e-3, 1e-15);
  EXPECT_NEAR(x.back(), 1e-1, 1e-15);
}

TEST(CouplingSweep, ZeroCouplingIsNoiseless) {
  for (const auto& e : builtin_library()) {
    const auto r = fidelity_vs_coupling(e.params, 0.2, {0.0}, rotation_angle(e.gate));
    EXPECT_LT(r.y[0].values[0], 1e-4) << to_string(e.gate) << " T=" << e.params.T;
  }
}

TEST(CouplingSweep, RobustBeatsTrivial) {
  const auto p = calibrate_area(lib_params(GateLabel::kXpi, 50.0), kPi);
  const std::vector<double> x{1e-2};
  const double robust = fidelity_vs_coupling(p, 0.2, x, kPi).y[0].values[0];
  const double trivial = fidelity_vs_coupling(trivial_counterpart(p), 0.2, x, kPi).y[0].values[0];
  EXPECT_GT(trivial / robust, 100.0);
}

TEST(CouplingSweep, TrivialPulseIsSecondOrder) {
  const auto p = trivial_counterpart(lib_params(GateLabel::kXpi, 50.0));
  const auto x = logspace(1e-3, 1e-2, 5);
  const auto r = fidelity_vs_coupling(p, 0.2, x, kPi);
  EXPECT_NEAR(loglog_slope(x, r.y[0].values, 1e-3, 1e-2), 2.0, 0.3);
}

TEST(CouplingSweep, RejectsCouplingOutsideRange) {
  EXPECT_THROW(fidelity_vs_coupling(lib_params(GateLabel::kXpi, 50.0), 0.2, {1.0}, kPi), DomainError);
}

TEST(NoiseSweep, ZeroGammaReducesToCouplingSweep) {
  const auto p = lib_params(GateLabel::kXpi, 50.0);
  OneOverFConfig n;
  n.gamma = 0.0;
  const std::vector<double> x{0.0, 5e-3};
  const auto a = fidelity_under_1f(p, 0.2, n, x, kPi, 3);
  const auto b = fidelity_vs_coupling(p, 0.2, x, kPi);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_DOUBLE_EQ(a.y[0].values[i], b.y[0].values[i]);
    EXPECT_EQ(a.y[1].values[i], 0.0);
  }
}

TEST(NoiseSweep, NoiseRaisesInfidelityAndIsThreadIndependent) {
  const auto p = lib_params(GateLabel::kXpi, 50.0);
  OneOverFConfig n;
  n.gamma = 2e6;
  const auto a = fidelity_under_1f(p, 0.2, n, {0.0}, kPi, 8, 1);
  const auto b = fidelity_under_1f(p, 0.2, n, {0.0}, kPi, 8, 3);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_GT(a.y[0].values[0], fidelity_vs_coupling(p, 0.2, {0.0}, kPi).y[0].values[0]);
}

TEST(ParallelGates, IdleLatticeAtZeroCoupling) {
  const auto r = parallel_gate_fidelity(chain4(), Assignment(4), {0.0});
  EXPECT_LT(r.y[0].values[0], 1e-10);
}

TEST(ParallelGates, AdjacentDrivesAreFlagged) {
  Assignment a(4);
  a[1] = library_assignment(GateLabel::kXpi, 50, false);
  a[2] = library_assignment(GateLabel::kXpi, 50, false);
  EXPECT_EQ(adjacent_drives(chain4(), a).size(), 1u);
  const auto r = parallel_gate_fidelity(chain4(), a, {0.0});
  EXPECT_EQ(r.metadata.at("warnings").size(), 1u);
  a[2] = {};
  EXPECT_TRUE(parallel_gate_fidelity(chain4(), a, {0.0}).metadata.at("warnings").empty());
}

TEST(ParallelGates, RobustBeatsTrivialAtModerateCoupling) {
  Assignment robust(4), trivial(4);
  robust[1] = library_assignment(GateLabel::kXpi, 50, false);
  robust[3] = library_assignment(GateLabel::kX2pi, 50, false);
  trivial[1] = library_assignment(GateLabel::kXpi, 50, true);
  trivial[3] = library_assignment(GateLabel::kX2pi, 50, true);
  const std::vector<double> x{0.01};
  EXPECT_GT(parallel_gate_fidelity(chain4(), trivial, x).y[0].values[0] /
                parallel_gate_fidelity(chain4(), robust, x).y[0].values[0],
            10.0);
}

TEST(ParallelGates, ThreeBodyTermsAreNegligible) {
  Assignment a(4);
  a[1] = library_assignment(GateLabel::kXpi, 50, false);
  a[3] = library_assignment(GateLabel::kX2pi, 50, false);
  const std::vector<double> x{0.02};
  LatticeSweepOptions with;
  auto lat = chain4(x[0] * assignment_peak(a));
  with.c3 = 0.01 * with_gate_frame(lat).beta;  // two orders below the pair terms
  const double base = parallel_gate_fidelity(chain4(), a, x).y[0].values[0];
  const double c3 = parallel_gate_fidelity(chain4(), a, x, with).y[0].values[0];
  EXPECT_LT(std::abs(c3 - base) / base, 0.05);
}

TEST(ZZGate, ZeroCouplingIsEchoLimited) {
  const auto r = zz_gate_fidelity(chain4(), {1, 2}, 50.0, false, {0.0});
  EXPECT_LT(r.y[0].values[0], 1e-4);
  EXPECT_NEAR(r.y[1].values[0], 0.0, 1e-6);
}

TEST(ZZGate, ConditionalPhaseIsHalfJT) {
  const auto r = zz_gate_fidelity(chain4(), {1, 2}, 50.0, false, {2e-3});
  EXPECT_NEAR(r.y[1].values[0] / r.y[2].values[0], 1.0, 0.01);
}

TEST(ZZGate, TargetOracle) {
  // ZZ(φ) on qubits 0,1 of two: diag(e^{-iφ/2}, e^{iφ/2}, e^{iφ/2}, e^{-iφ/2})
  const Operator u = zz_target(2, 0, 1, 0.3);
  const Operator expected = (cplx(std::cos(0.15)) * Operator::Identity(4, 4) -
                             kI * std::sin(0.15) * pauli_string("ZZ"));
  EXPECT_LT((u - expected).norm(), 1e-14);
  EXPECT_NEAR(conditional_phase(u, 2, 0, 1), 0.3, 1e-14);
}

TEST(Euler, Identity) {
  const auto e = euler_decompose(Operator::Identity(2, 2));
  EXPECT_NEAR(e.alpha, 0.0, 1e-12);
  EXPECT_NEAR(std::remainder(e.beta + e.lambda, 4 * kPi), 0.0, 1e-12);
}

TEST(Euler, ZRotation) {
  for (double phi : {0.3, -1.2, 2.9}) {
    const auto e = euler_decompose(z_rotation(phi));
    EXPECT_NEAR(e.alpha, 0.0, 1e-12);
    EXPECT_NEAR(phase_insensitive_distance(z_rotation(e.beta + e.lambda), z_rotation(phi)), 0.0, 1e-12);
  }
}

TEST(Euler, HaarRandomTargets) {
  SplitMix rng(2718);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Operator u = haar_unitary(rng);
    worst = std::max(worst, phase_insensitive_distance(euler_compose(euler_decompose(u)), u));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Euler, XRotationsAndGlobalPhase) {
  for (double a : {kPi / 2, kPi, 2 * kPi}) {
    const Operator u = std::polar(1.0, 0.4) * x_rotation(a);
    EXPECT_LT(phase_insensitive_distance(euler_compose(euler_decompose(u)), u), 1e-12);
  }
  EXPECT_THROW(euler_decompose(Operator::Identity(4, 4)), ValidationError);
}

TEST(Circuits, Partitions) {
  EXPECT_EQ(partition_subsystem(PartitionKind::kEvenOdd, 10), (std::vector<int>{0, 2, 4, 6, 8}));
  EXPECT_EQ(partition_subsystem(PartitionKind::kUpperLower, 10), (std::vector<int>{0, 1, 2, 3, 4}));
}

TEST(Circuits, RandomLayersUseAllGatesDeterministically) {
  const auto a = random_layers(50, 10, 9);
  EXPECT_EQ(a, random_layers(50, 10, 9));
  EXPECT_NE(a, random_layers(50, 10, 10));
  int counts[3] = {0, 0, 0};
  for (const auto& l : a)
    for (auto g : l) ++counts[static_cast<int>(g)];
  for (int c : counts) EXPECT_GT(c, 100);
}

TEST(Circuits, NoCouplingNoEntanglement) {
  CircuitSpec s;
  s.depth = 3;
  s.J = 0.0;
  const auto r = entropy_growth(chain4(), s, 2);
  for (const auto& c : r.y)
    for (double v : c.values) EXPECT_NEAR(v, 0.0, 1e-10);
}

TEST(Circuits, EntropyBoundedAndThreadIndependent) {
  CircuitSpec s;
  s.depth = 4;
  s.J = 0.05;
  const auto a = entropy_growth(chain4(), s, 3, 1);
  const auto b = entropy_growth(chain4(), s, 3, 2);
  EXPECT_EQ(to_csv(a), to_csv(b));
  const double cap = 2 * std::log(2.0);
  for (int p : {0, 2})
    for (double v : a.y[p].values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, cap + 1e-12);
    }
  EXPECT_GT(a.y[0].values.back(), 0.0);
  EXPECT_LT(a.metadata.at("max_norm_drift").get<double>(), 1e-8);
}
