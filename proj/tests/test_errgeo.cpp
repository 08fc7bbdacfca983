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

#include "spinctrl/errgeo.hpp"

using namespace spinctrl;

namespace {

PulseParams xpi50() {
  return {50.0, {0.6191, 0.3799, 0.0626, -0.1812, -0.0006, -0.0001},
          {-0.0027, -0.0669, -0.0056, 0.0041, 0.0111}};
}

struct Flat {
  double T, w;
  double duration() const { return T; }
  double operator()(double) const { return w; }
};

// Composite Simpson on a fine grid, independent of the propagation grid.
template <class F>
double simpson(F f, double a, double b, int n = 200000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace

TEST(ErrorCurve, StaticZWithoutDrive) {
  const auto traj = evolve([](double) { return Operator(Operator::Zero(2, 2)); }, TimeGrid(12.0, 48));
  const auto c = error_curve(traj, [](double) { return 1.0; }, pauli::Z(), "ZZ");
  ASSERT_EQ(c.basis, (std::vector<std::string>{"X", "Y", "Z"}));
  EXPECT_LT((c.final() - Eigen::Vector3d(0, 0, 12.0)).norm(), 1e-12);
  EXPECT_EQ(c.path.front().norm(), 0.0);
  EXPECT_NEAR(error_distance({c}), 12.0, 1e-12);
  EXPECT_THROW(error_distance({}), DomainError);
}

TEST(ErrorCurve, FullTurnCloses) {
  const double T = 20.0;
  const Flat drive{T, 2.0 * kPi / T};
  const auto traj = drive_trajectory(drive);
  const auto c = error_curve(traj, [](double) { return 1.0; }, pauli::Z());
  EXPECT_LT(c.final_norm(), 1e-4);
}

TEST(ErrorCurve, SpeedEqualsProfile) {
  const auto p = xpi50();
  const TwoQubitModel m{0.0, 0.2, 0.02};
  const auto traj = drive_trajectory(p);
  const auto curves = channel_curves(traj, m, p);
  const auto ch = effective_noise_channels(m, p);
  const double dt = traj.grid.dt();
  for (std::size_t mu = 0; mu < 3; ++mu)
    for (int k = 0; k < traj.grid.steps; k += 97) {
      const double speed = (curves[mu].path[k + 1] - curves[mu].path[k]).norm() / dt;
      EXPECT_NEAR(speed, std::abs(ch[mu].v(traj.grid.midpoint(k))), 2e-3 * std::max(1.0, speed));
      EXPECT_LE(speed, 1.0 * std::max(std::abs(ch[mu].v(traj.grid.node(k))), std::abs(ch[mu].v(traj.grid.node(k + 1)))) + 1e-12);
    }
}

TEST(ErrorCurve, LibraryPulseCurvesNearlyClose) {
  const auto p = xpi50();
  const auto curves = channel_curves(TwoQubitModel{0.0, 0.2, 0.02}, p);
  ASSERT_EQ(curves.size(), 3u);
  for (const auto& c : curves) EXPECT_LT(c.final_norm(), 1e-2 * p.T) << c.channel;
}

TEST(ErrorCurve, CosinePulseMatchesQuadrature) {
  // X drive: U0†ZU0 = cos φ Z + sin φ Y with φ(t) the accumulated area
  const double T = 50.0, area = 5.0 * kPi;
  const auto c = CosinePulse::with_area(T, area);
  const double A = c.peak;
  const auto phi = [&](double t) { return 0.5 * A * (t - T / (2 * kPi) * std::sin(2 * kPi * t / T)); };
  const double w = std::hypot(0.02, 0.2);
  const double ry = simpson([&](double t) { return std::sin(phi(t)); }, 0.0, T);
  const double rz = simpson([&](double t) { return std::cos(phi(t)); }, 0.0, T);
  const double xy = simpson([&](double t) { return c(t) * std::cos(w * t) * std::sin(phi(t)); }, 0.0, T);
  const double xz = simpson([&](double t) { return c(t) * std::cos(w * t) * std::cos(phi(t)); }, 0.0, T);

  const auto curves = channel_curves(TwoQubitModel{0.0, 0.2, 0.02}, c);
  EXPECT_NEAR(curves[0].final()[1], ry, 2e-5);
  EXPECT_NEAR(curves[0].final()[2], rz, 2e-5);
  EXPECT_NEAR(curves[1].final()[1], xy, 2e-5);
  EXPECT_NEAR(curves[1].final()[2], xz, 2e-5);
  EXPECT_GT(error_distance(curves), 0.0);
}

TEST(ErrorDistance, LibraryPulseFarBelowTrivial) {
  const auto p = xpi50();
  const TwoQubitModel m{0.0, 0.2, 0.02};
  const double d_rcp = error_distance(channel_curves(m, p));
  const double d_cos = error_distance(channel_curves(m, trivial_counterpart(p)));
  EXPECT_LT(d_rcp, 0.05 * d_cos);
}

TEST(AmplitudeSweep, UnitScaleIsNominal) {
  const auto p = xpi50();
  const TwoQubitModel m{0.0, 0.2, 0.02};
  const auto sweep = amplitude_sweep_distance(p, m, {1.0});
  EXPECT_NEAR(sweep[0].distance, error_distance(channel_curves(m, p)), 1e-12);
  EXPECT_NEAR(sweep[0].peak, peak_amplitude(p), 1e-12);
  EXPECT_THROW(amplitude_sweep_distance(p, m, {0.0}), DomainError);
}

TEST(AmplitudeSweep, StaticChannelScalesWithStretch) {
  const PulseParams zero{20.0, {0.0}, {}};
  const auto sweep = amplitude_sweep_distance(zero, TwoQubitModel{0.0, 0.2, 0.02}, {0.5, 1.0, 3.0});
  for (const auto& pt : sweep) EXPECT_NEAR(pt.distance, 20.0 * pt.scale, 1e-9);
}

TEST(FirstOrder, ZeroCurvesGiveIdentity) {
  const auto traj = evolve([](double) { return Operator(Operator::Zero(2, 2)); }, TimeGrid(1.0, 4));
  const auto c = error_curve(traj, [](double) { return 0.0; }, pauli::Z());
  EXPECT_EQ((first_order_error_unitary({c}) - Operator::Identity(2, 2)).norm(), 0.0);
}

TEST(FirstOrder, MatchesExponentialToSecondOrder) {
  const auto traj = drive_trajectory(xpi50());
  auto c = error_curve(traj, [](double) { return 1.0; }, pauli::Z());
  Operator rs = Operator::Zero(2, 2);
  for (std::size_t i = 0; i < c.basis.size(); ++i) rs += c.final()[i] * pauli_string(c.basis[i]);
  double prev = 0.0;
  for (double eps : {1e-3, 5e-4, 2.5e-4}) {
    c.epsilon = eps;
    const double res = (first_order_error_unitary({c}) - propagator(rs, eps)).norm();
    if (prev > 0.0) EXPECT_NEAR(prev / res, 4.0, 0.05);
    prev = res;
  }
}

TEST(FirstOrder, ExactErrorUnitaryResidualIsQuadratic) {
  // full pair model against its own first-order expansion
  const auto p = calibrate_area(xpi50(), kPi);
  const auto grid = TimeGrid::with_resolution(p.T);
  const Operator IX = pauli_string("IX");
  const auto traj = evolve([&](double t) { return Operator(0.5 * eval_pulse(p, t) * IX); }, grid);
  double prev = 0.0;
  for (double J : {0.02, 0.01, 0.005}) {
    const TwoQubitModel m{0.0, 0.2, J};
    const Operator u = evolve_final([&](double t) { return rotating_frame_hamiltonian(m, eval_pulse(p, t), t); }, grid);
    std::vector<ErrorCurve> curves;
    for (const auto& ch : effective_noise_channels(m, p))
      curves.push_back(error_curve(traj, ch.v, ch.pair_op, ch.label, ch.epsilon));
    const double res = (traj.final().adjoint() * u - first_order_error_unitary(curves)).norm();
    if (prev > 0.0) {
      EXPECT_GT(prev / res, 2.0);
      EXPECT_LT(prev / res, 6.0);
    }
    prev = res;
  }
}
