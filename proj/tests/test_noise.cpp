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

#include "spinctrl/noise.hpp"

using namespace spinctrl;

namespace {

OneOverFConfig base() {
  OneOverFConfig c;
  c.gamma = 1e6;
  c.seed = 7;
  return c;
}

}  // namespace

TEST(OneOverF, ZeroGammaIsSilent) {
  auto c = base();
  c.gamma = 0.0;
  const auto r = draw_realization(c, 3);
  for (double t : {0.0, 17.0, 1e4, 3e6}) EXPECT_EQ(r(t), 0.0);
  EXPECT_EQ(r.phase_integral(5e3), 0.0);
}

TEST(OneOverF, SingleComponentAmplitude) {
  auto c = base();
  c.n_components = 1;
  const auto r = draw_realization(c, 11);
  ASSERT_EQ(r.f_hz.size(), 1u);
  EXPECT_GE(r.f_hz[0], 1e3);
  EXPECT_LE(r.f_hz[0], 1e5);
  EXPECT_DOUBLE_EQ(r.amp_hz[0], c.gamma / std::sqrt(r.f_hz[0]));
  // the sine peaks at its amplitude a quarter period after phase zero
  const double t_peak_ns = 1e9 * (0.25 - r.phase[0] / (2 * kPi)) / r.f_hz[0];
  const double period_ns = 1e9 / r.f_hz[0];
  const double t = t_peak_ns < 0 ? t_peak_ns + period_ns : t_peak_ns;
  EXPECT_NEAR(r.hz(t), r.amp_hz[0], 1e-6 * r.amp_hz[0]);
}

TEST(OneOverF, PhaseIntegralMatchesQuadrature) {
  const auto r = draw_realization(base(), 5);
  const double tau = 3000.0;
  const int n = 20000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += r((i + 0.5) * tau / n) * tau / n;
  EXPECT_NEAR(r.phase_integral(tau), s, 1e-6 * std::max(1.0, std::abs(s)));
}

TEST(OneOverF, DeterministicPerSeed) {
  const auto grid = TimeGrid::with_resolution(100.0, 1.0);
  auto c = base();
  const auto a = sample_trajectory(c, grid);
  const auto b = sample_trajectory(c, grid);
  EXPECT_EQ(a, b);
  c.seed = 8;
  EXPECT_NE(a, sample_trajectory(c, grid));
}

TEST(OneOverF, ZeroMeanOverLongWindow) {
  // each component averages to zero over many periods; the bound is Σ a_i / (π f_i τ)
  const auto r = draw_realization(base(), 2);
  const double tau_ns = 1e8;  // 0.1 s, 100 periods of the slowest component
  double bound = 0.0;
  for (std::size_t i = 0; i < r.f_hz.size(); ++i) bound += r.amp_hz[i] / (kPi * r.f_hz[i] * 1e-9 * tau_ns);
  const double mean_hz = r.phase_integral(tau_ns) / (2 * kPi * 1e-9 * tau_ns);
  EXPECT_LE(std::abs(mean_hz), bound);
}

TEST(OneOverF, LogUniformStaysInBand) {
  auto c = base();
  c.sampling = FrequencySampling::kLogUniform;
  const auto r = draw_realization(c, 9);
  for (double f : r.f_hz) {
    EXPECT_GE(f, 1e3);
    EXPECT_LE(f, 1e5);
  }
}

TEST(OneOverF, RejectsBadConfig) {
  auto c = base();
  c.f_max_khz = 0.5;
  EXPECT_THROW(c.validate(), DomainError);
  c = base();
  c.n_components = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = base();
  c.gamma = -1;
  EXPECT_THROW(c.validate(), DomainError);
}

class Spectrum : public ::testing::Test {
 protected:
  static const PsdResult& pink() {
    static const PsdResult r = psd_estimate(base(), 20);
    return r;
  }
};

TEST_F(Spectrum, SlopeIsMinusOne) {
  EXPECT_NEAR(pink().slope, -1.0, 0.15);
}

TEST_F(Spectrum, LevelMatchesComponentDensity) {
  // n components spread uniformly over the band, each of power γ²/(2f):
  // S(f) = n γ² / (2 f (f_max − f_min))
  const auto c = base();
  const double fit_at_10k = std::pow(10.0, pink().intercept + pink().slope * 4.0);
  const double expected = c.n_components * c.gamma * c.gamma / (2.0 * 1e4 * (1e5 - 1e3));
  EXPECT_NEAR(fit_at_10k / expected, 1.0, 0.25);
}

TEST_F(Spectrum, ParsevalWithinTenPercent) {
  EXPECT_NEAR(pink().band_power / pink().time_variance, 1.0, 0.10);
}

TEST_F(Spectrum, FlatAmplitudesGiveWhiteBand) {
  auto c = base();
  c.amplitudes = AmplitudeLaw::kFlat;
  const auto r = psd_estimate(c, 20);
  EXPECT_NEAR(r.slope, 0.0, 0.15);
}

TEST_F(Spectrum, PowerScalesWithGammaSquared) {
  auto c = base();
  c.gamma *= 2.0;
  const auto r = psd_estimate(c, 20);
  ASSERT_EQ(r.psd.size(), pink().psd.size());
  for (std::size_t i = 0; i < r.psd.size(); ++i)
    if (pink().psd[i] > 0) EXPECT_NEAR(r.psd[i] / pink().psd[i], 4.0, 1e-9);
}

TEST(SpectrumWarnings, NarrowBandAndFewRealizations) {
  auto c = base();
  c.f_min_khz = 10.0;
  c.f_max_khz = 30.0;
  c.n_components = 20;
  const auto r = psd_estimate(c, 2);
  EXPECT_EQ(r.warnings.size(), 2u);
}

TEST(Ramsey, ZeroGammaHasInfiniteT2) {
  auto c = base();
  c.gamma = 0.0;
  const auto r = ramsey_t2(c, ramsey_delays(10.0, 11), 10);
  EXPECT_TRUE(std::isinf(r.t2_us));
  for (double v : r.coherence) EXPECT_EQ(v, 1.0);
}

TEST(Ramsey, HalvingGammaDoublesT2) {
  auto c = base();
  c.gamma = 6e5;
  const auto a = ramsey_t2(c, ramsey_delays(20.0, 81), 400);
  c.gamma = 3e5;
  const auto b = ramsey_t2(c, ramsey_delays(40.0, 81), 400);
  EXPECT_NEAR(b.t2_us / a.t2_us, 2.0, 0.3);
}

TEST(Ramsey, CoherenceStartsAtOneAndDecays) {
  auto c = base();
  c.gamma = 6e5;
  const auto r = ramsey_t2(c, ramsey_delays(20.0, 41), 200);
  EXPECT_NEAR(r.coherence.front(), 1.0, 1e-12);
  EXPECT_LT(r.coherence.back(), 0.2);
  EXPECT_LT(r.fit_rms, 0.1);
}

TEST(Ramsey, CalibrationHitsTarget) {
  auto c = base();
  c.gamma = calibrate_gamma(c, 5.0, 400);
  const auto r = ramsey_t2(c, ramsey_delays(20.0, 81), 400);
  EXPECT_NEAR(r.t2_us, 5.0, 0.5);
}

TEST(GaussianFit, RecoversKnownDecay) {
  std::vector<double> t, y;
  for (int i = 0; i <= 40; ++i) {
    t.push_back(0.25 * i);
    y.push_back(std::exp(-std::pow(0.25 * i / 3.0, 2)));
  }
  EXPECT_NEAR(fit_gaussian_decay(t, y).first, 3.0, 1e-6);
}

TEST(GaussianFit, RejectsNonDecayingData) {
  std::vector<double> t, y;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(i);
    y.push_back(i % 2 ? 1.0 : 0.0);
  }
  EXPECT_THROW(fit_gaussian_decay(t, y), FitError);
}

TEST(LinearFit, ExactLine) {
  const auto [a, b] = linear_fit({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(a, 1.0, 1e-12);
  EXPECT_NEAR(b, 2.0, 1e-12);
  EXPECT_THROW(linear_fit({1}, {1}), FitError);
}
