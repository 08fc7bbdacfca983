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

// 1/f qubit-frequency noise built from a sum of sines,
//
//   δ(t) = γ Σ_i f_i^{-1/2} sin(2π f_i t + φ_i)      [Hz, t in s]
//
// converted to rad/ns for propagation. Spectrum check by an FFTW periodogram,
// dephasing time by a simulated Ramsey experiment.

#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <type_traits>
#include <vector>

#include "spinctrl/errors.hpp"
#include "spinctrl/linalg.hpp"
#include "spinctrl/parallel.hpp"
#include "spinctrl/propagate.hpp"

namespace spinctrl {

/// Hz → rad/ns.
inline constexpr double kHzToRadPerNs = 2.0 * kPi * 1e-9;

enum class FrequencySampling { kUniform, kLogUniform };
enum class AmplitudeLaw { kPink, kFlat };

struct OneOverFConfig {
  double gamma = 1e6;        // Hz^{1/2}
  double f_min_khz = 1.0;
  double f_max_khz = 100.0;
  int n_components = 200;
  std::uint64_t seed = 1;
  FrequencySampling sampling = FrequencySampling::kUniform;
  AmplitudeLaw amplitudes = AmplitudeLaw::kPink;

  void validate() const {
    if (!(f_min_khz > 0.0) || !(f_max_khz > f_min_khz))
      throw DomainError("noise band needs 0 < f_min < f_max");
    if (n_components < 1) throw DomainError("noise needs at least one component");
    if (gamma < 0.0) throw DomainError("noise amplitude gamma must be non-negative");
  }
};

/// One draw of frequencies and phases.
struct NoiseRealization {
  std::vector<double> f_hz;
  std::vector<double> amp_hz;  // γ f^{-1/2} or γ
  std::vector<double> phase;

  /// δ(t) in Hz, t in ns.
  double hz(double t_ns) const {
    double s = 0.0;
    const double ts = t_ns * 1e-9;
    for (std::size_t i = 0; i < f_hz.size(); ++i) s += amp_hz[i] * std::sin(2.0 * kPi * f_hz[i] * ts + phase[i]);
    return s;
  }
  /// δ(t) in rad/ns.
  double operator()(double t_ns) const { return kHzToRadPerNs * hz(t_ns); }

  /// ∫_0^τ δ dt in radians (exact).
  double phase_integral(double tau_ns) const {
    const double ts = tau_ns * 1e-9;
    double s = 0.0;
    for (std::size_t i = 0; i < f_hz.size(); ++i)
      s += amp_hz[i] / f_hz[i] * (std::cos(phase[i]) - std::cos(2.0 * kPi * f_hz[i] * ts + phase[i]));
    return s;  // 2π ∫ δ_Hz dt = Σ a_i/f_i (cos φ − cos(2πfτ + φ))
  }
};

inline NoiseRealization draw_realization(const OneOverFConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  SplitMix rng(seed);
  NoiseRealization r;
  const double lo = cfg.f_min_khz * 1e3, hi = cfg.f_max_khz * 1e3;
  for (int i = 0; i < cfg.n_components; ++i) {
    const double f = cfg.sampling == FrequencySampling::kUniform
                         ? rng.uniform(lo, hi)
                         : std::exp(rng.uniform(std::log(lo), std::log(hi)));
    r.f_hz.push_back(f);
    r.amp_hz.push_back(cfg.amplitudes == AmplitudeLaw::kPink ? cfg.gamma / std::sqrt(f) : cfg.gamma);
    r.phase.push_back(rng.uniform(0.0, 2.0 * kPi));
  }
  return r;
}

/// δ(t_k) in rad/ns on the grid nodes; deterministic per (seed, grid).
inline std::vector<double> sample_trajectory(const OneOverFConfig& cfg, const TimeGrid& grid) {
  const auto r = draw_realization(cfg, cfg.seed);
  std::vector<double> out(grid.steps + 1);
  for (int k = 0; k <= grid.steps; ++k) out[k] = r(grid.node(k));
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum

struct PsdOptions {
  double sample_rate_hz = 1e6;
  double window_s = 10e-3;
  int bins_per_decade = 10;
  double fit_lo_hz = 2e3;
  double fit_hi_hz = 50e3;
  int threads = 0;
};

struct PsdResult {
  std::vector<double> freq_hz;  // log-bin centres
  std::vector<double> psd;      // one-sided, Hz²/Hz
  double slope = 0.0;
  double intercept = 0.0;       // log10 PSD at 1 Hz
  double band_power = 0.0;      // ∫ PSD over [f_min, f_max]
  double time_variance = 0.0;   // mean δ² over the windows
  std::vector<std::string> warnings;
};

/// Least-squares line y = a + b x; returns {a, b}.
inline std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) throw FitError("linear fit needs two points", x, y);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw FitError("linear fit with degenerate abscissae", x, y);
  const double b = (n * sxy - sx * sy) / den;
  return {(sy - b * sx) / n, b};
}

/// Ensemble-averaged Hann-windowed periodogram of δ (Hz), log-binned, slope fitted in the
/// fit band.
inline PsdResult psd_estimate(const OneOverFConfig& cfg, int realizations, const PsdOptions& opt = {}) {
  cfg.validate();
  if (realizations < 1) throw DomainError("psd_estimate needs at least one realization");
  const int n = static_cast<int>(std::lround(opt.sample_rate_hz * opt.window_s));
  const double fs = opt.sample_rate_hz;
  const int nf = n / 2 + 1;

  PsdResult res;
  if (std::log2(cfg.f_max_khz / cfg.f_min_khz) < 2.0)
    res.warnings.push_back("noise band narrower than two octaves; slope fit unreliable");
  if (realizations < 10) res.warnings.push_back("fewer than 10 realizations; PSD estimate is noisy");

  std::vector<double> win(n);
  double w2 = 0.0;
  for (int i = 0; i < n; ++i) {
    win[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / n);
    w2 += win[i] * win[i];
  }

  struct Partial {
    std::vector<double> spec;
    double var = 0.0;
  };
  // FFTW planning is not thread-safe; plan once and execute with new-array calls.
  std::vector<double> in0(n);
  std::vector<std::complex<double>> out0(nf);
  const fftw_plan plan = fftw_plan_dft_r2c_1d(n, in0.data(), reinterpret_cast<fftw_complex*>(out0.data()),
                                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  std::shared_ptr<std::remove_pointer_t<fftw_plan>> guard(plan, fftw_destroy_plan);

  const auto parts = parallel_map(static_cast<std::size_t>(realizations), opt.threads, [&](std::size_t r) {
    const auto nr = draw_realization(cfg, derive_seed(cfg.seed, r));
    Partial p;
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(nf);
    for (int i = 0; i < n; ++i) {
      const double x = nr.hz(1e9 * i / fs);
      p.var += x * x;
      in[i] = x * win[i];
    }
    p.var /= n;
    fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    p.spec.resize(nf);
    for (int k = 0; k < nf; ++k) {
      const double scale = (k == 0 || (n % 2 == 0 && k == n / 2)) ? 1.0 : 2.0;
      p.spec[k] = scale * std::norm(out[k]) / (fs * w2);
    }
    return p;
  });

  std::vector<double> spec(nf, 0.0);
  for (const auto& p : parts) {
    for (int k = 0; k < nf; ++k) spec[k] += p.spec[k] / realizations;
    res.time_variance += p.var / realizations;
  }

  const double df = fs / n;
  const double lo = cfg.f_min_khz * 1e3, hi = cfg.f_max_khz * 1e3;
  for (int k = 0; k < nf; ++k) {
    const double f = k * df;
    if (f >= lo - 2 * df && f <= hi + 2 * df) res.band_power += spec[k] * df;
  }

  // log bins from f_min to f_max
  const double decades = std::log10(hi / lo);
  const int nb = std::max(1, static_cast<int>(std::ceil(decades * opt.bins_per_decade)));
  std::vector<double> fit_x, fit_y;
  for (int b = 0; b < nb; ++b) {
    const double f0 = lo * std::pow(10.0, decades * b / nb);
    const double f1 = lo * std::pow(10.0, decades * (b + 1) / nb);
    double s = 0.0;
    int cnt = 0;
    for (int k = static_cast<int>(std::ceil(f0 / df)); k * df < f1 && k < nf; ++k) {
      s += spec[k];
      ++cnt;
    }
    if (cnt == 0) continue;
    const double fc = std::sqrt(f0 * f1);
    res.freq_hz.push_back(fc);
    res.psd.push_back(s / cnt);
    if (fc >= opt.fit_lo_hz && fc <= opt.fit_hi_hz && s > 0.0) {
      fit_x.push_back(std::log10(fc));
      fit_y.push_back(std::log10(s / cnt));
    }
  }
  if (fit_x.size() >= 2) {
    const auto [a, b] = linear_fit(fit_x, fit_y);
    res.intercept = a;
    res.slope = b;
  } else {
    res.warnings.push_back("fit band holds fewer than two populated bins");
  }
  return res;
}

// ---------------------------------------------------------------------------
// Ramsey

struct RamseyResult {
  std::vector<double> delays_ns;
  std::vector<double> coherence;  // |<e^{iΦ}>|
  double t2_us = std::numeric_limits<double>::infinity();
  double fit_rms = 0.0;
};

/// Gaussian-envelope fit of exp(−(τ/T2)²) to coherence data; T2 in the delay unit.
inline std::pair<double, double> fit_gaussian_decay(const std::vector<double>& tau, const std::vector<double>& c) {
  const auto sse = [&](double t2) {
    double s = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const double r = c[i] - std::exp(-(tau[i] / t2) * (tau[i] / t2));
      s += r * r;
    }
    return s;
  };
  const double tmax = *std::max_element(tau.begin(), tau.end());
  if (!(tmax > 0.0)) throw FitError("Ramsey fit needs positive delays", tau, c);
  // coarse log scan, then golden section in log T2
  double best = tmax, best_s = sse(tmax);
  for (int k = -60; k <= 60; ++k) {
    const double t2 = tmax * std::pow(10.0, k / 20.0);
    const double s = sse(t2);
    if (s < best_s) {
      best_s = s;
      best = t2;
    }
  }
  double lo = std::log(best) - std::log(10.0) / 20.0, hi = std::log(best) + std::log(10.0) / 20.0;
  constexpr double g = 0.6180339887498949;
  for (int it = 0; it < 100; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (sse(std::exp(a)) < sse(std::exp(b))) hi = b; else lo = a;
  }
  const double t2 = std::exp(0.5 * (lo + hi));
  const double rms = std::sqrt(sse(t2) / static_cast<double>(tau.size()));
  if (!std::isfinite(t2) || t2 >= 1e3 * tmax || t2 <= 1e-3 * tmax || rms > 0.1)
    throw FitError("Gaussian Ramsey fit failed (rms " + std::to_string(rms) + ")", tau, c);
  return {t2, rms};
}

/// Ramsey decay averaged over independent noise draws; T2 returned in µs.
inline RamseyResult ramsey_t2(const OneOverFConfig& cfg, const std::vector<double>& delays_ns,
                              int realizations, int threads = 0) {
  cfg.validate();
  if (delays_ns.empty()) throw DomainError("ramsey_t2 needs delays");
  if (realizations < 1) throw DomainError("ramsey_t2 needs at least one realization");
  RamseyResult res;
  res.delays_ns = delays_ns;
  if (cfg.gamma == 0.0) {
    res.coherence.assign(delays_ns.size(), 1.0);
    return res;  // no dephasing: T2 = ∞ sentinel
  }
  const auto phases = parallel_map(static_cast<std::size_t>(realizations), threads, [&](std::size_t r) {
    const auto nr = draw_realization(cfg, derive_seed(cfg.seed, r));
    std::vector<std::complex<double>> z(delays_ns.size());
    for (std::size_t i = 0; i < delays_ns.size(); ++i) z[i] = std::exp(kI * nr.phase_integral(delays_ns[i]));
    return z;
  });
  for (std::size_t i = 0; i < delays_ns.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (const auto& z : phases) acc += z[i];
    res.coherence.push_back(std::abs(acc) / realizations);
  }
  std::vector<double> tau_us(delays_ns.size());
  for (std::size_t i = 0; i < delays_ns.size(); ++i) tau_us[i] = delays_ns[i] * 1e-3;
  const auto [t2, rms] = fit_gaussian_decay(tau_us, res.coherence);
  res.t2_us = t2;
  res.fit_rms = rms;
  return res;
}

/// Evenly spaced delays over [0, span_us].
inline std::vector<double> ramsey_delays(double span_us, int points) {
  std::vector<double> d(points);
  for (int i = 0; i < points; ++i) d[i] = 1e3 * span_us * i / (points - 1);
  return d;
}

/// γ giving the requested T2 (T2 ∝ 1/γ since the accumulated phase is linear in γ).
inline double calibrate_gamma(OneOverFConfig cfg, double target_t2_us, int realizations,
                              double span_us = 20.0, int points = 81, int threads = 0) {
  if (!(target_t2_us > 0.0)) throw DomainError("target T2 must be positive");
  if (cfg.gamma == 0.0) cfg.gamma = 1e6;
  const auto r = ramsey_t2(cfg, ramsey_delays(span_us, points), realizations, threads);
  return cfg.gamma * r.t2_us / target_t2_us;
}

}  // namespace spinctrl
