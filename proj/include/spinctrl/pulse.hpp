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

// Bandwidth-limited control pulses.
//
// A pulse is the sine-enveloped Fourier series
//
//   Ω(t) = sin(πt/T) · (a_0 + Σ_{j=1..n} a_j cos(2πjt/T + φ_j)),   0 ≤ t ≤ T,
//
// with amplitudes in rad/ns and time in ns. The envelope pins Ω(0) = Ω(T) = 0.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinctrl/errors.hpp"
#include "spinctrl/linalg.hpp"

namespace spinctrl {

/// Zeeman-energy difference used to normalise the published pulse amplitudes.
inline constexpr double kReferenceDeltaEz = 0.2;  // rad/ns

template <class W>
concept Waveform = requires(const W& w, double t) {
  { w(t) } -> std::convertible_to<double>;
  { w.duration() } -> std::convertible_to<double>;
};

struct PulseParams {
  double T = 0.0;
  std::vector<double> a;    // a_0..a_n, rad/ns
  std::vector<double> phi;  // φ_1..φ_n, rad

  int harmonics() const { return static_cast<int>(phi.size()); }
  double duration() const { return T; }
  double operator()(double t) const;

  void validate() const {
    if (!(T > 0.0)) throw DomainError("pulse duration must be positive");
    if (a.empty()) throw DomainError("pulse needs at least the a_0 coefficient");
    if (a.size() != phi.size() + 1)
      throw DomainError("pulse coefficient mismatch: length(a) must equal length(phi) + 1");
  }

  bool operator==(const PulseParams&) const = default;
};

/// Ω(t). Times within 1e-9·T outside [0, T] are clamped to absorb grid rounding.
inline double eval_pulse(const PulseParams& p, double t) {
  const double slack = 1e-9 * p.T;
  if (t < -slack || t > p.T + slack || std::isnan(t))
    throw DomainError("pulse evaluated outside [0, T]");
  if (t <= 0.0 || t >= p.T) return 0.0;
  const double w = 2.0 * kPi * t / p.T;
  double s = p.a[0];
  for (std::size_t j = 1; j < p.a.size(); ++j)
    s += p.a[j] * std::cos(static_cast<double>(j) * w + p.phi[j - 1]);
  return std::sin(kPi * t / p.T) * s;
}

inline double PulseParams::operator()(double t) const { return eval_pulse(*this, t); }

/// max_t |Ω(t)|: dense sampling followed by golden-section refinement of the best bracket.
template <Waveform W>
double peak_amplitude(const W& w, int samples = 4096) {
  const double T = w.duration();
  const double h = T / samples;
  int best = 0;
  double best_val = -1.0;
  for (int k = 0; k <= samples; ++k) {
    const double v = std::abs(w(std::min(T, k * h)));
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  double lo = std::max(0.0, (best - 1) * h);
  double hi = std::min(T, (best + 1) * h);
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = std::abs(w(x1));
  double f2 = std::abs(w(x2));
  for (int it = 0; it < 80 && hi - lo > 1e-12 * T; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = std::abs(w(x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = std::abs(w(x1));
    }
  }
  return std::max({best_val, f1, f2});
}

inline bool is_zero_pulse(const PulseParams& p) {
  return std::all_of(p.a.begin(), p.a.end(), [](double v) { return v == 0.0; });
}

/// Scale all a_j so that max_t |Ω(t)| equals `cap`.
inline PulseParams rescale_pulse(const PulseParams& p, double cap) {
  p.validate();
  if (!(cap > 0.0)) throw DomainError("amplitude cap must be positive");
  const double peak = is_zero_pulse(p) ? 0.0 : peak_amplitude(p);
  if (peak == 0.0) throw DegenerateInputError("cannot rescale an identically zero pulse");
  PulseParams out = p;
  const double s = cap / peak;
  for (double& v : out.a) v *= s;
  return out;
}

inline PulseParams scale_amplitude(PulseParams p, double factor) {
  for (double& v : p.a) v *= factor;
  return p;
}

/// ∫_0^T w(t) dt by composite 8-point Gauss-Legendre quadrature.
template <Waveform W>
double integrate_waveform(const W& w, int panels = 256) {
  static constexpr std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290,
                                              0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> wt = {0.3626837833783620, 0.3137066458778873,
                                               0.2223810344533745, 0.1012285362903763};
  const double T = w.duration();
  const double h = T / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t k = 0; k < x.size(); ++k) {
      sum += wt[k] * (w(mid - 0.5 * h * x[k]) + w(mid + 0.5 * h * x[k]));
    }
  }
  return 0.5 * h * sum;
}

/// Pulse area ∫Ω dt; for H = Ω(t)/2·X it is the X-rotation angle.
inline double pulse_area(const PulseParams& p) {
  p.validate();
  return integrate_waveform(p);
}

/// Raised-cosine reference pulse A·(1 − cos(2πt/T))/2, the conventional "trivial" drive.
struct CosinePulse {
  double T = 0.0;
  double peak = 0.0;

  double duration() const { return T; }
  double operator()(double t) const {
    if (t <= 0.0 || t >= T) return 0.0;
    return 0.5 * peak * (1.0 - std::cos(2.0 * kPi * t / T));
  }
  double area() const { return 0.5 * peak * T; }

  static CosinePulse with_area(double T, double area) { return {T, 2.0 * area / T}; }
};

/// Area-preserving stretch Ω(t) → Ω(t/a)/a over duration a·T.
template <Waveform W>
struct StretchedPulse {
  W base;
  double factor = 1.0;

  double duration() const { return factor * base.duration(); }
  double operator()(double t) const {
    return base(std::clamp(t / factor, 0.0, base.duration())) / factor;
  }
};

template <Waveform W>
StretchedPulse<W> stretch(W w, double factor) {
  if (!(factor > 0.0)) throw DomainError("stretch factor must be positive");
  return StretchedPulse<W>{std::move(w), factor};
}

/// Type-erased waveform, so heterogeneous per-qubit drives can share a container.
/// A default-constructed drive is an idle qubit.
class Drive {
 public:
  Drive() = default;

  template <Waveform W>
    requires(!std::same_as<std::decay_t<W>, Drive>)
  Drive(W w) : duration_(w.duration()), fn_(std::make_shared<std::function<double(double)>>(
                                            [w = std::move(w)](double t) { return w(t); })) {}

  double duration() const { return duration_; }
  bool idle() const { return !fn_; }
  double operator()(double t) const {
    if (!fn_ || t <= 0.0 || t >= duration_) return 0.0;
    return (*fn_)(t);
  }

 private:
  double duration_ = 0.0;
  std::shared_ptr<const std::function<double(double)>> fn_;
};

// ---------------------------------------------------------------------------
// Pulse library

enum class GateLabel { kXpi, kXpi2, kX2pi };

inline std::string to_string(GateLabel g) {
  switch (g) {
    case GateLabel::kXpi: return "Xpi";
    case GateLabel::kXpi2: return "Xpi2";
    case GateLabel::kX2pi: return "X2pi";
  }
  return "?";
}

inline std::optional<GateLabel> parse_gate_label(const std::string& s) {
  if (s == "Xpi") return GateLabel::kXpi;
  if (s == "Xpi2") return GateLabel::kXpi2;
  if (s == "X2pi") return GateLabel::kX2pi;
  return std::nullopt;
}

inline constexpr const char* kAllowedGateLabels = "{Xpi, Xpi2, X2pi}";

/// Target X-rotation angle of a gate label.
inline double rotation_angle(GateLabel g) {
  switch (g) {
    case GateLabel::kXpi: return kPi;
    case GateLabel::kXpi2: return kPi / 2.0;
    case GateLabel::kX2pi: return 2.0 * kPi;
  }
  return 0.0;
}

struct PulseLibraryEntry {
  GateLabel gate = GateLabel::kXpi;
  double relative_amplitude = 0.0;  // Ω_m / ΔE_z as tabulated
  PulseParams params;
  std::string note;

  bool operator==(const PulseLibraryEntry&) const = default;
};

/// Nearest area congruent to the target angle that a drive of the given area realises,
/// i.e. the closest θ + 2πk (X rotations agree up to global phase modulo 2π).
inline double nearest_equivalent_angle(double area, double target_angle) {
  const double k = std::round((area - target_angle) / (2.0 * kPi));
  return target_angle + 2.0 * kPi * k;
}

/// Rescales amplitude so the noiseless rotation is exact; removes the rounding error
/// of published 4-digit coefficients.
inline PulseParams calibrate_area(const PulseParams& p, double target_angle) {
  const double area = pulse_area(p);
  if (area == 0.0) throw DegenerateInputError("cannot calibrate a zero-area pulse");
  return scale_amplitude(p, nearest_equivalent_angle(area, target_angle) / area);
}

/// Trivial cosine reference with the same duration and area as `p`.
inline CosinePulse trivial_counterpart(const PulseParams& p) {
  return CosinePulse::with_area(p.T, pulse_area(p));
}

inline nlohmann::json to_json(const PulseLibraryEntry& e) {
  nlohmann::json j{{"gate", to_string(e.gate)},
                   {"relative_amplitude", e.relative_amplitude},
                   {"T_ns", e.params.T},
                   {"a", e.params.a},
                   {"phi", e.params.phi}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

inline nlohmann::json library_to_json(const std::vector<PulseLibraryEntry>& entries) {
  nlohmann::json doc;
  doc["schema"] = "spinctrl.pulse_library/1";
  doc["units"] = {{"T_ns", "ns"},
                  {"a", "rad/ns"},
                  {"phi", "rad"},
                  {"relative_amplitude", "max|Omega| / dEz with dEz = 0.2 rad/ns"}};
  doc["entries"] = nlohmann::json::array();
  for (const auto& e : entries) doc["entries"].push_back(to_json(e));
  return doc;
}

inline PulseLibraryEntry entry_from_json(const nlohmann::json& j, std::size_t index) {
  const auto where = [&] {
    std::ostringstream os;
    os << "entry " << index;
    if (j.is_object() && j.contains("gate") && j["gate"].is_string())
      os << " (" << j["gate"].get<std::string>() << ")";
    return os.str();
  };
  if (!j.is_object()) throw ParseError(where() + ": not an object");
  for (const char* key : {"gate", "relative_amplitude", "T_ns", "a", "phi"})
    if (!j.contains(key)) throw ParseError(where() + ": missing field '" + key + "'");
  PulseLibraryEntry e;
  const auto gate = j["gate"].is_string() ? parse_gate_label(j["gate"].get<std::string>())
                                          : std::nullopt;
  if (!gate) throw ParseError(where() + ": gate must be one of " + kAllowedGateLabels);
  e.gate = *gate;
  try {
    e.relative_amplitude = j.at("relative_amplitude").get<double>();
    e.params.T = j.at("T_ns").get<double>();
    e.params.a = j.at("a").get<std::vector<double>>();
    e.params.phi = j.at("phi").get<std::vector<double>>();
    if (j.contains("note")) e.note = j["note"].get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(where() + ": " + ex.what());
  }
  if (!(e.relative_amplitude > 0.0)) throw ParseError(where() + ": relative_amplitude must be > 0");
  try {
    e.params.validate();
  } catch (const DomainError& ex) {
    throw ParseError(where() + ": " + ex.what());
  }
  return e;
}

inline std::vector<PulseLibraryEntry> parse_library(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("pulse library is not valid JSON: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    throw ParseError("pulse library must be an object with an 'entries' array");
  std::vector<PulseLibraryEntry> out;
  for (std::size_t i = 0; i < doc["entries"].size(); ++i)
    out.push_back(entry_from_json(doc["entries"][i], i));
  return out;
}

inline std::vector<PulseLibraryEntry> load_library(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open pulse library '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_library(ss.str());
}

inline void save_library(const std::vector<PulseLibraryEntry>& entries, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write pulse library '" + path + "'");
  out << library_to_json(entries).dump(2) << '\n';
}

/// The nine published robust control pulses. The first row's tabulated relative
/// amplitude (100) is kept verbatim; its waveform peaks at 0.5·ΔE_z.
inline std::vector<PulseLibraryEntry> builtin_library() {
  const auto row = [](GateLabel g, double rel, double T, std::vector<double> a,
                      std::vector<double> phi, std::string note = {}) {
    return PulseLibraryEntry{g, rel, PulseParams{T, std::move(a), std::move(phi)}, std::move(note)};
  };
  using G = GateLabel;
  return {
      row(G::kXpi, 100, 250, {0.1225, 0.0672, 0.0394, -0.0297, -0.0228, 0.0040},
          {0.0022, -0.0138, 0.0028, 0.0114, -0.0595},
          "tabulated relative amplitude 100 is inconsistent with the waveform peak (0.5)"),
      row(G::kXpi2, 0.5, 250, {0.1067, 0.0547, 0.0261, -0.0470, -0.0538, 0.0044},
          {0.0016, 0.0069, -0.0067, -0.0050, 0.0078}),
      row(G::kX2pi, 0.5, 250, {0.0906, 0.0292, 0.0429, -0.0188, -0.0255, 0.0017},
          {-0.0082, 0.0114, 0.0056, 0.0448, -0.2691}),
      row(G::kXpi, 0.75, 180, {0.2374, 0.2683, 0.1459, 0.0335, 0.0030, 0.0144},
          {-0.0055, -0.0021, -0.0006, -0.2457, -0.0157}),
      row(G::kXpi2, 0.75, 180, {0.1735, 0.1438, 0.0625, -0.0427, -0.0606, 0.0207},
          {0.0013, 0.0049, -0.0139, -0.0093, 0.0062}),
      row(G::kX2pi, 0.75, 180, {0.1522, 0.1288, 0.0434, -0.0866, -0.0375, -0.0174},
          {0.0093, -0.0431, 0.0567, -0.0104, -0.0313}),
      row(G::kXpi, 2.5, 50, {0.6191, 0.3799, 0.0626, -0.1812, -0.0006, -0.0001},
          {-0.0027, -0.0669, -0.0056, 0.0041, 0.0111}),
      row(G::kXpi2, 3.5, 50, {0.7961, 0.5159, -0.1174, -0.0838, -0.4011, -0.0727},
          {0.0013, -0.0085, -0.0026, 0.0043, -0.0586}),
      row(G::kX2pi, 3.3, 50, {0.8686, 0.8161, 0.1008, 0.0318, -0.2056, -0.0007},
          {-0.0049, -0.0994, -0.1188, 0.0682, 0.1152}),
  };
}

/// Library entry for a gate at a gate time; throws if absent.
inline PulseLibraryEntry find_entry(const std::vector<PulseLibraryEntry>& lib, GateLabel g, double T) {
  for (const auto& e : lib)
    if (e.gate == g && std::abs(e.params.T - T) < 1e-9) return e;
  throw DomainError("no library pulse for " + to_string(g) + " at T = " + std::to_string(T) + " ns");
}

}  // namespace spinctrl
