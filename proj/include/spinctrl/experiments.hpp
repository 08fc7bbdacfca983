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

// Figure-level experiments: coupling sweeps, 1/f noise, parallel lattice gates, the ZZ
// gate, Euler decomposition and entropy growth in random circuits.

#pragma once

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinctrl/errgeo.hpp"
#include "spinctrl/errors.hpp"
#include "spinctrl/model.hpp"
#include "spinctrl/noise.hpp"
#include "spinctrl/parallel.hpp"
#include "spinctrl/propagate.hpp"
#include "spinctrl/pulse.hpp"
#include "spinctrl/statevector.hpp"

namespace spinctrl {

// ---------------------------------------------------------------------------
// Results

struct Column {
  std::string name;
  std::string unit;
  std::vector<double> values;
};

struct ExperimentResult {
  std::string label;
  Column x;
  std::vector<Column> y;  // first column is the primary y, optional y_stderr etc. follow
  nlohmann::json metadata = nlohmann::json::object();
  std::string created;

  void validate() const {
    for (const auto& c : y)
      if (c.values.size() != x.values.size())
        throw ValidationError("column '" + c.name + "' length differs from x in " + label);
  }
  const Column& column(const std::string& name) const {
    for (const auto& c : y)
      if (c.name == name) return c;
    throw DomainError("no column '" + name + "' in " + label);
  }
};

/// Shortest round-trip decimal, locale independent.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), r.ptr};
}

inline std::string to_csv(const ExperimentResult& r) {
  r.validate();
  std::string out = r.x.name;
  for (const auto& c : r.y) out += "," + c.name;
  out += "\n";
  for (std::size_t i = 0; i < r.x.values.size(); ++i) {
    out += format_double(r.x.values[i]);
    for (const auto& c : r.y) out += "," + format_double(c.values[i]);
    out += "\n";
  }
  return out;
}

/// SOURCE_DATE_EPOCH as an ISO date when set, otherwise the Unix epoch.
inline std::string creation_stamp() {
  std::time_t secs = 0;
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) secs = static_cast<std::time_t>(std::atoll(e));
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json sidecar(const ExperimentResult& r) {
  nlohmann::json cols = nlohmann::json::array();
  cols.push_back({{"name", r.x.name}, {"unit", r.x.unit}});
  for (const auto& c : r.y) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  return {{"label", r.label}, {"created", r.created}, {"columns", cols}, {"metadata", r.metadata}};
}

/// Least-squares slope of log10 y against log10 x over x in [lo, hi].
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo * (1 - 1e-12) && x[i] <= hi * (1 + 1e-12) && x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log10(x[i]));
      ly.push_back(std::log10(y[i]));
    }
  return linear_fit(lx, ly).second;
}

/// n points log-spaced over [lo, hi].
inline std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 2) return {lo};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return v;
}

// ---------------------------------------------------------------------------
// Two-qubit coupling sweeps

/// Rotation target of the pair model: the drive acts on the right-hand qubit.
inline Operator pair_target(double angle) { return kron(pauli::I(), x_rotation(angle)); }

template <Waveform W>
double pair_infidelity(const W& pulse, const TwoQubitModel& m, double angle, double per_ns = kStepsPerNs) {
  const auto grid = TimeGrid::with_resolution(pulse.duration(), per_ns);
  const Operator u = evolve_final([&](double t) { return rotating_frame_hamiltonian(m, pulse(t), t); }, grid);
  return gate_infidelity(u, pair_target(angle));
}

/// 1 − F of the full pair Hamiltonian versus J; x is J/Ω_m.
template <Waveform W>
ExperimentResult fidelity_vs_coupling(const W& pulse, double dEz, const std::vector<double>& J_over_peak,
                                      double angle, int threads = 1, double per_ns = kStepsPerNs) {
  const double peak = peak_amplitude(pulse);
  ExperimentResult r;
  r.label = "fidelity_vs_coupling";
  r.x = {"J_over_Omega_m", "1", J_over_peak};
  const auto inf = parallel_map(J_over_peak.size(), threads, [&](std::size_t i) {
    const double J = J_over_peak[i] * peak;
    if (J < 0.0 || J > 0.2 * dEz * (1 + 1e-12)) throw DomainError("J outside [0, 0.2 dEz]");
    return pair_infidelity(pulse, TwoQubitModel{0.0, dEz, J}, angle, per_ns);
  });
  std::vector<double> Js;
  for (double v : J_over_peak) Js.push_back(v * peak);
  r.y.push_back({"infidelity", "1", inf});
  r.y.push_back({"J", "rad/ns", Js});
  r.metadata = {{"dEz", dEz}, {"peak", peak}, {"angle", angle}, {"steps_per_ns", per_ns}};
  r.created = creation_stamp();
  return r;
}

/// Same sweep with independent 1/f noise δ_q(t)/2·Z_q on both qubits; mean and standard error.
template <Waveform W>
ExperimentResult fidelity_under_1f(const W& pulse, double dEz, const OneOverFConfig& noise,
                                   const std::vector<double>& J_over_peak, double angle, int realizations,
                                   int threads = 1, double per_ns = kStepsPerNs) {
  if (realizations < 1) throw DomainError("need at least one noise realization");
  noise.validate();
  const double peak = peak_amplitude(pulse);
  static const Operator ZI = pauli_string("ZI"), IZ = pauli_string("IZ");
  const auto grid = TimeGrid::with_resolution(pulse.duration(), per_ns);
  const Operator target = pair_target(angle);
  // realization r draws both qubits' trajectories from its own seeds, shared across J
  const std::size_t nj = J_over_peak.size();
  const auto per_real = parallel_map(static_cast<std::size_t>(realizations), threads, [&](std::size_t k) {
    const auto d1 = draw_realization(noise, derive_seed(noise.seed, 2 * k));
    const auto d2 = draw_realization(noise, derive_seed(noise.seed, 2 * k + 1));
    std::vector<double> out(nj);
    for (std::size_t i = 0; i < nj; ++i) {
      const TwoQubitModel m{0.0, dEz, J_over_peak[i] * peak};
      const Operator u = evolve_final(
          [&](double t) {
            return Operator(rotating_frame_hamiltonian(m, pulse(t), t) + (0.5 * d1(t)) * ZI + (0.5 * d2(t)) * IZ);
          },
          grid);
      out[i] = gate_infidelity(u, target);
    }
    return out;
  });
  std::vector<double> mean(nj, 0.0), se(nj, 0.0);
  for (std::size_t i = 0; i < nj; ++i) {
    for (const auto& v : per_real) mean[i] += v[i] / realizations;
    double var = 0.0;
    for (const auto& v : per_real) var += (v[i] - mean[i]) * (v[i] - mean[i]);
    se[i] = realizations > 1 ? std::sqrt(var / (realizations - 1) / realizations) : 0.0;
  }
  ExperimentResult r;
  r.label = "fidelity_under_1f";
  r.x = {"J_over_Omega_m", "1", J_over_peak};
  r.y.push_back({"infidelity", "1", mean});
  r.y.push_back({"infidelity_stderr", "1", se});
  r.metadata = {{"dEz", dEz},
                {"peak", peak},
                {"angle", angle},
                {"realizations", realizations},
                {"noise",
                 {{"gamma", noise.gamma},
                  {"f_min_khz", noise.f_min_khz},
                  {"f_max_khz", noise.f_max_khz},
                  {"n_components", noise.n_components},
                  {"seed", noise.seed},
                  {"sampling", noise.sampling == FrequencySampling::kUniform ? "uniform" : "log_uniform"}}}};
  r.created = creation_stamp();
  return r;
}

// ---------------------------------------------------------------------------
// Lattice gates

/// Per-qubit drive (idle by default) and target rotation angle.
struct QubitAssignment {
  Drive drive;
  double angle = 0.0;
  std::string gate = "idle";
};

using Assignment = std::vector<QubitAssignment>;

/// Library pulse for `gate`, or its equal-area cosine when `trivial`.
inline QubitAssignment library_assignment(GateLabel gate, double T, bool trivial,
                                          const std::vector<PulseLibraryEntry>& lib = builtin_library()) {
  const auto p = find_entry(lib, gate, T).params;
  QubitAssignment a;
  a.angle = rotation_angle(gate);
  a.gate = to_string(gate);
  a.drive = trivial ? Drive(trivial_counterpart(p)) : Drive(p);
  return a;
}

/// Pairs of coupled qubits driven at the same time.
inline std::vector<Edge> adjacent_drives(const LatticeModel& lat, const Assignment& a) {
  std::vector<Edge> out;
  for (auto e : lat.edges)
    if (!a[e.first].drive.idle() && !a[e.second].drive.idle()) out.push_back(e);
  return out;
}

inline Operator product_target(const Assignment& a) {
  Operator u = x_rotation(a[0].angle);
  for (std::size_t q = 1; q < a.size(); ++q) u = kron(u, x_rotation(a[q].angle));
  return u;
}

inline double assignment_duration(const Assignment& a) {
  double T = 0.0;
  for (const auto& q : a) T = std::max(T, q.drive.duration());
  return T;
}

/// Ω_m: mean of the peak amplitudes of the driven qubits.
inline double assignment_peak(const Assignment& a) {
  double sum = 0.0;
  int driven = 0;
  for (const auto& q : a)
    if (!q.drive.idle()) {
      sum += peak_amplitude(q.drive);
      ++driven;
    }
  return driven == 0 ? 0.0 : sum / driven;
}

/// Full lattice unitary for one layer of simultaneous drives.
inline Operator lattice_unitary(const LatticeDriveModel& model, const Assignment& a, double T,
                                double per_ns = kStepsPerNs) {
  const int n = model.lattice().n_qubits;
  if (static_cast<int>(a.size()) != n) throw ValidationError("assignment size does not match the lattice");
  const auto grid = TimeGrid::with_resolution(T, per_ns);
  DriveSample w(n);
  return evolve_final(
      [&](double t) {
        for (int q = 0; q < n; ++q) w[q] = a[q].drive(t);
        return model.hamiltonian(w, t);
      },
      grid);
}

struct LatticeSweepOptions {
  bool crosstalk = true;
  double c3 = 0.0;            // absolute coefficient of the three-body terms
  double per_ns = kStepsPerNs;
  double detuning = kReferenceDeltaEz;
  int threads = 1;
};

/// 1 − F against ∏ X_q(angle_q) for each J/Ω_m, Ω_m the mean peak of the driven qubits.
inline ExperimentResult parallel_gate_fidelity(const LatticeModel& base, const Assignment& a,
                                               const std::vector<double>& J_over_peak,
                                               const LatticeSweepOptions& opt = {}) {
  ExperimentResult r;
  r.label = "parallel_gate_fidelity";
  const auto adj = adjacent_drives(base, a);
  nlohmann::json warnings = nlohmann::json::array();
  if (!adj.empty())
    warnings.push_back("adjacent qubits driven simultaneously (" + std::to_string(adj.size()) +
                       " bonds); outside the alternating protocol");
  const double peak = assignment_peak(a);
  const double T = std::max(assignment_duration(a), 1.0);
  const Operator target = product_target(a);
  const auto inf = parallel_map(J_over_peak.size(), opt.threads, [&](std::size_t i) {
    auto lat = base;
    lat.J = J_over_peak[i] * (peak > 0 ? peak : 1.0);
    lat = with_gate_frame(lat, opt.detuning);
    const LatticeDriveModel model(lat, opt.crosstalk, opt.c3);
    return gate_infidelity(lattice_unitary(model, a, T, opt.per_ns), target);
  });
  r.x = {"J_over_Omega_m", "1", J_over_peak};
  r.y.push_back({"infidelity", "1", inf});
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& q : a) gates.push_back(q.gate);
  r.metadata = {{"lattice", base.name}, {"gates", gates},     {"peak", peak},        {"T", T},
                {"crosstalk", opt.crosstalk}, {"c3", opt.c3}, {"steps_per_ns", opt.per_ns},
                {"warnings", warnings}};
  r.created = creation_stamp();
  return r;
}

/// Conditional phase φ of ZZ(φ) = exp(−i φ/2 Z⊗Z) on qubits (i, j), read from the
/// diagonal with every other qubit in |0>.
inline double conditional_phase(const Operator& u, int n, int i, int j) {
  const auto idx = [&](int bi, int bj) {
    Eigen::Index k = 0;
    k |= static_cast<Eigen::Index>(bi) << (n - 1 - i);
    k |= static_cast<Eigen::Index>(bj) << (n - 1 - j);
    return k;
  };
  const cplx c = u(idx(0, 0), idx(0, 0)) * u(idx(1, 1), idx(1, 1)) /
                 (u(idx(0, 1), idx(0, 1)) * u(idx(1, 0), idx(1, 0)));
  return -0.5 * std::arg(c);
}

inline Operator zz_target(int n, int i, int j, double phi) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Operator u = Operator::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    const double zi = ((b >> (n - 1 - i)) & 1) ? -1.0 : 1.0, zj = ((b >> (n - 1 - j)) & 1) ? -1.0 : 1.0;
    u(b, b) = std::polar(1.0, -0.5 * phi * zi * zj);
  }
  return u;
}

/// ZZ(JT/2) on `pair` while every other qubit coupled to the pair gets an X_2π echo.
inline ExperimentResult zz_gate_fidelity(const LatticeModel& base, Edge pair, double T, bool trivial_echo,
                                         const std::vector<double>& J_over_peak, const LatticeSweepOptions& opt = {},
                                         const std::vector<PulseLibraryEntry>& lib = builtin_library()) {
  const int n = base.n_qubits;
  Assignment a(n);
  for (int q = 0; q < n; ++q) {
    if (q == pair.first || q == pair.second) continue;
    if (base.coupled(q, pair.first) || base.coupled(q, pair.second)) {
      a[q] = library_assignment(GateLabel::kX2pi, T, trivial_echo, lib);
      a[q].angle = 0.0;  // X_2π is −I: identity up to phase
    }
  }
  const double peak = assignment_peak(a);
  const auto rows = parallel_map(J_over_peak.size(), opt.threads, [&](std::size_t k) {
    auto lat = base;
    lat.J = J_over_peak[k] * (peak > 0 ? peak : 1.0);
    lat = with_gate_frame(lat, opt.detuning);
    const LatticeDriveModel model(lat, opt.crosstalk, opt.c3);
    const Operator u = lattice_unitary(model, a, T, opt.per_ns);
    const double phi = 0.5 * lat.J * T;
    return std::array<double, 3>{gate_infidelity(u, zz_target(n, pair.first, pair.second, phi)),
                                 conditional_phase(u, n, pair.first, pair.second), phi};
  });
  ExperimentResult r;
  r.label = "zz_gate_fidelity";
  r.x = {"J_over_Omega_m", "1", J_over_peak};
  Column inf{"infidelity", "1", {}}, ph{"conditional_phase", "rad", {}}, ideal{"target_phase", "rad", {}};
  for (const auto& row : rows) {
    inf.values.push_back(row[0]);
    ph.values.push_back(row[1]);
    ideal.values.push_back(row[2]);
  }
  r.y = {inf, ph, ideal};
  r.metadata = {{"lattice", base.name},
                {"pair", {pair.first, pair.second}},
                {"T", T},
                {"echo", trivial_echo ? "trivial" : "robust"},
                {"peak", peak},
                {"crosstalk", opt.crosstalk}};
  r.created = creation_stamp();
  return r;
}

// ---------------------------------------------------------------------------
// Euler decomposition

struct EulerAngles {
  double alpha = 0.0, beta = 0.0, lambda = 0.0;
};

/// Z_β X_{π/2} Z_α X_{−π/2} Z_λ.
inline Operator euler_compose(const EulerAngles& e) {
  return z_rotation(e.beta) * x_rotation(kPi / 2) * z_rotation(e.alpha) * x_rotation(-kPi / 2) *
         z_rotation(e.lambda);
}

/// min over global phase of ‖U − e^{iχ} V‖_F for 2×2 unitaries.
inline double phase_insensitive_distance(const Operator& u, const Operator& v) {
  const cplx tr = (v.adjoint() * u).trace();
  const cplx phase = std::abs(tr) > 0 ? tr / std::abs(tr) : cplx(1.0);
  return (u - phase * v).norm();
}

/// Angles with Z_β X_{π/2} Z_α X_{−π/2} Z_λ = U up to phase. α ∈ [0, π]; λ = 0 when the
/// split of β ± λ is undetermined.
inline EulerAngles euler_decompose(const Operator& target) {
  if (target.rows() != 2 || target.cols() != 2) throw ValidationError("euler_decompose needs a 2x2 unitary");
  if (unitarity_residual(target) > 1e-8) throw ValidationError("euler_decompose target is not unitary");
  // X_{π/2} Z_α X_{−π/2} = exp(+iα Y/2), so U ∝ Z_β R_y(−α) Z_λ
  const cplx det = target.determinant();
  const Operator su = target / std::sqrt(det);
  const cplx a = su(0, 0), c = su(1, 0);
  EulerAngles e;
  e.alpha = 2.0 * std::atan2(std::abs(c), std::abs(a));
  const double sum = std::abs(a) > 1e-14 ? -2.0 * std::arg(a) : 0.0;   // β + λ
  const double diff = std::abs(c) > 1e-14 ? 2.0 * std::arg(-c) : 0.0;  // β − λ
  if (std::abs(c) <= 1e-14) {
    e.beta = sum;
  } else if (std::abs(a) <= 1e-14) {
    e.beta = diff;
  } else {
    e.beta = 0.5 * (sum + diff);
    e.lambda = 0.5 * (sum - diff);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Entanglement growth

enum class PulseKind { kRobust, kTrivial };
enum class PartitionKind { kEvenOdd, kUpperLower };

inline std::string to_string(PulseKind k) { return k == PulseKind::kRobust ? "robust" : "trivial"; }
inline std::string to_string(PartitionKind p) { return p == PartitionKind::kEvenOdd ? "even-odd" : "upper-lower"; }

struct CircuitSpec {
  int depth = 200;
  double gate_time = 50.0;
  PulseKind pulse_kind = PulseKind::kRobust;
  std::vector<PartitionKind> partitions{PartitionKind::kEvenOdd, PartitionKind::kUpperLower};
  double J = 0.02;
  bool crosstalk = true;
  double steps_per_ns = 10.0;
  std::uint64_t seed = 2024;

  void validate() const {
    if (depth < 1) throw DomainError("circuit depth must be >= 1");
    if (!(gate_time > 0.0)) throw DomainError("gate time must be positive");
    if (J < 0.0) throw DomainError("J must be non-negative");
    if (!(steps_per_ns > 0.0)) throw DomainError("steps_per_ns must be positive");
  }
};

/// Subsystem A: even-index qubits, or the first half (upper row).
inline std::vector<int> partition_subsystem(PartitionKind p, int n) {
  std::vector<int> a;
  for (int q = 0; q < n; ++q)
    if (p == PartitionKind::kEvenOdd ? q % 2 == 0 : q < n / 2) a.push_back(q);
  return a;
}

inline constexpr std::array<GateLabel, 3> kCircuitGates{GateLabel::kXpi, GateLabel::kXpi2, GateLabel::kX2pi};

/// Random gate labels per layer and qubit for one realization.
inline std::vector<std::vector<GateLabel>> random_layers(int depth, int n, std::uint64_t seed) {
  SplitMix rng(seed);
  std::vector<std::vector<GateLabel>> layers(depth, std::vector<GateLabel>(n));
  for (auto& layer : layers)
    for (auto& g : layer) g = kCircuitGates[rng.below(kCircuitGates.size())];
  return layers;
}

struct EntropyTrace {
  std::vector<std::vector<double>> entropy;  // [partition][layer]
  double max_norm_drift = 0.0;
};

/// One realization: S(ρ_A) after every layer for each partition.
inline EntropyTrace entropy_trace(const LatticeStateSimulator& sim, const CircuitSpec& spec,
                                  const std::vector<std::vector<GateLabel>>& layers,
                                  const std::vector<PulseLibraryEntry>& lib) {
  const int n = sim.n_qubits();
  std::array<Drive, 3> drives;
  for (GateLabel g : kCircuitGates) {
    const auto p = find_entry(lib, g, spec.gate_time).params;
    drives[static_cast<int>(g)] =
        spec.pulse_kind == PulseKind::kRobust ? Drive(p) : Drive(trivial_counterpart(p));
  }
  std::vector<std::vector<int>> subsystems;
  for (auto p : spec.partitions) subsystems.push_back(partition_subsystem(p, n));
  EntropyTrace tr;
  tr.entropy.assign(spec.partitions.size(), {});
  StateVector psi = sim.ground();
  DriveSample w(n);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    sim.evolve(
        psi,
        [&](double t) {
          for (int q = 0; q < n; ++q) w[q] = drives[static_cast<int>(layer[q])](t);
          return w;
        },
        spec.gate_time * static_cast<double>(l), spec.gate_time, spec.steps_per_ns);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(psi.norm() - 1.0));
    for (std::size_t p = 0; p < subsystems.size(); ++p)
      tr.entropy[p].push_back(entanglement_entropy(psi, n, subsystems[p]));
  }
  return tr;
}

/// Mean and standard error of S(ρ_A) per layer over realizations; one column pair per partition.
inline ExperimentResult entropy_growth(const LatticeModel& base, const CircuitSpec& spec, int realizations,
                                       int threads = 1,
                                       const std::vector<PulseLibraryEntry>& lib = builtin_library()) {
  spec.validate();
  if (realizations < 1) throw DomainError("need at least one realization");
  auto lat = base;
  lat.J = spec.J;
  lat = with_gate_frame(lat);
  const LatticeStateSimulator sim(lat, spec.crosstalk);
  const int n = lat.n_qubits;
  const auto traces = parallel_map(static_cast<std::size_t>(realizations), threads, [&](std::size_t r) {
    return entropy_trace(sim, spec, random_layers(spec.depth, n, derive_seed(spec.seed, r)), lib);
  });
  ExperimentResult res;
  res.label = "entropy_growth";
  std::vector<double> layer(spec.depth);
  for (int l = 0; l < spec.depth; ++l) layer[l] = l + 1;
  res.x = {"layer", "1", layer};
  double drift = 0.0;
  for (const auto& t : traces) drift = std::max(drift, t.max_norm_drift);
  for (std::size_t p = 0; p < spec.partitions.size(); ++p) {
    Column mean{"S_" + to_string(spec.partitions[p]), "nat", std::vector<double>(spec.depth, 0.0)};
    Column se{"S_" + to_string(spec.partitions[p]) + "_stderr", "nat", std::vector<double>(spec.depth, 0.0)};
    for (int l = 0; l < spec.depth; ++l) {
      for (const auto& t : traces) mean.values[l] += t.entropy[p][l] / realizations;
      double var = 0.0;
      for (const auto& t : traces) var += std::pow(t.entropy[p][l] - mean.values[l], 2);
      se.values[l] = realizations > 1 ? std::sqrt(var / (realizations - 1) / realizations) : 0.0;
    }
    res.y.push_back(mean);
    res.y.push_back(se);
  }
  nlohmann::json parts = nlohmann::json::array();
  for (auto p : spec.partitions) parts.push_back(to_string(p));
  res.metadata = {{"lattice", to_json(lat)},
                  {"depth", spec.depth},
                  {"gate_time", spec.gate_time},
                  {"pulse_kind", to_string(spec.pulse_kind)},
                  {"partitions", parts},
                  {"crosstalk", spec.crosstalk},
                  {"steps_per_ns", spec.steps_per_ns},
                  {"seed", spec.seed},
                  {"realizations", realizations},
                  {"max_norm_drift", drift}};
  res.created = creation_stamp();
  return res;
}

}  // namespace spinctrl
