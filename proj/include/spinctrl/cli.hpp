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

// Command-line front end: config validation against the shipped JSON schemas,
// command dispatch, output directories and manifests.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinctrl/errgeo.hpp"
#include "spinctrl/experiments.hpp"
#include "spinctrl/noise.hpp"
#include "spinctrl/optimize.hpp"
#include "spinctrl/pulse.hpp"

namespace spinctrl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"synthesize", "sweep-coupling", "sweep-amplitude", "noise-1f",
                                          "multiqubit", "zz-gate",        "entropy"};
  return c;
}

/// FNV-1a 64-bit, hex.
inline std::string fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Schema validation (the subset of JSON Schema used by schemas/*.json)

struct Violation {
  std::string pointer;
  std::string message;
};

inline std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

inline bool type_matches(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer() || (v.is_number_float() && std::trunc(v.get<double>()) == v.get<double>());
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  return false;
}

inline void validate_schema(const json& schema, const json& v, const std::string& ptr, std::vector<Violation>& out) {
  const std::string where = ptr.empty() ? "/" : ptr;
  if (schema.contains("const") && v != schema["const"]) {
    out.push_back({where, "must equal " + schema["const"].dump()});
    return;
  }
  if (schema.contains("enum")) {
    bool ok = false;
    std::string allowed;
    for (const auto& e : schema["enum"]) {
      ok = ok || v == e;
      allowed += (allowed.empty() ? "" : ", ") + (e.is_string() ? e.get<std::string>() : e.dump());
    }
    if (!ok) {
      out.push_back({where, (v.is_string() ? "'" + v.get<std::string>() + "'" : v.dump()) +
                                " is not allowed; must be one of {" + allowed + "}"});
      return;
    }
  }
  if (schema.contains("type") && !type_matches(v, schema["type"].get<std::string>())) {
    out.push_back({where, "must be of type " + schema["type"].get<std::string>()});
    return;
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (schema.contains("minimum") && x < schema["minimum"].get<double>())
      out.push_back({where, "must be >= " + schema["minimum"].dump()});
    if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>())
      out.push_back({where, "must be > " + schema["exclusiveMinimum"].dump()});
    if (schema.contains("maximum") && x > schema["maximum"].get<double>())
      out.push_back({where, "must be <= " + schema["maximum"].dump()});
  }
  if (v.is_array()) {
    if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
      out.push_back({where, "needs at least " + schema["minItems"].dump() + " items"});
    if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>())
      out.push_back({where, "allows at most " + schema["maxItems"].dump() + " items"});
    if (schema.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) validate_schema(schema["items"], v[i], ptr + "/" + std::to_string(i), out);
  }
  if (v.is_object()) {
    if (schema.contains("required"))
      for (const auto& r : schema["required"])
        if (!v.contains(r.get<std::string>()))
          out.push_back({ptr + "/" + escape_pointer(r.get<std::string>()), "is required"});
    const json props = schema.value("properties", json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      const std::string child = ptr + "/" + escape_pointer(it.key());
      if (props.contains(it.key())) validate_schema(props[it.key()], it.value(), child, out);
      else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false)
        out.push_back({child, "is not a recognised field"});
    }
  }
}

/// Directory holding <command>.schema.json.
inline fs::path schema_dir() {
  if (const char* e = std::getenv("SPINCTRL_SCHEMA_DIR")) return e;
#ifdef SPINCTRL_SOURCE_DIR
  return fs::path(SPINCTRL_SOURCE_DIR) / "schemas";
#else
  return "schemas";
#endif
}

inline json load_schema(const std::string& command) {
  return json::parse(read_file(schema_dir() / (command + ".schema.json")));
}

/// Command named by the "schema" field ("spinctrl.<command>/1"), or empty.
inline std::string command_of(const json& cfg) {
  if (!cfg.is_object() || !cfg.contains("schema") || !cfg["schema"].is_string()) return {};
  const std::string s = cfg["schema"].get<std::string>();
  for (const auto& c : commands())
    if (s == "spinctrl." + c + "/1") return c;
  return {};
}

inline bool lattice_known(const std::string& name) {
  return name == "chain4" || name == "honeycomb6" || name == "grid10";
}

/// Checks the schema cannot express.
inline void semantic_checks(const std::string& cmd, const json& cfg, std::vector<Violation>& out) {
  if (cmd == "sweep-coupling") {
    const bool a = cfg.contains("J"), b = cfg.contains("J_over_Omega_m");
    if (a == b) out.push_back({"/J", "give exactly one of J or J_over_Omega_m"});
  }
  if (cmd == "noise-1f" && cfg.contains("noise")) {
    const auto& n = cfg["noise"];
    if (n.contains("f_min_khz") && n.contains("f_max_khz") && n["f_min_khz"].is_number() &&
        n["f_max_khz"].is_number() && n["f_max_khz"].get<double>() <= n["f_min_khz"].get<double>())
      out.push_back({"/noise/f_max_khz", "must exceed f_min_khz"});
  }
  if ((cmd == "multiqubit" || cmd == "zz-gate") && cfg.contains("lattice") && cfg["lattice"].is_string() &&
      lattice_known(cfg["lattice"].get<std::string>())) {
    const auto lat = builtin_lattice(cfg["lattice"].get<std::string>());
    if (cmd == "multiqubit" && cfg.contains("assignment") && cfg["assignment"].is_array()) {
      std::vector<bool> seen(lat.n_qubits, false);
      for (std::size_t i = 0; i < cfg["assignment"].size(); ++i) {
        const auto& a = cfg["assignment"][i];
        if (!a.is_object() || !a.contains("qubit") || !a["qubit"].is_number_integer()) continue;
        const int q = a["qubit"].get<int>();
        const std::string p = "/assignment/" + std::to_string(i) + "/qubit";
        if (q < 0 || q >= lat.n_qubits) out.push_back({p, "qubit outside the " + lat.name + " lattice"});
        else if (seen[q]) out.push_back({p, "qubit assigned twice"});
        else seen[q] = true;
      }
    }
    if (cmd == "zz-gate" && cfg.contains("pair") && cfg["pair"].is_array() && cfg["pair"].size() == 2 &&
        cfg["pair"][0].is_number_integer() && cfg["pair"][1].is_number_integer()) {
      const int i = cfg["pair"][0].get<int>(), j = cfg["pair"][1].get<int>();
      if (i < 0 || j < 0 || i >= lat.n_qubits || j >= lat.n_qubits || !lat.coupled(i, j))
        out.push_back({"/pair", "pair is not a bond of " + lat.name});
    }
  }
}

inline std::vector<Violation> validate_config(const json& cfg) {
  std::vector<Violation> out;
  if (!cfg.is_object()) return {{"/", "config must be a JSON object"}};
  const std::string cmd = command_of(cfg);
  if (cmd.empty()) {
    std::string allowed;
    for (const auto& c : commands()) allowed += (allowed.empty() ? "" : ", ") + ("spinctrl." + c + "/1");
    return {{"/schema", "missing or unknown schema; must be one of {" + allowed + "}"}};
  }
  validate_schema(load_schema(cmd), cfg, "", out);
  semantic_checks(cmd, cfg, out);
  return out;
}

// ---------------------------------------------------------------------------
// Outputs

class OutputDir {
 public:
  OutputDir(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

  /// Fails before any work starts if a planned file exists and force is off.
  void claim(const std::vector<std::string>& names) const {
    for (const auto& n : names)
      if (fs::exists(dir_ / n) && !force_)
        throw ValidationError("refusing to overwrite " + (dir_ / n).string() + " (use --force)");
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write " + (dir_ / name).string());
    out << content;
    outputs_.push_back({{"path", name}, {"bytes", content.size()}, {"fnv1a64", fnv1a64(content)}});
  }

  void write_result(const std::string& stem, const ExperimentResult& r) {
    write(stem + ".csv", to_csv(r));
    write(stem + ".json", sidecar(r).dump(2) + "\n");
  }

  void write_manifest(const std::string& command, const json& config, const std::string& config_text,
                      const std::string& config_path) {
    json m{{"command", command},
           {"created", creation_stamp()},
           {"inputs", json::array({{{"path", fs::path(config_path).filename().string()},
                                    {"fnv1a64", fnv1a64(config_text)}}})},
           {"resolved_config", config},
           {"outputs", outputs_}};
    std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    out << m.dump(2) << "\n";
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  bool force_;
  json outputs_ = json::array();
};

struct RunOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool force = false;
  bool quiet = false;
};

struct Summary {
  std::string metric;
  double value = 0.0;
  std::string note = {};
};

// ---------------------------------------------------------------------------
// Config helpers

inline std::vector<std::string> kinds_of(const json& j) {
  return j.value("kinds", std::vector<std::string>{"robust", "trivial"});
}

inline PulseParams pulse_of(const json& p) {
  const auto gate = parse_gate_label(p.at("gate").get<std::string>());
  if (!gate) throw DomainError(std::string("gate must be one of ") + kAllowedGateLabels);
  const auto lib = p.contains("library") ? load_library(p["library"].get<std::string>()) : builtin_library();
  return find_entry(lib, *gate, p.at("T_ns").get<double>()).params;
}

inline double gate_angle(const json& p) { return rotation_angle(*parse_gate_label(p.at("gate").get<std::string>())); }

inline std::string numbers(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + format_double(x);
  return s;
}

// ---------------------------------------------------------------------------
// Commands. Each plans its file names, then runs.

inline std::vector<std::string> planned_outputs(const std::string& cmd, const json& cfg) {
  std::vector<std::string> out;
  const auto with_sidecar = [&](const std::string& stem) {
    out.push_back(stem + ".csv");
    out.push_back(stem + ".json");
  };
  if (cmd == "synthesize") {
    out.push_back("synthesis.json");
    with_sidecar("cost_history");
  } else if (cmd == "sweep-amplitude") {
    with_sidecar("amplitude");
  } else if (cmd == "noise-1f") {
    with_sidecar("psd");
    with_sidecar("ramsey");
    if (cfg.contains("gate"))
      for (const auto& k : kinds_of(cfg["gate"])) with_sidecar("fidelity_1f_" + k);
  } else {
    const std::string stem = cmd == "sweep-coupling" ? "coupling" : cmd == "zz-gate" ? "zz_gate" : cmd;
    for (const auto& k : kinds_of(cfg)) with_sidecar(stem + "_" + k);
  }
  out.push_back("manifest.json");
  return out;
}

inline Summary run_synthesize(const json& cfg, std::uint64_t seed, int threads, OutputDir& out) {
  OptimizerConfig oc;
  const json o = cfg.value("optimizer", json::object());
  oc.eta = o.value("eta", oc.eta);
  oc.max_iters = o.value("max_iters", oc.max_iters);
  oc.step_size = o.value("step_size", oc.step_size);
  oc.grad_epsilon = o.value("grad_epsilon", oc.grad_epsilon);
  oc.norm_smoothing = o.value("norm_smoothing", oc.norm_smoothing);
  oc.amplitude_cap = o.value("amplitude_cap", oc.amplitude_cap);
  oc.harmonics = o.value("harmonics", oc.harmonics);
  oc.steps_per_ns = o.value("steps_per_ns", oc.steps_per_ns);
  oc.method = o.value("method", std::string("bfgs")) == "bfgs" ? SearchMethod::kBfgs : SearchMethod::kGradientDescent;
  const json model = cfg.value("model", json::object());
  oc.reference_J = model.value("J", oc.reference_J);
  oc.seed = seed;
  oc.threads = threads;
  const TwoQubitModel m{0.0, model.value("dEz", kReferenceDeltaEz), oc.reference_J};
  const auto gate = *parse_gate_label(cfg.at("gate").get<std::string>());
  const auto r = synthesize(gate, cfg.at("T_ns").get<double>(), oc, m);
  out.write("synthesis.json", to_json(r, oc).dump(2) + "\n");
  ExperimentResult h;
  h.label = "cost_history";
  for (std::size_t i = 0; i < r.cost_history.size(); ++i) h.x.values.push_back(static_cast<double>(i));
  h.x.name = "iteration";
  h.x.unit = "1";
  h.y.push_back({"cost", "1", r.cost_history});
  h.metadata = {{"config", cfg}, {"seed", seed}, {"converged", r.converged}, {"stop_reason", r.stop_reason}};
  h.created = creation_stamp();
  out.write_result("cost_history", h);
  return {"final_cost", r.final_cost};
}

inline Summary run_sweep_coupling(const json& cfg, int threads, OutputDir& out) {
  const auto base = pulse_of(cfg.at("pulse"));
  const double angle = gate_angle(cfg["pulse"]);
  const auto p = cfg.value("calibrate_area", true) ? calibrate_area(base, angle) : base;
  const double dEz = cfg.value("model", json::object()).value("dEz", kReferenceDeltaEz);
  const double per_ns = cfg.value("steps_per_ns", kStepsPerNs);
  Summary s{"infidelity_last", 0.0};
  for (const auto& kind : kinds_of(cfg)) {
    const Drive d = kind == "robust" ? Drive(p) : Drive(trivial_counterpart(p));
    std::vector<double> ratios;
    if (cfg.contains("J_over_Omega_m")) {
      ratios = cfg["J_over_Omega_m"].get<std::vector<double>>();
    } else {
      const double peak = peak_amplitude(d);
      for (double J : cfg.at("J").get<std::vector<double>>()) ratios.push_back(J / peak);
    }
    auto r = fidelity_vs_coupling(d, dEz, ratios, angle, threads, per_ns);
    r.metadata["config"] = cfg;
    r.metadata["kind"] = kind;
    if (cfg.contains("fit_range")) {
      const auto fr = cfg["fit_range"].get<std::vector<double>>();
      r.metadata["loglog_slope"] = loglog_slope(r.x.values, r.y[0].values, fr[0], fr[1]);
    }
    out.write_result("coupling_" + kind, r);
    s.value = r.y[0].values.back();
    s.metric = "infidelity_last_" + kind;
  }
  return s;
}

inline Summary run_sweep_amplitude(const json& cfg, OutputDir& out) {
  const auto base = pulse_of(cfg.at("pulse"));
  const json model = cfg.value("model", json::object());
  const TwoQubitModel m{0.0, model.value("dEz", kReferenceDeltaEz), model.value("J", 0.02)};
  const auto scales = cfg.at("scales").get<std::vector<double>>();
  const double per_ns = cfg.value("steps_per_ns", kStepsPerNs);
  ExperimentResult r;
  r.label = "sweep_amplitude";
  r.x = {"scale", "1", scales};
  Summary s{"min_D_robust", 0.0};
  for (const auto& kind : kinds_of(cfg)) {
    const auto pts = kind == "robust" ? amplitude_sweep_distance(base, m, scales, per_ns)
                                      : amplitude_sweep_distance(trivial_counterpart(base), m, scales, per_ns);
    Column peak{"peak_" + kind, "rad/ns", {}}, d{"D_" + kind, "ns", {}};
    for (const auto& p : pts) {
      peak.values.push_back(p.peak);
      d.values.push_back(p.distance);
    }
    if (kind == "robust") s.value = *std::min_element(d.values.begin(), d.values.end());
    r.y.push_back(peak);
    r.y.push_back(d);
  }
  r.metadata = {{"config", cfg}};
  r.created = creation_stamp();
  out.write_result("amplitude", r);
  return s;
}

inline OneOverFConfig noise_of(const json& cfg, std::uint64_t seed) {
  OneOverFConfig n;
  const json j = cfg.value("noise", json::object());
  n.gamma = j.value("gamma", n.gamma);
  n.f_min_khz = j.value("f_min_khz", n.f_min_khz);
  n.f_max_khz = j.value("f_max_khz", n.f_max_khz);
  n.n_components = j.value("n_components", n.n_components);
  n.sampling = j.value("sampling", std::string("uniform")) == "uniform" ? FrequencySampling::kUniform
                                                                         : FrequencySampling::kLogUniform;
  n.amplitudes = j.value("amplitudes", std::string("pink")) == "pink" ? AmplitudeLaw::kPink : AmplitudeLaw::kFlat;
  n.seed = seed;
  return n;
}

inline Summary run_noise(const json& cfg, std::uint64_t seed, int threads, OutputDir& out) {
  auto n = noise_of(cfg, seed);
  const json rj = cfg.value("ramsey", json::object());
  const int rr = rj.value("realizations", 1000);
  const double span = rj.value("span_us", 20.0);
  const int points = rj.value("points", 81);
  json calib = nullptr;
  if (cfg.contains("calibrate_t2_us")) {
    const double g0 = n.gamma;
    n.gamma = calibrate_gamma(n, cfg["calibrate_t2_us"].get<double>(), rr, span, points, threads);
    calib = {{"gamma_nominal", g0}, {"gamma_calibrated", n.gamma}, {"target_t2_us", cfg["calibrate_t2_us"]}};
  }
  const json pj = cfg.value("psd", json::object());
  PsdOptions po;
  po.sample_rate_hz = pj.value("sample_rate_hz", po.sample_rate_hz);
  po.window_s = pj.value("window_s", po.window_s);
  po.threads = threads;
  const auto psd = psd_estimate(n, pj.value("realizations", 100), po);
  ExperimentResult pr;
  pr.label = "psd";
  pr.x = {"frequency", "Hz", psd.freq_hz};
  pr.y.push_back({"psd", "Hz^2/Hz", psd.psd});
  pr.metadata = {{"config", cfg},     {"seed", seed},           {"gamma", n.gamma},
                 {"slope", psd.slope}, {"band_power", psd.band_power}, {"time_variance", psd.time_variance},
                 {"warnings", psd.warnings}, {"calibration", calib}};
  pr.created = creation_stamp();
  out.write_result("psd", pr);

  const auto ram = ramsey_t2(n, ramsey_delays(span, points), rr, threads);
  ExperimentResult rres;
  rres.label = "ramsey";
  std::vector<double> us;
  for (double d : ram.delays_ns) us.push_back(d * 1e-3);
  rres.x = {"delay", "us", us};
  rres.y.push_back({"coherence", "1", ram.coherence});
  rres.metadata = {{"config", cfg}, {"seed", seed}, {"gamma", n.gamma}, {"t2_us", ram.t2_us}, {"fit_rms", ram.fit_rms}};
  rres.created = creation_stamp();
  out.write_result("ramsey", rres);

  if (cfg.contains("gate")) {
    const auto& g = cfg["gate"];
    const auto p = calibrate_area(pulse_of(g.at("pulse")), gate_angle(g["pulse"]));
    for (const auto& kind : kinds_of(g)) {
      const Drive d = kind == "robust" ? Drive(p) : Drive(trivial_counterpart(p));
      auto r = fidelity_under_1f(d, g.value("dEz", kReferenceDeltaEz), n,
                                 g.at("J_over_Omega_m").get<std::vector<double>>(), gate_angle(g["pulse"]),
                                 g.value("realizations", 100), threads, g.value("steps_per_ns", kStepsPerNs));
      r.metadata["config"] = cfg;
      r.metadata["kind"] = kind;
      out.write_result("fidelity_1f_" + kind, r);
    }
  }
  return {"t2_us", ram.t2_us, "psd slope " + format_double(psd.slope) + ", gamma " + format_double(n.gamma)};
}

inline LatticeSweepOptions lattice_options(const json& cfg, int threads) {
  LatticeSweepOptions o;
  o.crosstalk = cfg.value("crosstalk", true);
  o.c3 = cfg.value("c3", 0.0);
  o.per_ns = cfg.value("steps_per_ns", kStepsPerNs);
  o.detuning = cfg.value("detuning", kReferenceDeltaEz);
  o.threads = threads;
  return o;
}

inline Summary run_multiqubit(const json& cfg, int threads, OutputDir& out) {
  const auto lat = builtin_lattice(cfg.at("lattice").get<std::string>());
  const double T = cfg.value("T_ns", 50.0);
  const auto opt = lattice_options(cfg, threads);
  Summary s{"", 0.0};
  for (const auto& kind : kinds_of(cfg)) {
    Assignment a(lat.n_qubits);
    for (const auto& e : cfg.at("assignment"))
      a[e.at("qubit").get<int>()] =
          library_assignment(*parse_gate_label(e.at("gate").get<std::string>()), T, kind == "trivial");
    auto r = parallel_gate_fidelity(lat, a, cfg.at("J_over_Omega_m").get<std::vector<double>>(), opt);
    for (const auto& w : r.metadata["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
    r.metadata["config"] = cfg;
    r.metadata["kind"] = kind;
    out.write_result("multiqubit_" + kind, r);
    s = {"infidelity_last_" + kind, r.y[0].values.back()};
  }
  return s;
}

inline Summary run_zz(const json& cfg, int threads, OutputDir& out) {
  const auto lat = builtin_lattice(cfg.at("lattice").get<std::string>());
  const auto pair = cfg.at("pair").get<std::vector<int>>();
  Summary s{"", 0.0};
  for (const auto& kind : kinds_of(cfg)) {
    auto r = zz_gate_fidelity(lat, {pair[0], pair[1]}, cfg.value("T_ns", 50.0), kind == "trivial",
                              cfg.at("J_over_Omega_m").get<std::vector<double>>(), lattice_options(cfg, threads));
    r.metadata["config"] = cfg;
    out.write_result("zz_gate_" + kind, r);
    s = {"infidelity_last_" + kind, r.y[0].values.back()};
  }
  return s;
}

inline Summary run_entropy(const json& cfg, std::uint64_t seed, int threads, OutputDir& out) {
  const auto lat = builtin_lattice(cfg.at("lattice").get<std::string>());
  CircuitSpec spec;
  spec.depth = cfg.value("depth", spec.depth);
  spec.J = cfg.value("J", spec.J);
  spec.gate_time = cfg.value("gate_time", spec.gate_time);
  spec.crosstalk = cfg.value("crosstalk", spec.crosstalk);
  spec.steps_per_ns = cfg.value("steps_per_ns", spec.steps_per_ns);
  spec.seed = seed;
  if (cfg.contains("partitions")) {
    spec.partitions.clear();
    for (const auto& p : cfg["partitions"])
      spec.partitions.push_back(p == "even-odd" ? PartitionKind::kEvenOdd : PartitionKind::kUpperLower);
  }
  Summary s{"", 0.0};
  for (const auto& kind : kinds_of(cfg)) {
    spec.pulse_kind = kind == "robust" ? PulseKind::kRobust : PulseKind::kTrivial;
    auto r = entropy_growth(lat, spec, cfg.value("realizations", 10), threads);
    r.metadata["config"] = cfg;
    out.write_result("entropy_" + kind, r);
    s = {"final_S_" + kind, r.y[0].values.back()};
  }
  return s;
}

inline void print_violations(const std::string& path, const std::vector<Violation>& v) {
  for (const auto& x : v) std::cerr << path << ": " << x.pointer << ": " << x.message << "\n";
}

/// Loads, validates and runs one config. Exit 0, 2 (config/usage) or 3 (numerical failure).
inline int run(const std::string& command, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  json cfg;
  std::string text;
  try {
    text = read_file(opt.config_path);
    cfg = json::parse(text);
  } catch (const std::exception& e) {
    std::cerr << opt.config_path << ": " << e.what() << "\n";
    return kExitConfig;
  }
  std::vector<Violation> v;
  try {
    v = validate_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "schema: " << e.what() << "\n";
    return kExitConfig;
  }
  if (v.empty() && command_of(cfg) != command)
    v.push_back({"/schema", "config is for '" + command_of(cfg) + "', not '" + command + "'"});
  if (!v.empty()) {
    print_violations(opt.config_path, v);
    return kExitConfig;
  }
  const std::uint64_t seed = opt.seed.value_or(cfg.value("seed", std::uint64_t{42}));
  if (cfg.contains("seed") || opt.seed) cfg["seed"] = seed;
  const int threads = resolve_threads(opt.threads);
  OutputDir out(opt.out_dir, opt.force);
  try {
    out.claim(planned_outputs(command, cfg));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  Summary s;
  try {
    if (command == "synthesize") s = run_synthesize(cfg, seed, threads, out);
    else if (command == "sweep-coupling") s = run_sweep_coupling(cfg, threads, out);
    else if (command == "sweep-amplitude") s = run_sweep_amplitude(cfg, out);
    else if (command == "noise-1f") s = run_noise(cfg, seed, threads, out);
    else if (command == "multiqubit") s = run_multiqubit(cfg, threads, out);
    else if (command == "zz-gate") s = run_zz(cfg, threads, out);
    else if (command == "entropy") s = run_entropy(cfg, seed, threads, out);
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    json dump{{"command", command}, {"error", e.what()}, {"config", cfg}};
    if (const auto* fe = dynamic_cast<const FitError*>(&e)) dump["fit_data"] = {{"x", fe->x()}, {"y", fe->y()}};
    std::ofstream(out.path() / "diagnostic.json") << dump.dump(2) << "\n";
    std::cerr << "numerical failure: " << e.what() << " (details in " << (out.path() / "diagnostic.json").string()
              << ")\n";
    return kExitNumerical;
  }
  out.write_manifest(command, cfg, text, opt.config_path);
  if (opt.quiet) return kExitOk;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!s.note.empty()) std::printf("%s\n", s.note.c_str());
  std::printf("%s: %s = %s; wall %.2f s; %s\n", command.c_str(), s.metric.c_str(), format_double(s.value).c_str(),
              wall, out.path().string().c_str());
  return kExitOk;
}

/// `library list`: one line per entry.
inline void print_library(const std::vector<PulseLibraryEntry>& lib, std::ostream& os) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-5s %7s %14s %14s\n", "gate", "T_ns", "Omega_m/dEz", "peak_rad_ns");
  os << buf;
  for (const auto& e : lib) {
    std::snprintf(buf, sizeof buf, "%-5s %7.1f %14.4f %14.4f\n", to_string(e.gate).c_str(), e.params.T,
                  e.relative_amplitude, peak_amplitude(e.params));
    os << buf;
  }
}

}  // namespace spinctrl::cli
