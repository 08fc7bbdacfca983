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

// Robust pulse synthesis: gradient descent on C = (1 − F) + Σ ε_μ ‖r_μ(T)‖ over the
// Fourier coefficients, with the pulse rescaled to the amplitude cap before every
// evaluation.

#pragma once

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "spinctrl/errgeo.hpp"
#include "spinctrl/model.hpp"
#include "spinctrl/parallel.hpp"
#include "spinctrl/propagate.hpp"
#include "spinctrl/pulse.hpp"

namespace spinctrl {

/// Search direction: steepest descent, or BFGS quasi-Newton on the same gradients.
enum class SearchMethod { kGradientDescent, kBfgs };

struct OptimizerConfig {
  double eta = 1e-4;
  int max_iters = 500;
  double step_size = 1e-3;
  double grad_epsilon = 1e-6;
  double amplitude_cap = 0.5;    // u, rad/ns
  int harmonics = 5;
  std::uint64_t seed = 42;
  double reference_J = 0.02;     // sets ε_1 = J/4 and ε_{2,3} = tanθ/2 in the cost
  double norm_smoothing = 0.0;   // δ: descend on Σ ε (√(‖r‖² + δ²) − δ) instead of Σ ε ‖r‖
  double steps_per_ns = kStepsPerNs;
  double armijo_c = 1e-4;
  int max_shrinks = 20;
  int threads = 1;
  SearchMethod method = SearchMethod::kBfgs;

  void validate() const {
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    if (max_iters < 1) throw DomainError("max_iters must be >= 1");
    if (!(step_size > 0.0)) throw DomainError("step_size must be positive");
    if (!(grad_epsilon >= 1e-8 && grad_epsilon <= 1e-4)) throw DomainError("grad_epsilon must lie in [1e-8, 1e-4]");
    if (amplitude_cap < 0.0) throw DomainError("amplitude cap must be non-negative");
    if (harmonics < 0) throw DomainError("harmonics must be >= 0");
    if (reference_J < 0.0) throw DomainError("reference J must be non-negative");
    if (!(norm_smoothing >= 0.0)) throw DomainError("norm smoothing must be non-negative");
  }
};

/// Noiseless X-drive evolution and the three channel end points, using
/// U0(t) = exp(−i φ(t) X / 2) with φ the midpoint-rule area; U0†ZU0 = cos φ Z + sin φ Y.
/// Equivalent to drive_trajectory + channel_curves, without storing the trajectory.
struct XDriveSummary {
  Operator u;                           // U0(T)
  std::array<Eigen::Vector3d, 3> r;     // (X, Y, Z) components per channel
  std::array<double, 3> epsilon{};

  double distance() const { return r[0].norm() + r[1].norm() + r[2].norm(); }
  double weighted_distance(double delta = 0.0) const {
    double sum = 0.0;
    for (int mu = 0; mu < 3; ++mu)
      sum += std::abs(epsilon[mu]) * (delta > 0.0 ? std::hypot(r[mu].norm(), delta) - delta : r[mu].norm());
    return sum;
  }
};

template <Waveform W>
XDriveSummary x_drive_summary(const W& pulse, const TwoQubitModel& m, double per_ns = kStepsPerNs) {
  const auto grid = TimeGrid::with_resolution(pulse.duration(), per_ns);
  const double dt = grid.dt();
  const double w = m.dressed_splitting();
  XDriveSummary s;
  s.epsilon = {0.25 * m.J, 0.5 * m.tan_theta(), 0.5 * m.tan_theta()};
  for (auto& r : s.r) r.setZero();
  double phi = 0.0;
  const auto integrand = [&](double t, double ph, std::array<Eigen::Vector3d, 3>& f) {
    const double om = pulse(std::clamp(t, 0.0, pulse.duration()));
    const Eigen::Vector3d dir(0.0, std::sin(ph), std::cos(ph));
    f[0] = dir;
    f[1] = om * std::cos(w * t) * dir;
    f[2] = -om * std::sin(w * t) * dir;
  };
  std::array<Eigen::Vector3d, 3> prev, next;
  integrand(grid.node(0), 0.0, prev);
  for (int k = 0; k < grid.steps; ++k) {
    phi += pulse(grid.midpoint(k)) * dt;
    integrand(grid.node(k + 1), phi, next);
    for (int mu = 0; mu < 3; ++mu) s.r[mu] += 0.5 * dt * (prev[mu] + next[mu]);
    prev = next;
  }
  s.u = x_rotation(phi);
  return s;
}

struct CostBreakdown {
  double cost = 0.0;
  double fidelity = 0.0;
  double distance = 0.0;           // unweighted D
  double weighted_distance = 0.0;  // Σ ε‖r‖
  double objective = 0.0;          // cost with smoothed norms; equals cost when δ = 0
  PulseParams rescaled;
};

/// Model used by the cost: ΔE_z from `model`, J fixed at the reference value.
inline TwoQubitModel cost_model(const TwoQubitModel& model, const OptimizerConfig& cfg) {
  return {model.Ez, model.dEz, cfg.reference_J};
}

/// C = (1 − F) + ε-weighted D for the pulse rescaled to the amplitude cap.
inline CostBreakdown evaluate_cost(const PulseParams& params, const Operator& target,
                                   const TwoQubitModel& model, const OptimizerConfig& cfg) {
  params.validate();
  CostBreakdown out;
  const TwoQubitModel m = cost_model(model, cfg);
  const bool idle = cfg.amplitude_cap == 0.0 || is_zero_pulse(params);
  out.rescaled = idle ? scale_amplitude(params, 0.0) : rescale_pulse(params, cfg.amplitude_cap);
  const auto s = x_drive_summary(out.rescaled, m, cfg.steps_per_ns);
  out.fidelity = gate_fidelity(s.u, target);
  out.distance = s.distance();
  out.weighted_distance = s.weighted_distance();
  out.cost = gate_infidelity(s.u, target) + out.weighted_distance;
  out.objective = cfg.norm_smoothing > 0.0
                      ? gate_infidelity(s.u, target) + s.weighted_distance(cfg.norm_smoothing)
                      : out.cost;
  return out;
}

inline double cost(const PulseParams& params, const Operator& target, const TwoQubitModel& model,
                   const OptimizerConfig& cfg) {
  return evaluate_cost(params, target, model, cfg).cost;
}

/// Flat parameter vector [a_0..a_n, φ_1..φ_n].
inline std::vector<double> flatten(const PulseParams& p) {
  std::vector<double> x = p.a;
  x.insert(x.end(), p.phi.begin(), p.phi.end());
  return x;
}

inline PulseParams unflatten(const std::vector<double>& x, double T, int harmonics) {
  PulseParams p;
  p.T = T;
  p.a.assign(x.begin(), x.begin() + harmonics + 1);
  p.phi.assign(x.begin() + harmonics + 1, x.end());
  return p;
}

/// Central finite-difference gradient of any scalar function of a flat vector.
template <class F>
std::vector<double> finite_difference_gradient(const F& f, const std::vector<double>& x, double h,
                                               int threads = 1) {
  return parallel_map(x.size(), threads, [&](std::size_t i) {
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    return (f(xp) - f(xm)) / (2.0 * h);
  });
}

/// ∂C/∂(a_j, φ_j) by central differences with step grad_epsilon.
inline std::vector<double> gradient(const PulseParams& params, const Operator& target,
                                    const TwoQubitModel& model, const OptimizerConfig& cfg) {
  const int n = params.harmonics();
  const double T = params.T;
  return finite_difference_gradient(
      [&](const std::vector<double>& x) { return cost(unflatten(x, T, n), target, model, cfg); },
      flatten(params), cfg.grad_epsilon, cfg.threads);
}

struct SynthesisResult {
  std::string gate;
  double target_angle = 0.0;
  PulseParams initial;
  PulseParams params;           // rescaled to the cap
  std::vector<double> cost_history;  // objective per accepted iterate
  double final_cost = 0.0;
  double final_F = 0.0;
  double final_D = 0.0;
  double final_weighted_D = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string stop_reason;
};

/// Seeded start: a_0 sets the area near the target angle, harmonics and phases in ±0.1.
inline PulseParams initial_pulse(double angle, double T, int harmonics, std::uint64_t seed) {
  SplitMix rng(seed);
  PulseParams p;
  p.T = T;
  p.a.push_back(angle * kPi / (2.0 * T));
  for (int j = 0; j < harmonics; ++j) p.a.push_back(rng.uniform(-0.1, 0.1));
  for (int j = 0; j < harmonics; ++j) p.phi.push_back(rng.uniform(-0.1, 0.1));
  return p;
}

/// Descent with Armijo backtracking from `start`; BFGS directions unless cfg.method says otherwise.
inline SynthesisResult synthesize_from(const PulseParams& start, double angle, const TwoQubitModel& model,
                                       const OptimizerConfig& cfg,
                                       const std::function<void(int, double)>& progress = {}) {
  cfg.validate();
  start.validate();
  const Operator target = x_rotation(angle);
  const int n = start.harmonics();
  const double T = start.T;
  const auto f = [&](const std::vector<double>& x) {
    return evaluate_cost(unflatten(x, T, n), target, model, cfg).objective;
  };
  const auto true_cost = [&](const std::vector<double>& x) {
    return cfg.norm_smoothing > 0.0 ? cost(unflatten(x, T, n), target, model, cfg) : f(x);
  };

  SynthesisResult res;
  res.target_angle = angle;
  res.initial = start;
  std::vector<double> x = flatten(start);
  double c = f(x);
  double c_true = true_cost(x);
  res.cost_history.push_back(c);
  res.stop_reason = "max_iters";
  const auto dim = static_cast<Eigen::Index>(x.size());
  const auto as_vec = [](const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  const bool bfgs = cfg.method == SearchMethod::kBfgs;
  Eigen::MatrixXd h = cfg.step_size * Eigen::MatrixXd::Identity(dim, dim);  // inverse-Hessian estimate
  bool h_scaled = false;
  double step = 1.0;
  Eigen::VectorXd g = as_vec(finite_difference_gradient(f, x, cfg.grad_epsilon, cfg.threads));
  for (int it = 0; it < cfg.max_iters; ++it) {
    res.iterations = it + 1;
    if (c_true < cfg.eta) {
      res.converged = true;
      res.stop_reason = "eta";
      break;
    }
    if (!g.allFinite() || g.squaredNorm() == 0.0) {
      res.stop_reason = "zero_gradient";
      break;
    }
    bool accepted = false;
    Eigen::VectorXd xn_best;
    double cn = c;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd d = -(h * g);
      double slope = g.dot(d);
      if (!(slope < 0.0)) {
        h = cfg.step_size * Eigen::MatrixXd::Identity(dim, dim);
        h_scaled = false;
        d = -(h * g);
        slope = g.dot(d);
      }
      if (bfgs) step = 1.0;
      for (int s = 0; s <= cfg.max_shrinks; ++s) {
        const Eigen::VectorXd xn = as_vec(x) + step * d;
        cn = f(std::vector<double>(xn.data(), xn.data() + dim));
        if (std::isfinite(cn) && cn <= c + cfg.armijo_c * step * slope) {
          xn_best = xn;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted && bfgs && !h.isApprox(cfg.step_size * Eigen::MatrixXd::Identity(dim, dim))) {
        h = cfg.step_size * Eigen::MatrixXd::Identity(dim, dim);  // retry along the plain gradient
        h_scaled = false;
        continue;
      }
      break;
    }
    if (!accepted) {
      res.stop_reason = "line_search";
      break;
    }
    const Eigen::VectorXd sv = xn_best - as_vec(x);
    x.assign(xn_best.data(), xn_best.data() + dim);
    c = cn;
    c_true = true_cost(x);
    const Eigen::VectorXd gn = as_vec(finite_difference_gradient(f, x, cfg.grad_epsilon, cfg.threads));
    if (bfgs) {
      const Eigen::VectorXd y = gn - g;
      const double sy = sv.dot(y);
      if (sy > 1e-12 * sv.norm() * y.norm()) {
        if (!h_scaled) {
          h = (sy / y.squaredNorm()) * Eigen::MatrixXd::Identity(dim, dim);
          h_scaled = true;
        }
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(dim, dim) - rho * sv * y.transpose();
        h = v * h * v.transpose() + rho * sv * sv.transpose();
      }
    } else {
      step *= 2.0;
    }
    g = gn;
    res.cost_history.push_back(c);
    if (progress) progress(it, c);
  }
  if (!res.converged && c_true < cfg.eta) {
    res.converged = true;
    res.stop_reason = "eta";
  }
  const auto fin = evaluate_cost(unflatten(x, T, n), target, model, cfg);
  res.params = fin.rescaled;
  res.final_cost = fin.cost;
  res.final_F = fin.fidelity;
  res.final_D = fin.distance;
  res.final_weighted_D = fin.weighted_distance;
  return res;
}

/// Seeded synthesis of an X rotation by `angle` with gate time T.
inline SynthesisResult synthesize(double angle, double T, const OptimizerConfig& cfg, const TwoQubitModel& model,
                                  const std::function<void(int, double)>& progress = {}) {
  cfg.validate();
  return synthesize_from(initial_pulse(angle, T, cfg.harmonics, cfg.seed), angle, model, cfg, progress);
}

inline SynthesisResult synthesize(GateLabel gate, double T, const OptimizerConfig& cfg, const TwoQubitModel& model,
                                  const std::function<void(int, double)>& progress = {}) {
  auto r = synthesize(rotation_angle(gate), T, cfg, model, progress);
  r.gate = to_string(gate);
  return r;
}

inline nlohmann::json to_json(const OptimizerConfig& c) {
  return {{"eta", c.eta},
          {"max_iters", c.max_iters},
          {"step_size", c.step_size},
          {"grad_epsilon", c.grad_epsilon},
          {"amplitude_cap", c.amplitude_cap},
          {"harmonics", c.harmonics},
          {"seed", c.seed},
          {"reference_J", c.reference_J},
          {"norm_smoothing", c.norm_smoothing},
          {"steps_per_ns", c.steps_per_ns},
          {"method", c.method == SearchMethod::kBfgs ? "bfgs" : "gradient_descent"}};
}

inline nlohmann::json to_json(const SynthesisResult& r, const OptimizerConfig& cfg) {
  PulseLibraryEntry entry;
  entry.gate = parse_gate_label(r.gate).value_or(GateLabel::kXpi);
  entry.params = r.params;
  entry.relative_amplitude = r.params.a.empty() || is_zero_pulse(r.params)
                                 ? 0.0
                                 : peak_amplitude(r.params) / kReferenceDeltaEz;
  nlohmann::json pulse = to_json(entry);
  if (r.gate.empty()) pulse["gate"] = nullptr;
  return {{"config", to_json(cfg)},
          {"seed", cfg.seed},
          {"target_angle", r.target_angle},
          {"converged", r.converged},
          {"stop_reason", r.stop_reason},
          {"iterations", r.iterations},
          {"final_cost", r.final_cost},
          {"final_F", r.final_F},
          {"final_D", r.final_D},
          {"final_weighted_D", r.final_weighted_D},
          {"cost_history", r.cost_history},
          {"pulse", pulse}};
}

}  // namespace spinctrl
