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

// Dense complex operators, Pauli strings and matrix exponentials.
//
// Qubit 0 is the leftmost Kronecker factor (most significant bit of the basis
// index), so the two-qubit string "IX" acts with X on qubit 1.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "spinctrl/errors.hpp"

namespace spinctrl {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

namespace pauli {

inline Operator I() { return Operator::Identity(2, 2); }

inline Operator X() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Operator Y() {
  Operator m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

inline Operator Z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Operator from_char(char c) {
  switch (c) {
    case 'I': return I();
    case 'X': return X();
    case 'Y': return Y();
    case 'Z': return Z();
    default: throw DomainError(std::string("unknown Pauli label '") + c + "'");
  }
}

}  // namespace pauli

inline Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Tensor product of single-qubit Paulis, e.g. "XZI".
inline Operator pauli_string(std::string_view labels) {
  if (labels.empty()) throw DomainError("empty Pauli string");
  Operator out = pauli::from_char(labels[0]);
  for (std::size_t q = 1; q < labels.size(); ++q) out = kron(out, pauli::from_char(labels[q]));
  return out;
}

/// Single-qubit operator `op` acting on `qubit` of an `n`-qubit register.
inline Operator embed(const Operator& op, int qubit, int n) {
  Operator out = Operator::Identity(1, 1);
  for (int q = 0; q < n; ++q) out = kron(out, q == qubit ? op : pauli::I());
  return out;
}

inline int qubit_count(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) throw ValidationError("dimension is not a power of two");
  return n;
}

inline double hermiticity_residual(const Operator& h) { return (h - h.adjoint()).norm(); }

inline bool is_hermitian(const Operator& h, double tol = 1e-12) {
  return h.rows() == h.cols() && hermiticity_residual(h) <= tol * std::max(1.0, h.norm());
}

/// Frobenius norm of U†U - I.
inline double unitarity_residual(const Operator& u) {
  return (u.adjoint() * u - Operator::Identity(u.rows(), u.cols())).norm();
}

/// Real coefficient of Pauli string `p` in Hermitian `m`: Tr(p m) / d.
inline double pauli_coefficient(const Operator& m, const Operator& p) {
  const cplx c = (p * m).trace() / static_cast<double>(m.rows());
  if (std::abs(c.imag()) > 1e-10 * std::max(1.0, m.norm()))
    throw ValidationError("Pauli projection has an imaginary part; operator is not Hermitian");
  return c.real();
}

/// All 4^n Pauli labels for n qubits, identity first, in lexicographic IXYZ order.
inline std::vector<std::string> pauli_labels(int n) {
  std::vector<std::string> labels{""};
  for (int q = 0; q < n; ++q) {
    std::vector<std::string> next;
    next.reserve(labels.size() * 4);
    for (const auto& l : labels)
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(l + c);
    labels = std::move(next);
  }
  return labels;
}

/// Matrix exponential exp(A) by scaling and squaring with the degree-13 Padé
/// approximant (Higham 2005). General complex A.
inline Operator expm_pade(const Operator& a) {
  static constexpr double b[] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  const Operator ident = Operator::Identity(n, n);
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const Operator as = a / std::ldexp(1.0, s);

  const Operator a2 = as * as;
  const Operator a4 = a2 * a2;
  const Operator a6 = a4 * a2;
  const Operator u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Operator u = as * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Operator v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const Operator v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  Operator r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

/// exp(-i h dt) for Hermitian h via its eigendecomposition.
inline Operator expm_hermitian(const Operator& h, double dt) {
  if (h.rows() == 2) {
    // closed form: h = h0 I + n·σ
    const cplx h0 = 0.5 * (h(0, 0) + h(1, 1));
    const double nz = 0.5 * (h(0, 0) - h(1, 1)).real();
    const double nx = h(1, 0).real();
    const double ny = h(1, 0).imag();
    const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
    const double c = std::cos(r * dt);
    const double sn = r > 0 ? std::sin(r * dt) / r : dt;
    const cplx phase = std::exp(-kI * h0 * dt);
    Operator u(2, 2);
    u(0, 0) = phase * cplx(c, -sn * nz);
    u(1, 1) = phase * cplx(c, sn * nz);
    u(0, 1) = phase * (-kI * sn * cplx(nx, -ny));
    u(1, 0) = phase * (-kI * sn * cplx(nx, ny));
    return u;
  }
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cplx>() * (-kI * dt)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

enum class ExpMethod { kEigen, kPade };

/// exp(-i h dt). Padé is used only where requested; eigen is the reference.
inline Operator propagator(const Operator& h, double dt, ExpMethod method = ExpMethod::kEigen) {
  if (method == ExpMethod::kPade) return expm_pade(Operator(-kI * dt * h));
  return expm_hermitian(h, dt);
}

/// Hermitian inverse square root (for positive-definite input).
inline Operator inverse_sqrt_hermitian(const Operator& m, double min_eigenvalue) {
  Eigen::SelfAdjointEigenSolver<Operator> es(m);
  if (es.eigenvalues().minCoeff() < min_eigenvalue)
    throw DegeneracyError("matrix is not safely positive definite");
  const Eigen::VectorXcd d = es.eigenvalues().cwiseSqrt().cwiseInverse().cast<cplx>();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace spinctrl
