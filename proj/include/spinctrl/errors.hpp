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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spinctrl {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input that makes the operation meaningless (e.g. rescaling a zero pulse).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense-matrix guard tripped (Hilbert space too large).
class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An operator failed a structural check (Hermiticity, unitarity, dimension).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigenvectors cannot be assigned to blocks unambiguously.
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Curve fit did not converge; carries the raw data that was being fitted.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, std::vector<double> x, std::vector<double> y)
      : std::runtime_error(what), x_(std::move(x)), y_(std::move(y)) {}

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

}  // namespace spinctrl
