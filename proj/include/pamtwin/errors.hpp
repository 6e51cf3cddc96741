// Copyright 2026 The pamtwin Authors
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

namespace pamtwin {

/// Bad user input: parameters, config files, schedules, calibration data.
/// The CLI maps this family to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Calibration data that cannot be inverted through the open-rate sweep.
class CalibrationError : public ValidationError {
 public:
  CalibrationError(const std::string& what, std::size_t datum_index)
      : ValidationError(what), datum_index_(datum_index) {}
  std::size_t datum_index() const noexcept { return datum_index_; }

 private:
  std::size_t datum_index_;
};

/// Numerical failure: non-finite integration results, covariance
/// factorization failure, non-convergence. CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The model was evaluated outside its identified region (e.g. a muscle
/// length where the volume polynomial is meaningless).
class ModelDomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// steady_state() ran out of model time before settling.
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace pamtwin
