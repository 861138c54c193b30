/*
 * Copyright 2026 The wvtune Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef WVTUNE_ERROR_HPP
#define WVTUNE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wvtune {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument, violated precondition, or malformed configuration.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A well-posed computation failed in floating point.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefiniteError : public NumericalError {
 public:
  explicit NotPositiveDefiniteError(const std::string& role, const std::string& hint = "")
      : NumericalError(role + " is singular or indefinite (not positive definite)" +
                       (hint.empty() ? std::string() : "; " + hint)),
        role_(role) {}

  const std::string& role() const noexcept { return role_; }

 private:
  std::string role_;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : NumericalError(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// The weight vector is zero, so the rule is a constant classifier.
class ConstantClassifierError : public NumericalError {
 public:
  ConstantClassifierError()
      : NumericalError("constant classifier: weight vector is zero") {}
};

/// mu0 == mu1 (or the sample means coincide); the projector P_mu is undefined.
class ZeroMeanDifferenceError : public NumericalError {
 public:
  ZeroMeanDifferenceError()
      : NumericalError("zero mean difference: class means coincide") {}
};

/// Raised by alpha sweeps; the failing alpha is attached and the original
/// exception is nested.
class ObjectiveError : public Error {
 public:
  ObjectiveError(double alpha, const std::string& what)
      : Error("objective failed at alpha=" + std::to_string(alpha) + ": " + what),
        alpha_(alpha) {}

  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
};

}  // namespace wvtune

#endif  // WVTUNE_ERROR_HPP
