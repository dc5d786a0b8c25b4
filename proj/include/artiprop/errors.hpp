// Copyright 2026 The Artiprop Authors
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

#ifndef ARTIPROP_ERRORS_HPP_
#define ARTIPROP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace artiprop {

// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Joint configuration requested outside the joint limits.
class OutOfLimits : public Error {
 public:
  using Error::Error;
};

// Pose sequence too short or without enough motion to identify a joint.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Admittance integration produced NaN/Inf.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

// Gripper slid off the handle.
class GraspLost : public Error {
 public:
  using Error::Error;
};

// Contact force exceeded the episode force limit.
class ForceLimitExceeded : public Error {
 public:
  ForceLimitExceeded(const std::string& message, double force)
      : Error(message), force_(force) {}

  // Magnitude of the force that tripped the limit, N.
  double force() const { return force_; }

 private:
  double force_;
};

// Malformed scenario text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Well-formed scenario with an out-of-range value.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& key, const std::string& message)
      : Error(key + ": " + message), key_(key) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace artiprop

#endif  // ARTIPROP_ERRORS_HPP_
