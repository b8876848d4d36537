// Copyright 2026 The ssmatch Authors.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssmatch {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input values or configuration. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Edge-stream text could not be parsed.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// The exact oracle refuses instances above its size limit.
class InstanceTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A preemptive algorithm broke the irrevocability contract.
class ContractViolation : public Error {
 public:
  ContractViolation(std::size_t step, const std::string& what)
      : Error("contract violation at edge " + std::to_string(step) + ": " +
              what),
        step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// File system failures. The CLI maps these to exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssmatch
