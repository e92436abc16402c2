/*
 * Copyright 2026 The Contrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CONTRANK_ERROR_H_
#define CONTRANK_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contrank {

// Base class of every error raised by the library. The CLI maps any of these
// to a non-zero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input record. The message carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a structural invariant (duplicate ids,
// unknown references, inconsistent shapes).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Out-of-range argument or non-finite numeric input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Invalid TrainConfig / LossConfig / BatchSpec combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training aborted (non-finite loss or gradient, empty epoch).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace contrank

#endif  // CONTRANK_ERROR_H_
