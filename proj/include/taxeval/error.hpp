// Copyright 2026 The taxeval Authors
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

namespace taxeval {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A document is not shaped like its schema (missing field, wrong JSON type).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A well-formed document violates a semantic rule (duplicate code, m < 2,
/// unknown label, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed line-oriented input (M2). Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Edit lists that overlap, run out of range, or cannot be isolated.
class EditError : public Error {
 public:
  using Error::Error;
};

/// The model endpoint could not be reached or answered with garbage.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace taxeval
