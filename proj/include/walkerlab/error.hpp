/* Copyright 2026 The walkerlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace walkerlab {

enum class ErrorKind {
  DivisionByZero,
  MixedRadicands,
  NegativeSqrt,
  UnsupportedAlgebraicDegree,
  NotAnEigenvalue,
  SyntaxError,
  DuplicateId,
  UnboundParameter,
  ConstraintViolated,
  JacobiFailed,
  MetricDegenerate,
  NotReductive,
  MetricNotIsotropyInvariant,
  StubEntry,
  NotFound,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::MixedRadicands: return "MixedRadicands";
    case ErrorKind::NegativeSqrt: return "NegativeSqrt";
    case ErrorKind::UnsupportedAlgebraicDegree: return "UnsupportedAlgebraicDegree";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::UnboundParameter: return "UnboundParameter";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::JacobiFailed: return "JacobiFailed";
    case ErrorKind::MetricDegenerate: return "MetricDegenerate";
    case ErrorKind::NotReductive: return "NotReductive";
    case ErrorKind::MetricNotIsotropyInvariant: return "MetricNotIsotropyInvariant";
    case ErrorKind::StubEntry: return "StubEntry";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures additionally remember where they happened.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", column " +
                                          std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace walkerlab
