// Copyright 2026 The pmfock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmfock {

enum class ErrorCode {
    DuplicateLabel,
    InvalidDimension,
    IndexOutOfRange,
    LabelCollision,
    LabelMismatch,
    DimensionMismatch,
    CoverageError,
    ShapeError,
    NonUnitary,
    DuplicateSector,
    InvalidArgument,
    // circuit file errors
    SyntaxError,
    UndeclaredSpace,
    DuplicateWire,
    DuplicateDeclaration,
    EmptyCircuit,
    CausalOrder,
    UnwiredSpace,
};

std::string_view error_code_name(ErrorCode code);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// A circuit-file error with the 1-based location it was detected at.
class CircuitError : public Error {
  public:
    CircuitError(ErrorCode code, std::size_t line, std::size_t column, const std::string &message)
        : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace pmfock
