// Copyright 2026 The fermode Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fermode {

enum class ErrorKind {
    DimensionMismatch,
    NonHermitianInput,
    NotAState,
    SingularSystem,
    TooManyModes,
    ModeCountMismatch,
    MalformedString,
    NotNormalized,
    BadWeights,
    NotPositive,
    PartitionMismatch,
    NotPure,
    NoMappingWitness,
    SsrViolation,
    SyntaxError,
    SemanticError,
};

const char *to_string(ErrorKind kind);

/// All library failures are reported through this exception; `kind()` names
/// the contract that was violated.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message);

    ErrorKind kind() const noexcept {
        return kind_;
    }
    /// The message without the kind prefix.
    const std::string &detail() const noexcept {
        return detail_;
    }

   private:
    ErrorKind kind_;
    std::string detail_;
};

/// Error raised while reading text input. Line and column are 1-based; a
/// column of 0 means the error concerns the whole line or document.
class ParseError : public Error {
   public:
    ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string &message);

    std::size_t line() const noexcept {
        return line_;
    }
    std::size_t column() const noexcept {
        return column_;
    }

   private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace fermode
