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

#include "fermode/error.hpp"

namespace fermode {

const char *to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorKind::NonHermitianInput:
            return "NonHermitianInput";
        case ErrorKind::NotAState:
            return "NotAState";
        case ErrorKind::SingularSystem:
            return "SingularSystem";
        case ErrorKind::TooManyModes:
            return "TooManyModes";
        case ErrorKind::ModeCountMismatch:
            return "ModeCountMismatch";
        case ErrorKind::MalformedString:
            return "MalformedString";
        case ErrorKind::NotNormalized:
            return "NotNormalized";
        case ErrorKind::BadWeights:
            return "BadWeights";
        case ErrorKind::NotPositive:
            return "NotPositive";
        case ErrorKind::PartitionMismatch:
            return "PartitionMismatch";
        case ErrorKind::NotPure:
            return "NotPure";
        case ErrorKind::NoMappingWitness:
            return "NoMappingWitness";
        case ErrorKind::SsrViolation:
            return "SsrViolation";
        case ErrorKind::SyntaxError:
            return "SyntaxError";
        case ErrorKind::SemanticError:
            return "SemanticError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {
}

ParseError::ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string &message)
    : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column) {
}

}  // namespace fermode
