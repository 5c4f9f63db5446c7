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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fermode/entanglement.hpp"
#include "fermode/fock.hpp"
#include "fermode/mapping.hpp"
#include "fermode/numerics.hpp"
#include "fermode/states.hpp"
#include "fermode/trace.hpp"

namespace fermode {

/// coefficient * |ket><bra|; an off-diagonal term also stands for its
/// Hermitian conjugate.
struct StateTerm {
    Complex coefficient;
    OccupationState ket;
    OccupationState bra;

    bool operator==(const StateTerm &) const = default;
};

using StateBody = std::variant<std::vector<StateTerm>, TwoModeCoefficients, ThreeModeCoefficients>;

struct StateDocument {
    std::size_t n_modes = 0;
    std::optional<ChargePattern> charges;
    StateBody body;

    bool operator==(const StateDocument &) const = default;
};

/// Reads the text state format:
///
///   modes 2 charges 1 1        # header; charges optional
///   0.5 * |01><01|             # terms, conjugates implied
///   0.5 * |10><10|
///   0.5+0.25i * |01><10|
///
/// or a single family block such as `two_mode { a2=0.5 a3=0.5 b4=0.5 }`
/// (a1..a4, b1..b6) or `three_mode { m1=... n6=... }` (m1..m8, n1..n6);
/// unnamed coefficients are zero. `#` starts a comment. Every failure is a
/// ParseError: SyntaxError for malformed text, SemanticError for bad mode
/// counts, duplicate or conjugate-duplicate terms, complex diagonal
/// coefficients, and documents that do not assemble to a density operator.
StateDocument parse_state(std::string_view text);

/// Canonical text form; parse_state(serialize(d)) == d.
std::string serialize(const StateDocument &doc);

/// The matrix described by the document, with Hermitian closure applied.
ComplexMatrix assemble_matrix(const StateDocument &doc);
/// Throws SemanticError when the matrix is not a density operator.
DensityOperator assemble(const StateDocument &doc);

/// Reads whitespace-separated "bK^" (creator), "bK" (annihilator) and
/// "P0" (vacuum projector) tokens, left to right. With `n_modes` given,
/// labels above it are a SemanticError; a second P0 is a SemanticError.
OperatorString parse_operator_string(std::string_view text, std::optional<std::size_t> n_modes = std::nullopt);
/// Single-space separated tokens.
std::string serialize(const OperatorString &s);

struct CarReport {
    std::size_t n_modes;
    double max_residual;
    double tolerance;
    bool ok;
};

struct ReductionReport {
    ModePartition partition;
    ComplexMatrix reduced;
    std::optional<double> oracle_residual;  // max entry gap to the consistency solve
    std::vector<std::string> notes;
};

struct DemoReport {
    std::string name;
    bool expected_exists;
    MappingVerdict verdict;

    bool matches() const {
        return verdict.exists == expected_exists;
    }
};

/// Deterministic JSON documents tagged with kReportSchema. Reals carry 12
/// significant digits; matrices are row lists of [re, im] pairs in
/// occupation-basis order.
inline constexpr std::string_view kReportSchema = "fermode-report/1";

std::string emit_report(const EntanglementReport &r);
std::string emit_report(const MappingVerdict &v);
std::string emit_report(const CarReport &r);
std::string emit_report(const ReductionReport &r);
std::string emit_report(const DemoReport &r);

}  // namespace fermode
