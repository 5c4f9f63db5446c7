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
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fermode/numerics.hpp"
#include "fermode/states.hpp"
#include "fermode/trace.hpp"

namespace fermode {

/// Largest mode count accepted by the exhaustive mapping search.
inline constexpr std::size_t kMaxSearchModes = 4;

/// A diagonal +-1 basis change from the Fock matrix representation to the
/// qubit product basis. The vacuum sign is always +1.
class SignAssignment {
   public:
    /// Normalizes so the vacuum carries +1 (flipping every sign if needed).
    /// Throws DimensionMismatch for a length other than 2^n and
    /// SemanticError for entries other than +-1.
    SignAssignment(std::size_t n_modes, std::vector<int> signs);

    static SignAssignment identity(std::size_t n_modes);
    /// Bit i-1 of `code` set means basis vector i carries -1.
    static SignAssignment from_code(std::size_t n_modes, std::uint64_t code);

    std::size_t n_modes() const noexcept {
        return n_modes_;
    }
    std::size_t dimension() const noexcept {
        return signs_.size();
    }
    int sign(std::size_t index) const {
        return signs_.at(index);
    }
    const std::vector<int> &signs() const noexcept {
        return signs_;
    }
    std::uint64_t code() const;
    /// One character per basis vector, '+' or '-'.
    std::string to_string() const;

    bool operator==(const SignAssignment &) const = default;

   private:
    std::size_t n_modes_;
    std::vector<int> signs_;
};

/// D m D with D = diag(signs). Throws DimensionMismatch.
ComplexMatrix apply_mapping(const ComplexMatrix &m, const SignAssignment &s);
ComplexMatrix apply_mapping(const DensityOperator &rho, const SignAssignment &s);

/// Partial trace over the qubits of `traced` with the plain index
/// contraction of the product basis; no fermionic signs. `traced` may name
/// every mode.
ComplexMatrix tensor_partial_trace(const ComplexMatrix &m, std::size_t n_modes, std::span<const std::size_t> traced);

/// Off-diagonal positions (row < col) whose coefficients may be nonzero.
/// Diagonal entries are always allowed.
class SparsityPattern {
   public:
    SparsityPattern(std::size_t n_modes, std::vector<std::pair<std::size_t, std::size_t>> allowed);

    /// Every coherence allowed.
    static SparsityPattern unrestricted(std::size_t n_modes);
    /// Coherences only between basis vectors of equal total charge.
    static SparsityPattern charge_conserving(std::size_t n_modes, const ChargePattern &charges);
    /// Positions where |m(r, c)| > tol.
    static SparsityPattern support(const ComplexMatrix &m, std::size_t n_modes, double tol = kExactTolerance);

    std::size_t n_modes() const noexcept {
        return n_modes_;
    }
    const std::vector<std::pair<std::size_t, std::size_t>> &allowed() const noexcept {
        return allowed_;
    }
    bool allows(std::size_t row, std::size_t col) const;
    /// True iff every entry of `m` outside the pattern is at most `tol`.
    bool covers(const ComplexMatrix &m, double tol = kExactTolerance) const;

    bool operator==(const SparsityPattern &) const = default;

   private:
    std::size_t n_modes_;
    std::vector<std::pair<std::size_t, std::size_t>> allowed_;  // sorted, row < col
};

/// One global matrix element feeding a reduced element, with the sign the
/// fermionic partial trace attaches to it.
struct FlowContribution {
    std::size_t row;
    std::size_t col;
    int sign;
};

struct ReducedFlow {
    std::size_t row;
    std::size_t col;
    std::vector<FlowContribution> contributions;
};

/// For every reduced element (row <= col) the global elements (row <= col)
/// it collects under the fermionic partial trace.
std::vector<ReducedFlow> coefficient_flow(std::size_t n_modes, const ModePartition &p);

/// s_row s_col r_{row'} r_{col'} = sign, where s is the global assignment and
/// r the reduced assignment attached to the partition.
struct SignEquation {
    ModePartition partition;
    std::size_t row;
    std::size_t col;
    std::size_t reduced_row;
    std::size_t reduced_col;
    int sign;

    std::string describe() const;
};

struct MappingVerdict {
    std::size_t n_modes;
    SparsityPattern pattern;
    std::vector<ModePartition> partitions;
    bool exists = false;
    std::vector<SignAssignment> witnesses;  // ascending code
    std::vector<SignEquation> obstruction;  // empty when exists

    /// True iff `p` or its complement was among the checked partitions.
    bool covers_partition(const ModePartition &p) const;
};

/// Every single-mode trace of an n-mode system.
std::vector<ModePartition> single_mode_traces(std::size_t n_modes);

struct SearchOptions {
    unsigned jobs = 1;
};

/// Exhaustive decision over all 2^(2^n - 1) sign assignments. For each
/// partition, each allowed coherence that survives the trace yields one
/// sign equation; an assignment is a witness when a reduced assignment
/// solving all equations of every partition exists. On failure the
/// obstruction is an inconsistent equation subset from which no equation
/// can be dropped. The result is independent of `jobs`. Throws
/// TooManyModes for n > kMaxSearchModes and PartitionMismatch for a
/// partition on another mode count.
MappingVerdict consistent_mapping_search(const SparsityPattern &pattern, const std::vector<ModePartition> &partitions,
                                         const SearchOptions &options = {});
MappingVerdict consistent_mapping_search(const SparsityPattern &pattern, const SearchOptions &options = {});

/// max |Tr_naive(D rho D) - R Tr_fermionic(rho) R| with D, R the global and
/// reduced sign matrices. Throws DimensionMismatch.
double verify_diagram(const DensityOperator &rho, const SignAssignment &s, const ModePartition &p,
                      const SignAssignment &reduced);

/// verify_diagram minimized over every reduced assignment, plus the minimizer.
std::pair<double, SignAssignment> best_diagram_residual(const DensityOperator &rho, const SignAssignment &s,
                                                        const ModePartition &p);

/// A state carried to the qubit product space by a verified witness. Only
/// constructible through `map`, so qubit-side measures never see a raw Fock
/// matrix.
class QubitImage {
   public:
    /// Throws NoMappingWitness when the verdict has no witness, when `rho`
    /// lies outside the verdict's sparsity pattern, or on a mode-count
    /// mismatch. `witness` indexes verdict.witnesses (out of range also
    /// throws NoMappingWitness).
    static QubitImage map(const DensityOperator &rho, const MappingVerdict &verdict, std::size_t witness = 0);

    std::size_t n_modes() const noexcept {
        return n_modes_;
    }
    const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }
    const SignAssignment &witness() const noexcept {
        return witness_;
    }
    const std::vector<ModePartition> &licensed_partitions() const noexcept {
        return partitions_;
    }
    bool licenses(const ModePartition &p) const;

   private:
    QubitImage(std::size_t n_modes, ComplexMatrix matrix, SignAssignment witness, std::vector<ModePartition> partitions);

    std::size_t n_modes_;
    ComplexMatrix matrix_;
    SignAssignment witness_;
    std::vector<ModePartition> partitions_;
};

}  // namespace fermode
