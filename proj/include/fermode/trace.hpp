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
#include <span>
#include <string>
#include <vector>

#include "fermode/fock.hpp"
#include "fermode/numerics.hpp"
#include "fermode/states.hpp"

namespace fermode {

/// Split of the mode labels 1..n into a kept set and a traced set, both
/// nonempty and stored in increasing order. Kept mode kept()[j] becomes mode
/// j+1 of the reduced space.
class ModePartition {
   public:
    ModePartition(std::size_t n_modes, std::vector<std::size_t> kept);
    static ModePartition tracing(std::size_t n_modes, std::vector<std::size_t> traced);

    std::size_t n_modes() const noexcept {
        return n_modes_;
    }
    const std::vector<std::size_t> &kept() const noexcept {
        return kept_;
    }
    const std::vector<std::size_t> &traced() const noexcept {
        return traced_;
    }
    std::size_t reduced_dimension() const noexcept {
        return std::size_t{1} << kept_.size();
    }

    /// Global basis index with the kept modes set from `kept_index` (reduced
    /// basis) and the traced modes from `traced_index` (traced modes in
    /// increasing order, first one most significant).
    std::size_t compose(std::size_t kept_index, std::size_t traced_index) const;
    std::size_t kept_part(std::size_t global_index) const;
    std::size_t traced_part(std::size_t global_index) const;

    /// The complementary partition (kept and traced exchanged).
    ModePartition complement() const;
    std::string describe() const;

    bool operator==(const ModePartition &) const = default;

   private:
    std::size_t n_modes_;
    std::vector<std::size_t> kept_;
    std::vector<std::size_t> traced_;
};

/// Sign picked up by the global element |row><col| when every traced
/// creator and annihilator is anticommuted next to the vacuum projector:
/// (-1)^s where s counts, for each traced mode t occupied in row (and col),
/// the kept modes with label > t occupied in row plus those occupied in col.
/// Only meaningful when row and col agree on every traced mode.
int inside_out_sign(std::size_t row, std::size_t col, std::size_t n_modes, std::span<const std::size_t> traced);

/// Fermionic partial trace on a raw matrix. `traced` may name every mode, in
/// which case the result is 1x1.
ComplexMatrix inside_out_partial_trace(const ComplexMatrix &m, std::size_t n_modes,
                                       std::span<const std::size_t> traced);

/// Reduced state on the kept modes. Throws PartitionMismatch.
DensityOperator inside_out_partial_trace(const DensityOperator &rho, const ModePartition &p);

/// O_x = X + X† and O_p = i(X - X†) for X = b_{λ1}..b_{λk} b†_{τ1}..b†_{τl}
/// dressed with occupation projectors n_j (occupied spectators) and 1 - n_j
/// (empty spectators). When λ and τ are both empty, X itself is the
/// projector and is returned as O_x with O_p = 0.
struct ConsistencyOperatorPair {
    std::vector<std::size_t> lambda;
    std::vector<std::size_t> tau;
    std::vector<std::size_t> occupied_spectators;
    std::vector<std::size_t> empty_spectators;
    ComplexMatrix ox;
    ComplexMatrix op;
};

ConsistencyOperatorPair consistency_operator_pair(const LadderOperators &ops, std::vector<std::size_t> lambda,
                                                  std::vector<std::size_t> tau,
                                                  std::vector<std::size_t> occupied_spectators,
                                                  std::vector<std::size_t> empty_spectators);

/// Reduction defined by the consistency conditions alone: the reduced
/// matrix is the unique solution of <O>_rho = <O>_reduced over a complete
/// set of Hermitian operators O on the kept modes. The operators are built
/// once per partition, so reuse an oracle across many states.
class ConsistencyOracle {
   public:
    /// Throws SingularSystem if the operator set fails to determine the
    /// reduced matrix.
    explicit ConsistencyOracle(const ModePartition &p);

    const ModePartition &partition() const noexcept {
        return partition_;
    }
    const std::vector<ConsistencyOperatorPair> &local_pairs() const noexcept {
        return local_;
    }
    const std::vector<ConsistencyOperatorPair> &embedded_pairs() const noexcept {
        return embedded_;
    }

    /// Expectations of the embedded operators in the full-space matrix `m`.
    std::vector<double> expectations(const ComplexMatrix &m) const;
    /// Accepts any full-space matrix; the map is complex linear.
    ComplexMatrix reduce_matrix(const ComplexMatrix &m) const;
    DensityOperator reduce(const DensityOperator &rho) const;

   private:
    ComplexMatrix solve_hermitian(const ComplexMatrix &hermitian) const;

    ModePartition partition_;
    std::vector<ConsistencyOperatorPair> local_;
    std::vector<ConsistencyOperatorPair> embedded_;
    RealLu system_;
};

DensityOperator oracle_partial_trace(const DensityOperator &rho, const ModePartition &p);

/// Traces out single modes one after another in the given order. Tracing
/// every mode yields the 1x1 matrix (Tr rho).
ComplexMatrix sequential_trace(const DensityOperator &rho, std::span<const std::size_t> order);

/// Tr(op rho), real part; op is expected Hermitian.
double expectation(const ComplexMatrix &op, const ComplexMatrix &rho);

}  // namespace fermode
