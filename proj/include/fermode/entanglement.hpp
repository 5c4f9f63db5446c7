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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fermode/mapping.hpp"
#include "fermode/numerics.hpp"
#include "fermode/states.hpp"
#include "fermode/trace.hpp"

namespace fermode {

/// Von Neumann entropy (bits) of the fermionic reduced state of a pure
/// state. Throws NotPure.
double entropy_of_entanglement(const DensityOperator &psi, const ModePartition &p);

/// Transposes the factor spanned by `modes` of the product basis.
ComplexMatrix partial_transpose(const ComplexMatrix &m, std::size_t n_modes, std::span<const std::size_t> modes);

/// |sum of negative eigenvalues| of the partial transpose over the traced
/// side of `p`. Throws NoMappingWitness unless the image's witness was
/// verified for `p`, PartitionMismatch on a mode-count mismatch.
double negativity(const QubitImage &image, const ModePartition &p);

/// Wootters concurrence of a two-qubit image. Throws DimensionMismatch for
/// images on other mode counts.
double concurrence(const QubitImage &image);
/// h((1 + sqrt(1 - C^2)) / 2) with h the binary entropy in bits.
double eof_from_concurrence(double c);
double eof_wootters(const QubitImage &image);

struct SsrEofBudget {
    std::size_t restarts = 32;
    std::size_t iterations = 500;
};

/// A pure-state ensemble: weights sum to one, states are normalized.
struct PureDecomposition {
    std::vector<double> weights;
    std::vector<std::vector<Complex>> states;
};

struct SsrEofEstimate {
    double value;  // an upper bound on the restricted minimum, never the minimum itself
    PureDecomposition decomposition;
};

/// Average entanglement sum_n p_n E(psi_n) of a two-mode ensemble.
double average_entanglement(const PureDecomposition &d);

/// Searches SSR-respecting pure decompositions of a two-mode state for the
/// least average entanglement. Each charge sector block is decomposed with
/// up to rank^2 members through an isometry acting on its weighted
/// eigenvectors; members therefore stay inside one sector. Restart 0 starts
/// at the eigen-decomposition. Throws SsrViolation when rho itself mixes
/// sectors and ModeCountMismatch unless rho has two modes.
SsrEofEstimate eof_ssr_minimize(const DensityOperator &rho, const ChargePattern &charges,
                                const SsrEofBudget &budget = {}, std::uint64_t seed = 0);

struct EntanglementReport {
    ModePartition partition;
    std::optional<double> entropy_of_entanglement{};
    bool mapping_exists = false;
    std::optional<SignAssignment> witness{};
    std::optional<double> negativity{};
    std::optional<double> concurrence{};
    std::optional<double> eof_wootters{};
    std::optional<double> eof_ssr_estimate{};  // upper bound
    bool negativity_concurrence_ok = true;  // 2N <= C
    bool eof_ordering_ok = true;            // EoF <= SSR estimate
    bool bound_chain_ok = true;             // both of the above
    std::vector<std::string> notes{};
};

struct MeasureOptions {
    std::optional<ChargePattern> charges;  // defaults to equal charges
    SsrEofBudget budget;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

/// Every computable measure for `rho` across `p`. Qubit-side measures are
/// reported only when a consistent sign mapping exists for the support of
/// rho; otherwise a note explains their absence.
EntanglementReport measure(const DensityOperator &rho, const ModePartition &p, const MeasureOptions &options = {});

}  // namespace fermode
