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
#include <string>
#include <string_view>
#include <vector>

#include "fermode/numerics.hpp"

namespace fermode {

/// Hard cap on the number of modes; 2^10 basis states keeps dense matrices
/// within a few tens of megabytes.
inline constexpr std::size_t kMaxModes = 10;

/// Basis index convention used everywhere in the library: the occupation
/// bitstring read as a binary number with mode 1 as the most significant
/// bit. For two modes this gives the order |0>, |1_2>, |1_1>, |1_1 1_2>.
inline bool mode_occupied(std::size_t index, std::size_t mode, std::size_t n_modes) {
    return ((index >> (n_modes - mode)) & 1U) != 0;
}

inline std::size_t mode_bit(std::size_t mode, std::size_t n_modes) {
    return std::size_t{1} << (n_modes - mode);
}

/// Occupation numbers of one Fock basis vector. The state it names is
/// (b_1†)^{n_1} (b_2†)^{n_2} ... (b_n†)^{n_n} |0>, creators applied in
/// increasing mode order. Mode labels are 1-based.
class OccupationState {
   public:
    explicit OccupationState(std::vector<std::uint8_t> occupations);

    static OccupationState vacuum(std::size_t n_modes);
    static OccupationState from_index(std::size_t n_modes, std::size_t index);
    /// "0110" -> modes 2 and 3 occupied; leftmost character is mode 1.
    static OccupationState from_bits(std::string_view bits);

    std::size_t n_modes() const noexcept {
        return occupations_.size();
    }
    bool occupied(std::size_t mode) const;
    std::size_t index() const;
    std::size_t particle_count() const;
    std::string bits() const;

    bool operator==(const OccupationState &) const = default;

   private:
    std::vector<std::uint8_t> occupations_;
};

/// Jordan-Wigner realization of b_k, b_k† on the 2^n occupation basis: b_k
/// carries the parity string (-1)^{n_1 + ... + n_{k-1}}. All entries are
/// 0 or ±1, so the anticommutation relations hold exactly.
class LadderOperators {
   public:
    /// Throws TooManyModes for n_modes outside [1, kMaxModes].
    explicit LadderOperators(std::size_t n_modes);

    std::size_t n_modes() const noexcept {
        return n_modes_;
    }
    std::size_t dimension() const noexcept {
        return std::size_t{1} << n_modes_;
    }

    /// Dense matrices are produced on request rather than stored; at the mode
    /// cap a full set would need hundreds of megabytes.
    ComplexMatrix annihilator(std::size_t mode) const;
    ComplexMatrix creator(std::size_t mode) const;
    ComplexMatrix number_operator(std::size_t mode) const;
    ComplexMatrix total_number_operator() const;
    ComplexMatrix vacuum_projector() const;
    ComplexMatrix identity() const;

    /// b_mode acting on basis vector `index`: the target index and sign, or
    /// nullopt when the mode is empty.
    std::optional<std::pair<std::size_t, int>> annihilate(std::size_t mode, std::size_t index) const;
    std::optional<std::pair<std::size_t, int>> create(std::size_t mode, std::size_t index) const;

   private:
    void check_mode(std::size_t mode) const;

    std::size_t n_modes_;
};

LadderOperators build_ladder_operators(std::size_t n_modes);

/// Largest entrywise deviation from {b_m, b_n†} = δ_mn and
/// {b_m, b_n} = {b_m†, b_n†} = 0 over all mode pairs.
double car_residual(const LadderOperators &ops);

/// (b_1†)^{n_1} ... (b_n†)^{n_n} |0> built by applying creator matrices to
/// the vacuum. Throws ModeCountMismatch.
std::vector<Complex> basis_state(const OccupationState &occ, const LadderOperators &ops);

enum class LadderKind { Creator, Annihilator };

struct LadderFactor {
    LadderKind kind;
    std::size_t mode;

    bool operator==(const LadderFactor &) const = default;
};

/// Product of ladder operators, written left to right, with an optional
/// vacuum projector |0><0| inserted after the first `projector_position`
/// factors.
struct OperatorString {
    std::vector<LadderFactor> factors;
    std::optional<std::size_t> projector_position;

    bool operator==(const OperatorString &) const = default;
};

/// Throws MalformedString for mode labels outside [1, n_modes] or a
/// projector position past the end of the factor list.
ComplexMatrix operator_string_to_matrix(const OperatorString &s, const LadderOperators &ops);

/// Unitary that relabels modes: mode k of the input becomes mode
/// `new_label[k-1]`. Includes the reordering sign of each basis vector.
ComplexMatrix mode_relabeling(std::size_t n_modes, const std::vector<std::size_t> &new_label);

}  // namespace fermode
