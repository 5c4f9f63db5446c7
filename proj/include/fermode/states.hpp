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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fermode/numerics.hpp"

namespace fermode {

/// Checks applied when a density operator is constructed.
struct StateTolerances {
    double hermiticity = 1e-10;  // on the raw input, before symmetrization
    double trace = kExactTolerance;
    double min_eigenvalue = -kEigenTolerance;
};

/// Density operator on the n-mode Fock space, indexed by occupation basis
/// (mode 1 most significant). The stored matrix is exactly Hermitian.
class DensityOperator {
   public:
    /// Symmetrizes `matrix` and validates it. Throws DimensionMismatch when
    /// the matrix is not 2^n square, NonHermitianInput when the raw input is
    /// far from Hermitian, NotAState for a bad trace or negative spectrum.
    DensityOperator(std::size_t n_modes, const ComplexMatrix &matrix, const StateTolerances &tol = {});

    std::size_t n_modes() const noexcept {
        return n_modes_;
    }
    std::size_t dimension() const noexcept {
        return matrix_.rows();
    }
    const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }
    Complex operator()(std::size_t r, std::size_t c) const {
        return matrix_(r, c);
    }

    Spectrum spectrum() const;
    double purity() const;
    bool is_pure(double tol = kEigenTolerance) const;

   private:
    std::size_t n_modes_;
    ComplexMatrix matrix_;
};

/// Projector onto a normalized state vector. Throws NotNormalized.
DensityOperator from_pure(std::span<const Complex> state);

/// Convex combination. Throws BadWeights or DimensionMismatch.
DensityOperator mix(std::span<const DensityOperator> states, std::span<const double> weights);

/// Coefficients of the general two-mode state. Index convention follows the
/// matrix layout
///   ( a1  b1  b2  b3 )
///   ( .   a2  b4  b5 )
///   ( .   .   a3  b6 )
///   ( .   .   .   a4 )
/// over the basis |0>, |1_2>, |1_1>, |1_1 1_2>.
struct TwoModeCoefficients {
    std::array<double, 4> alpha{};
    std::array<Complex, 6> beta{};

    bool operator==(const TwoModeCoefficients &) const = default;
};

/// Coefficients of the general equal-charge three-mode state: diagonal
/// mu1..mu8 over the occupation basis and coherences
///   (2,3)=nu1 (2,5)=nu2 (3,5)=nu3 (4,6)=nu4 (4,7)=nu5 (6,7)=nu6
/// (1-based matrix positions). All other off-diagonal entries vanish.
struct ThreeModeCoefficients {
    std::array<double, 8> mu{};
    std::array<Complex, 6> nu{};

    bool operator==(const ThreeModeCoefficients &) const = default;
};

/// Throws NotPositive when the assembled matrix is not a state.
DensityOperator general_two_mode(const TwoModeCoefficients &c);
DensityOperator general_three_mode(const ThreeModeCoefficients &c);

/// Zero-based (row, col) of beta_k / nu_k in the matrices above.
std::array<std::pair<std::size_t, std::size_t>, 6> two_mode_beta_positions();
std::array<std::pair<std::size_t, std::size_t>, 6> three_mode_nu_positions();

/// Reads the coefficients back out of a matrix. The three-mode variant
/// throws SemanticError when an entry outside the equal-charge pattern is
/// larger than `tol`.
TwoModeCoefficients two_mode_coefficients(const DensityOperator &rho);
ThreeModeCoefficients three_mode_coefficients(const DensityOperator &rho, double tol = kExactTolerance);

/// Conserved charge per mode (units of the elementary charge). A nonzero
/// modulus makes charges add modulo that number; parity is modulus 2 with
/// all charges 1.
struct ChargePattern {
    std::vector<int> charges;
    int modulus = 0;

    static ChargePattern uniform(std::size_t n_modes);
    static ChargePattern parity(std::size_t n_modes);

    /// Total charge of the occupation basis vector `index`.
    long charge_of(std::size_t index) const;

    bool operator==(const ChargePattern &) const = default;
};

/// True iff every matrix element between basis vectors of different charge
/// is at most `tol` in modulus.
bool check_ssr(const DensityOperator &rho, const ChargePattern &charges, double tol = kExactTolerance);
bool check_ssr(const ComplexMatrix &m, std::size_t n_modes, const ChargePattern &charges, double tol = kExactTolerance);

/// Basis indices grouped by total charge, sectors ordered by charge value.
std::vector<std::vector<std::size_t>> charge_sectors(std::size_t n_modes, const ChargePattern &charges);

/// Seeded random state of rank at most `rank` (sum of `rank` random pure
/// projectors with random weights). With a charge pattern every pure
/// component is drawn inside one charge sector, so the result respects the
/// superselection rule.
DensityOperator random_state(std::size_t n_modes, std::size_t rank, std::uint64_t seed,
                             const std::optional<ChargePattern> &ssr = std::nullopt);

}  // namespace fermode
