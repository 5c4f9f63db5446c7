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

#include "fermode/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "fermode/error.hpp"
#include "fermode/fock.hpp"

namespace fermode {

DensityOperator::DensityOperator(std::size_t n_modes, const ComplexMatrix &matrix, const StateTolerances &tol)
    : n_modes_(n_modes), matrix_(matrix) {
    if (n_modes == 0 || n_modes > kMaxModes) {
        throw Error(ErrorKind::TooManyModes, "mode count " + std::to_string(n_modes) + " out of range");
    }
    const std::size_t dim = std::size_t{1} << n_modes;
    if (matrix.rows() != dim || matrix.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch,
                    "density operator on " + std::to_string(n_modes) + " modes must be " + std::to_string(dim) + "x" +
                        std::to_string(dim));
    }
    const double residual = hermiticity_residual(matrix);
    if (residual > tol.hermiticity) {
        throw Error(ErrorKind::NonHermitianInput, "max |rho - rho^dagger| = " + std::to_string(residual));
    }
    matrix_ = hermitian_part(matrix);
    const Complex tr = matrix_.trace();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw Error(ErrorKind::NotAState, "trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    const Spectrum s = hermitian_eigenvalues(matrix_, kEigenTolerance);
    if (s.eigenvalues.back() < tol.min_eigenvalue) {
        throw Error(ErrorKind::NotAState, "negative eigenvalue " + std::to_string(s.eigenvalues.back()));
    }
}

Spectrum DensityOperator::spectrum() const {
    return hermitian_eigenvalues(matrix_);
}

double DensityOperator::purity() const {
    return trace_of_product(matrix_, matrix_).real();
}

bool DensityOperator::is_pure(double tol) const {
    const Spectrum s = spectrum();
    if (std::abs(s.eigenvalues.front() - 1.0) > tol) {
        return false;
    }
    return std::all_of(s.eigenvalues.begin() + 1, s.eigenvalues.end(), [&](double x) { return std::abs(x) <= tol; });
}

DensityOperator from_pure(std::span<const Complex> state) {
    double norm = 0.0;
    for (const auto &z : state) {
        norm += std::norm(z);
    }
    if (std::abs(norm - 1.0) > kExactTolerance) {
        throw Error(ErrorKind::NotNormalized, "state norm^2 is " + std::to_string(norm));
    }
    const std::size_t n_modes = static_cast<std::size_t>(std::countr_zero(state.size()));
    if (state.size() < 2 || (std::size_t{1} << n_modes) != state.size()) {
        throw Error(ErrorKind::DimensionMismatch, "state vector length must be 2^n with n >= 1");
    }
    return DensityOperator(n_modes, outer_product(state));
}

DensityOperator mix(std::span<const DensityOperator> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size()) {
        throw Error(ErrorKind::BadWeights, "need one weight per state");
    }
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw Error(ErrorKind::BadWeights, "weights must be nonnegative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kExactTolerance) {
        throw Error(ErrorKind::BadWeights, "weights sum to " + std::to_string(total));
    }
    ComplexMatrix sum(states.front().dimension(), states.front().dimension());
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].n_modes() != states.front().n_modes()) {
            throw Error(ErrorKind::DimensionMismatch, "mixed states act on different mode counts");
        }
        sum += Complex(weights[k]) * states[k].matrix();
    }
    return DensityOperator(states.front().n_modes(), sum);
}

std::array<std::pair<std::size_t, std::size_t>, 6> two_mode_beta_positions() {
    return {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
}

std::array<std::pair<std::size_t, std::size_t>, 6> three_mode_nu_positions() {
    return {{{1, 2}, {1, 4}, {2, 4}, {3, 5}, {3, 6}, {5, 6}}};
}

namespace {

template <std::size_t D, std::size_t K>
ComplexMatrix assemble(std::span<const double, D> diagonal, std::span<const Complex, K> coherences,
                       const std::array<std::pair<std::size_t, std::size_t>, K> &positions) {
    ComplexMatrix m(D, D);
    for (std::size_t k = 0; k < D; ++k) {
        m(k, k) = diagonal[k];
    }
    for (std::size_t k = 0; k < K; ++k) {
        const auto [r, c] = positions[k];
        m(r, c) = coherences[k];
        m(c, r) = std::conj(coherences[k]);
    }
    return m;
}

DensityOperator checked_state(std::size_t n_modes, const ComplexMatrix &m, const char *family) {
    try {
        return DensityOperator(n_modes, m);
    } catch (const Error &e) {
        throw Error(ErrorKind::NotPositive, std::string(family) + " coefficients do not form a state: " + e.what());
    }
}

}  // namespace

DensityOperator general_two_mode(const TwoModeCoefficients &c) {
    return checked_state(2,
                         assemble<4, 6>(std::span<const double, 4>(c.alpha), std::span<const Complex, 6>(c.beta),
                                        two_mode_beta_positions()),
                         "two-mode");
}

DensityOperator general_three_mode(const ThreeModeCoefficients &c) {
    return checked_state(3,
                         assemble<8, 6>(std::span<const double, 8>(c.mu), std::span<const Complex, 6>(c.nu),
                                        three_mode_nu_positions()),
                         "three-mode");
}

TwoModeCoefficients two_mode_coefficients(const DensityOperator &rho) {
    if (rho.n_modes() != 2) {
        throw Error(ErrorKind::ModeCountMismatch, "two-mode coefficients need a two-mode state");
    }
    TwoModeCoefficients c;
    for (std::size_t k = 0; k < 4; ++k) {
        c.alpha[k] = rho(k, k).real();
    }
    const auto positions = two_mode_beta_positions();
    for (std::size_t k = 0; k < 6; ++k) {
        c.beta[k] = rho(positions[k].first, positions[k].second);
    }
    return c;
}

ThreeModeCoefficients three_mode_coefficients(const DensityOperator &rho, double tol) {
    if (rho.n_modes() != 3) {
        throw Error(ErrorKind::ModeCountMismatch, "three-mode coefficients need a three-mode state");
    }
    ThreeModeCoefficients c;
    for (std::size_t k = 0; k < 8; ++k) {
        c.mu[k] = rho(k, k).real();
    }
    const auto positions = three_mode_nu_positions();
    for (std::size_t k = 0; k < 6; ++k) {
        c.nu[k] = rho(positions[k].first, positions[k].second);
    }
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t col = r + 1; col < 8; ++col) {
            const bool listed = std::any_of(positions.begin(), positions.end(),
                                            [&](const auto &p) { return p.first == r && p.second == col; });
            if (!listed && std::abs(rho(r, col)) > tol) {
                throw Error(ErrorKind::SemanticError, "entry (" + std::to_string(r + 1) + "," + std::to_string(col + 1) +
                                                          ") lies outside the equal-charge three-mode pattern");
            }
        }
    }
    return c;
}

ChargePattern ChargePattern::uniform(std::size_t n_modes) {
    return ChargePattern{std::vector<int>(n_modes, 1), 0};
}

ChargePattern ChargePattern::parity(std::size_t n_modes) {
    return ChargePattern{std::vector<int>(n_modes, 1), 2};
}

long ChargePattern::charge_of(std::size_t index) const {
    const std::size_t n = charges.size();
    long total = 0;
    for (std::size_t mode = 1; mode <= n; ++mode) {
        if (mode_occupied(index, mode, n)) {
            total += charges[mode - 1];
        }
    }
    if (modulus > 0) {
        total %= modulus;
        if (total < 0) {
            total += modulus;
        }
    }
    return total;
}

bool check_ssr(const ComplexMatrix &m, std::size_t n_modes, const ChargePattern &charges, double tol) {
    if (charges.charges.size() != n_modes || m.rows() != (std::size_t{1} << n_modes) || !m.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "charge pattern and state disagree on the mode count");
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (charges.charge_of(r) != charges.charge_of(c) && std::abs(m(r, c)) > tol) {
                return false;
            }
        }
    }
    return true;
}

bool check_ssr(const DensityOperator &rho, const ChargePattern &charges, double tol) {
    return check_ssr(rho.matrix(), rho.n_modes(), charges, tol);
}

std::vector<std::vector<std::size_t>> charge_sectors(std::size_t n_modes, const ChargePattern &charges) {
    if (charges.charges.size() != n_modes) {
        throw Error(ErrorKind::DimensionMismatch, "charge pattern length differs from mode count");
    }
    std::map<long, std::vector<std::size_t>> by_charge;
    for (std::size_t index = 0; index < (std::size_t{1} << n_modes); ++index) {
        by_charge[charges.charge_of(index)].push_back(index);
    }
    std::vector<std::vector<std::size_t>> sectors;
    for (auto &[charge, members] : by_charge) {
        sectors.push_back(std::move(members));
    }
    return sectors;
}

DensityOperator random_state(std::size_t n_modes, std::size_t rank, std::uint64_t seed,
                             const std::optional<ChargePattern> &ssr) {
    if (n_modes == 0 || n_modes > kMaxModes) {
        throw Error(ErrorKind::TooManyModes, "mode count out of range");
    }
    const std::size_t dim = std::size_t{1} << n_modes;
    if (rank == 0 || rank > dim) {
        throw Error(ErrorKind::DimensionMismatch, "rank must lie in [1, 2^n]");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::vector<std::size_t>> sectors;
    std::vector<double> sector_weights;
    if (ssr) {
        sectors = charge_sectors(n_modes, *ssr);
        for (const auto &s : sectors) {
            sector_weights.push_back(static_cast<double>(s.size()));
        }
    } else {
        sectors.emplace_back(dim);
        std::iota(sectors.front().begin(), sectors.front().end(), std::size_t{0});
        sector_weights.push_back(1.0);
    }
    std::discrete_distribution<std::size_t> pick_sector(sector_weights.begin(), sector_weights.end());

    ComplexMatrix sum(dim, dim);
    for (std::size_t k = 0; k < rank; ++k) {
        const auto &support = sectors[pick_sector(rng)];
        std::vector<Complex> v(dim);
        for (std::size_t index : support) {
            v[index] = Complex(gauss(rng), gauss(rng));
        }
        sum += outer_product(v);
    }
    sum *= 1.0 / sum.trace().real();
    return DensityOperator(n_modes, sum);
}

}  // namespace fermode
