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

#include "fermode/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fermode/error.hpp"

namespace fermode {

OccupationState::OccupationState(std::vector<std::uint8_t> occupations) : occupations_(std::move(occupations)) {
    if (occupations_.empty() || occupations_.size() > kMaxModes) {
        throw Error(ErrorKind::TooManyModes, "occupation state needs between 1 and " + std::to_string(kMaxModes) + " modes");
    }
    for (auto bit : occupations_) {
        if (bit > 1) {
            throw Error(ErrorKind::SemanticError, "fermionic occupation numbers are 0 or 1");
        }
    }
}

OccupationState OccupationState::vacuum(std::size_t n_modes) {
    return OccupationState(std::vector<std::uint8_t>(n_modes, 0));
}

OccupationState OccupationState::from_index(std::size_t n_modes, std::size_t index) {
    if (n_modes == 0 || n_modes > kMaxModes || index >= (std::size_t{1} << n_modes)) {
        throw Error(ErrorKind::DimensionMismatch, "basis index out of range");
    }
    std::vector<std::uint8_t> bits(n_modes);
    for (std::size_t mode = 1; mode <= n_modes; ++mode) {
        bits[mode - 1] = mode_occupied(index, mode, n_modes) ? 1 : 0;
    }
    return OccupationState(std::move(bits));
}

OccupationState OccupationState::from_bits(std::string_view bits) {
    std::vector<std::uint8_t> occ;
    occ.reserve(bits.size());
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw Error(ErrorKind::SemanticError, "occupation bits must be 0 or 1");
        }
        occ.push_back(ch == '1' ? 1 : 0);
    }
    return OccupationState(std::move(occ));
}

bool OccupationState::occupied(std::size_t mode) const {
    if (mode == 0 || mode > occupations_.size()) {
        throw Error(ErrorKind::ModeCountMismatch, "mode label " + std::to_string(mode) + " out of range");
    }
    return occupations_[mode - 1] != 0;
}

std::size_t OccupationState::index() const {
    std::size_t index = 0;
    for (auto bit : occupations_) {
        index = (index << 1) | bit;
    }
    return index;
}

std::size_t OccupationState::particle_count() const {
    return static_cast<std::size_t>(std::count(occupations_.begin(), occupations_.end(), 1));
}

std::string OccupationState::bits() const {
    std::string out;
    for (auto bit : occupations_) {
        out.push_back(bit ? '1' : '0');
    }
    return out;
}

LadderOperators::LadderOperators(std::size_t n_modes) : n_modes_(n_modes) {
    if (n_modes == 0 || n_modes > kMaxModes) {
        throw Error(ErrorKind::TooManyModes,
                    "mode count " + std::to_string(n_modes) + " outside [1, " + std::to_string(kMaxModes) + "]");
    }
}

void LadderOperators::check_mode(std::size_t mode) const {
    if (mode == 0 || mode > n_modes_) {
        throw Error(ErrorKind::ModeCountMismatch,
                    "mode label " + std::to_string(mode) + " outside [1, " + std::to_string(n_modes_) + "]");
    }
}

std::optional<std::pair<std::size_t, int>> LadderOperators::annihilate(std::size_t mode, std::size_t index) const {
    check_mode(mode);
    if (!mode_occupied(index, mode, n_modes_)) {
        return std::nullopt;
    }
    const auto below = static_cast<unsigned>(std::popcount(index >> (n_modes_ - mode + 1)));
    return std::pair{index ^ mode_bit(mode, n_modes_), (below % 2 == 0) ? 1 : -1};
}

std::optional<std::pair<std::size_t, int>> LadderOperators::create(std::size_t mode, std::size_t index) const {
    check_mode(mode);
    if (mode_occupied(index, mode, n_modes_)) {
        return std::nullopt;
    }
    const auto below = static_cast<unsigned>(std::popcount(index >> (n_modes_ - mode + 1)));
    return std::pair{index ^ mode_bit(mode, n_modes_), (below % 2 == 0) ? 1 : -1};
}

ComplexMatrix LadderOperators::annihilator(std::size_t mode) const {
    check_mode(mode);
    ComplexMatrix m(dimension(), dimension());
    for (std::size_t col = 0; col < dimension(); ++col) {
        if (auto hit = annihilate(mode, col)) {
            m(hit->first, col) = hit->second;
        }
    }
    return m;
}

ComplexMatrix LadderOperators::creator(std::size_t mode) const {
    check_mode(mode);
    ComplexMatrix m(dimension(), dimension());
    for (std::size_t col = 0; col < dimension(); ++col) {
        if (auto hit = create(mode, col)) {
            m(hit->first, col) = hit->second;
        }
    }
    return m;
}

ComplexMatrix LadderOperators::number_operator(std::size_t mode) const {
    check_mode(mode);
    ComplexMatrix m(dimension(), dimension());
    for (std::size_t k = 0; k < dimension(); ++k) {
        m(k, k) = mode_occupied(k, mode, n_modes_) ? 1.0 : 0.0;
    }
    return m;
}

ComplexMatrix LadderOperators::total_number_operator() const {
    ComplexMatrix total(dimension(), dimension());
    for (std::size_t mode = 1; mode <= n_modes_; ++mode) {
        total += creator(mode) * annihilator(mode);
    }
    return total;
}

ComplexMatrix LadderOperators::vacuum_projector() const {
    ComplexMatrix m(dimension(), dimension());
    m(0, 0) = 1.0;
    return m;
}

ComplexMatrix LadderOperators::identity() const {
    return ComplexMatrix::identity(dimension());
}

LadderOperators build_ladder_operators(std::size_t n_modes) {
    return LadderOperators(n_modes);
}

double car_residual(const LadderOperators &ops) {
    const std::size_t n = ops.n_modes();
    std::vector<ComplexMatrix> b;
    std::vector<ComplexMatrix> bd;
    for (std::size_t mode = 1; mode <= n; ++mode) {
        b.push_back(ops.annihilator(mode));
        bd.push_back(ops.creator(mode));
    }
    const ComplexMatrix id = ops.identity();
    const ComplexMatrix zero(ops.dimension(), ops.dimension());
    double worst = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const ComplexMatrix mixed = b[m] * bd[k] + bd[k] * b[m];
            worst = std::max(worst, max_abs_diff(mixed, m == k ? id : zero));
            if (k >= m) {
                worst = std::max(worst, max_abs_diff(b[m] * b[k] + b[k] * b[m], zero));
                worst = std::max(worst, max_abs_diff(bd[m] * bd[k] + bd[k] * bd[m], zero));
            }
        }
    }
    return worst;
}

std::vector<Complex> basis_state(const OccupationState &occ, const LadderOperators &ops) {
    if (occ.n_modes() != ops.n_modes()) {
        throw Error(ErrorKind::ModeCountMismatch, "occupation state and ladder operators have different mode counts");
    }
    std::vector<Complex> state(ops.dimension());
    state[0] = 1.0;
    // Rightmost creator acts first.
    for (std::size_t mode = ops.n_modes(); mode >= 1; --mode) {
        if (occ.occupied(mode)) {
            state = matvec(ops.creator(mode), state);
        }
    }
    return state;
}

ComplexMatrix operator_string_to_matrix(const OperatorString &s, const LadderOperators &ops) {
    for (const auto &factor : s.factors) {
        if (factor.mode == 0 || factor.mode > ops.n_modes()) {
            throw Error(ErrorKind::MalformedString,
                        "mode label " + std::to_string(factor.mode) + " outside [1, " + std::to_string(ops.n_modes()) + "]");
        }
    }
    if (s.projector_position && *s.projector_position > s.factors.size()) {
        throw Error(ErrorKind::MalformedString, "vacuum projector position past the end of the string");
    }
    ComplexMatrix product = ops.identity();
    for (std::size_t k = 0; k <= s.factors.size(); ++k) {
        if (s.projector_position && *s.projector_position == k) {
            product = product * ops.vacuum_projector();
        }
        if (k == s.factors.size()) {
            break;
        }
        const auto &factor = s.factors[k];
        product = product * (factor.kind == LadderKind::Creator ? ops.creator(factor.mode) : ops.annihilator(factor.mode));
    }
    return product;
}

ComplexMatrix mode_relabeling(std::size_t n_modes, const std::vector<std::size_t> &new_label) {
    if (new_label.size() != n_modes) {
        throw Error(ErrorKind::ModeCountMismatch, "relabeling must name every mode");
    }
    std::vector<std::size_t> sorted = new_label;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < n_modes; ++k) {
        if (sorted[k] != k + 1) {
            throw Error(ErrorKind::SemanticError, "relabeling is not a permutation of 1..n");
        }
    }
    const LadderOperators ops(n_modes);
    ComplexMatrix u(ops.dimension(), ops.dimension());
    for (std::size_t index = 0; index < ops.dimension(); ++index) {
        std::size_t target = 0;
        int inversions = 0;
        for (std::size_t j = 1; j <= n_modes; ++j) {
            if (!mode_occupied(index, j, n_modes)) {
                continue;
            }
            target |= mode_bit(new_label[j - 1], n_modes);
            for (std::size_t k = j + 1; k <= n_modes; ++k) {
                if (mode_occupied(index, k, n_modes) && new_label[j - 1] > new_label[k - 1]) {
                    ++inversions;
                }
            }
        }
        u(target, index) = (inversions % 2 == 0) ? 1.0 : -1.0;
    }
    return u;
}

}  // namespace fermode
