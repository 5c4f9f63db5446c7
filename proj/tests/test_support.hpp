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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "fermode/numerics.hpp"

namespace fermode::test_util {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (auto &z : m.entries()) {
        z = Complex(gauss(rng), gauss(rng));
    }
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64 &rng) {
    return hermitian_part(random_matrix(n, n, rng));
}

inline Complex random_phase(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    return std::polar(1.0, angle(rng));
}

}  // namespace fermode::test_util
