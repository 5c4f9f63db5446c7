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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fermode/error.hpp"
#include "fermode/trace.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

using namespace fermode;

namespace {

// |ket><bra| for occupation bitstrings.
ComplexMatrix unit(std::size_t n_modes, const char *ket, const char *bra) {
    const std::size_t dim = std::size_t{1} << n_modes;
    ComplexMatrix m(dim, dim);
    m(OccupationState::from_bits(ket).index(), OccupationState::from_bits(bra).index()) = 1.0;
    return m;
}

ComplexMatrix trace_one(const ComplexMatrix &m, std::size_t n_modes, std::size_t mode) {
    const std::array<std::size_t, 1> traced{mode};
    return inside_out_partial_trace(m, n_modes, traced);
}

std::vector<std::vector<std::size_t>> proper_subsets(std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> kept;
        for (std::size_t mode = 1; mode <= n; ++mode) {
            if (mask & (std::size_t{1} << (mode - 1))) {
                kept.push_back(mode);
            }
        }
        out.push_back(kept);
    }
    return out;
}

}  // namespace

TEST(partition, construction_and_indexing) {
    const ModePartition p(4, {3, 1});
    EXPECT_EQ(p.kept(), (std::vector<std::size_t>{1, 3}));
    EXPECT_EQ(p.traced(), (std::vector<std::size_t>{2, 4}));
    for (std::size_t g = 0; g < 16; ++g) {
        EXPECT_EQ(p.compose(p.kept_part(g), p.traced_part(g)), g);
    }
    EXPECT_EQ(ModePartition::tracing(4, {2, 4}), p);
    EXPECT_EQ(p.complement().kept(), p.traced());
    EXPECT_THROW(ModePartition(3, {}), Error);
    EXPECT_THROW(ModePartition(3, {1, 2, 3}), Error);
    EXPECT_THROW(ModePartition(3, {1, 1}), Error);
    EXPECT_THROW(ModePartition(3, {4}), Error);
}

TEST(inside_out, diagonal_rules) {
    for (std::size_t m = 1; m <= 2; ++m) {
        const std::size_t other = 3 - m;
        // Tr_m |0><0| = |0><0|
        EXPECT_EQ(trace_one(unit(2, "00", "00"), 2, m), unit(1, "0", "0"));
        // Tr_m |1_n><1_n| = δ_mn |0><0| + (1 - δ_mn) |1_n><1_n|
        const char *only_m = m == 1 ? "10" : "01";
        const char *only_other = m == 1 ? "01" : "10";
        EXPECT_EQ(trace_one(unit(2, only_m, only_m), 2, m), unit(1, "0", "0"));
        EXPECT_EQ(trace_one(unit(2, only_other, only_other), 2, m), unit(1, "1", "1"));
        // Tr_m |1_m 1_n><1_m 1_n| = |1_n><1_n|
        EXPECT_EQ(trace_one(unit(2, "11", "11"), 2, m), unit(1, "1", "1")) << other;
    }
}

TEST(inside_out, vanishing_and_trivial_off_diagonals) {
    const ComplexMatrix zero(2, 2);
    for (std::size_t m = 1; m <= 2; ++m) {
        const char *only_m = m == 1 ? "10" : "01";
        const char *only_n = m == 1 ? "01" : "10";
        EXPECT_EQ(trace_one(unit(2, only_m, only_n), 2, m), zero);
        EXPECT_EQ(trace_one(unit(2, "00", "11"), 2, m), zero);
        EXPECT_EQ(trace_one(unit(2, only_n, "11"), 2, m), zero);
        // Tr_m |0><1_n| = |0><1_n| (m ≠ n), Tr_m |0><1_m| = 0.
        EXPECT_EQ(trace_one(unit(2, "00", only_n), 2, m), unit(1, "0", "1"));
        EXPECT_EQ(trace_one(unit(2, "00", only_m), 2, m), zero);
    }
}

TEST(inside_out, ambiguous_element_resolved) {
    // Tr_m(b_m† |0><0| b_m b_n) = |0><1_n| for both orderings of the labels.
    const LadderOperators ops(2);
    for (std::size_t m = 1; m <= 2; ++m) {
        const std::size_t n = 3 - m;
        const OperatorString s{{{LadderKind::Creator, m}, {LadderKind::Annihilator, m}, {LadderKind::Annihilator, n}}, 1};
        EXPECT_EQ(trace_one(operator_string_to_matrix(s, ops), 2, m), unit(1, "0", "1")) << "m=" << m;
    }
}

TEST(inside_out, two_mode_closed_forms) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const DensityOperator rho = random_state(2, 1 + seed % 4, seed);
        const TwoModeCoefficients c = two_mode_coefficients(rho);
        const auto &a = c.alpha;
        const auto &b = c.beta;

        const DensityOperator keep_first = inside_out_partial_trace(rho, ModePartition(2, {1}));
        EXPECT_NEAR(keep_first(0, 0).real(), a[0] + a[1], 1e-12);
        EXPECT_NEAR(keep_first(1, 1).real(), a[2] + a[3], 1e-12);
        EXPECT_LT(std::abs(keep_first(0, 1) - (b[1] + b[4])), 1e-12);

        const DensityOperator keep_second = inside_out_partial_trace(rho, ModePartition(2, {2}));
        EXPECT_NEAR(keep_second(0, 0).real(), a[0] + a[2], 1e-12);
        EXPECT_NEAR(keep_second(1, 1).real(), a[1] + a[3], 1e-12);
        EXPECT_LT(std::abs(keep_second(0, 1) - (b[0] - b[5])), 1e-12);
    }
}

TEST(oracle, two_mode_expectation_values) {
    const LadderOperators ops(2);
    const Complex i(0.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DensityOperator rho = random_state(2, 4, seed);
        const TwoModeCoefficients c = two_mode_coefficients(rho);
        const auto &b = c.beta;
        const ComplexMatrix x1 = ops.annihilator(1) + ops.creator(1);
        const ComplexMatrix p1 = i * (ops.annihilator(1) - ops.creator(1));
        const ComplexMatrix x2 = ops.annihilator(2) + ops.creator(2);
        const ComplexMatrix p2 = i * (ops.annihilator(2) - ops.creator(2));
        EXPECT_NEAR(expectation(x1, rho.matrix()), 2 * (b[1] + b[4]).real(), 1e-12);
        EXPECT_NEAR(expectation(p1, rho.matrix()), 2 * (b[1] + b[4]).imag(), 1e-12);
        EXPECT_NEAR(expectation(x2, rho.matrix()), 2 * (b[0] - b[5]).real(), 1e-12);
        EXPECT_NEAR(expectation(p2, rho.matrix()), 2 * (b[0] - b[5]).imag(), 1e-12);
    }
}

TEST(oracle, three_mode_hopping_expectations) {
    const LadderOperators ops(3);
    auto hop = [&](std::size_t j, std::size_t k) {
        return ops.creator(j) * ops.annihilator(k) + ops.creator(k) * ops.annihilator(j);
    };
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DensityOperator rho = random_state(3, 3, seed, ChargePattern::uniform(3));
        const ThreeModeCoefficients c = three_mode_coefficients(rho);
        const auto &nu = c.nu;
        EXPECT_NEAR(expectation(hop(1, 2), rho.matrix()), 2 * (nu[2] + nu[3]).real(), 1e-12);
        EXPECT_NEAR(expectation(hop(1, 3), rho.matrix()), 2 * (nu[1] - nu[4]).real(), 1e-12);
        EXPECT_NEAR(expectation(hop(2, 3), rho.matrix()), 2 * (nu[0] + nu[5]).real(), 1e-12);
    }
}

TEST(oracle, operator_pairs_are_hermitian_and_complete) {
    const ConsistencyOracle oracle(ModePartition(4, {1, 3, 4}));
    std::size_t count = 0;
    for (const auto &pair : oracle.local_pairs()) {
        EXPECT_LE(hermiticity_residual(pair.ox), 1e-12);
        EXPECT_LE(hermiticity_residual(pair.op), 1e-12);
        count += (pair.lambda.empty() && pair.tau.empty()) ? 1 : 2;
    }
    EXPECT_EQ(count, 64u);
    for (const auto &pair : oracle.embedded_pairs()) {
        EXPECT_LE(hermiticity_residual(pair.ox), 1e-12);
        EXPECT_LE(hermiticity_residual(pair.op), 1e-12);
    }
}

TEST(oracle, agrees_with_inside_out_on_all_subsets) {
    for (std::size_t n = 2; n <= 5; ++n) {
        for (const auto &kept : proper_subsets(n)) {
            const ModePartition p(n, kept);
            const ConsistencyOracle oracle(p);
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const DensityOperator rho = random_state(n, 1 + seed, 1000 * n + seed);
                const DensityOperator fast = inside_out_partial_trace(rho, p);
                const DensityOperator slow = oracle.reduce(rho);
                EXPECT_LT(max_abs_diff(fast.matrix(), slow.matrix()), 1e-10) << p.describe();
            }
        }
    }
}

TEST(oracle, free_function_matches_class) {
    const DensityOperator rho = random_state(3, 2, 77);
    const ModePartition p(3, {2});
    EXPECT_LT(max_abs_diff(oracle_partial_trace(rho, p).matrix(), ConsistencyOracle(p).reduce(rho).matrix()), 1e-14);
}

TEST(oracle, linear_on_matrix_units) {
    // Reducing a bare |R><C| through the oracle reproduces the inside-out sign.
    const std::size_t n = 3;
    const ModePartition p(n, {2});
    const ConsistencyOracle oracle(p);
    for (std::size_t r = 0; r < 8; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
            ComplexMatrix e(8, 8);
            e(r, c) = 1.0;
            EXPECT_LT(max_abs_diff(oracle.reduce_matrix(e), inside_out_partial_trace(e, n, p.traced())), 1e-12);
        }
    }
}

TEST(reduced_state, preserves_trace_and_expectations) {
    const std::size_t n = 4;
    for (const auto &kept : proper_subsets(n)) {
        const ModePartition p(n, kept);
        const ConsistencyOracle oracle(p);
        const DensityOperator rho = random_state(n, 5, 31 + kept.size());
        const DensityOperator reduced = inside_out_partial_trace(rho, p);
        EXPECT_NEAR(reduced.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_LE(reduced.spectrum().eigenvalues.back(), 1.0);
        EXPECT_GE(reduced.spectrum().eigenvalues.back(), -1e-12);
        for (std::size_t k = 0; k < oracle.local_pairs().size(); ++k) {
            const auto &local = oracle.local_pairs()[k];
            const auto &global = oracle.embedded_pairs()[k];
            EXPECT_NEAR(expectation(global.ox, rho.matrix()), expectation(local.ox, reduced.matrix()), 1e-10);
            EXPECT_NEAR(expectation(global.op, rho.matrix()), expectation(local.op, reduced.matrix()), 1e-10);
        }
    }
}

TEST(sequential, order_is_irrelevant) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DensityOperator rho = random_state(3, 4, seed);
        const std::array<std::size_t, 2> a{2, 3};
        const std::array<std::size_t, 2> b{3, 2};
        const ComplexMatrix one_shot = inside_out_partial_trace(rho, ModePartition(3, {1})).matrix();
        EXPECT_LT(max_abs_diff(sequential_trace(rho, a), one_shot), 1e-12);
        EXPECT_LT(max_abs_diff(sequential_trace(rho, b), one_shot), 1e-12);
    }
}

TEST(sequential, five_modes_pairs) {
    const DensityOperator rho = random_state(5, 6, 2024);
    for (std::size_t x = 1; x <= 5; ++x) {
        for (std::size_t y = x + 1; y <= 5; ++y) {
            const ComplexMatrix one_shot = inside_out_partial_trace(rho, ModePartition::tracing(5, {x, y})).matrix();
            const std::array<std::size_t, 2> forward{x, y};
            const std::array<std::size_t, 2> backward{y, x};
            EXPECT_LT(max_abs_diff(sequential_trace(rho, forward), one_shot), 1e-12);
            EXPECT_LT(max_abs_diff(sequential_trace(rho, backward), one_shot), 1e-12);
        }
    }
}

TEST(sequential, full_trace_and_errors) {
    const DensityOperator rho = random_state(3, 3, 8);
    const std::array<std::size_t, 3> all{2, 1, 3};
    const ComplexMatrix scalar = sequential_trace(rho, all);
    ASSERT_EQ(scalar.rows(), 1u);
    EXPECT_NEAR(std::abs(scalar(0, 0) - 1.0), 0.0, 1e-12);
    const std::array<std::size_t, 2> repeated{2, 2};
    EXPECT_THROW(sequential_trace(rho, repeated), Error);
}

TEST(inside_out, partition_mismatch) {
    const DensityOperator rho = random_state(3, 2, 1);
    try {
        inside_out_partial_trace(rho, ModePartition(2, {1}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::PartitionMismatch);
    }
}
