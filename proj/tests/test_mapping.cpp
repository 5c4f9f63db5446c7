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
#include <random>
#include <set>

#include "fermode/error.hpp"
#include "fermode/mapping.hpp"
#include "gtest/gtest.h"
#include "test_support.hpp"

using namespace fermode;

namespace {

// Two-mode state with alpha = 1/4 and every beta of modulus `magnitude`
// (PSD by diagonal dominance for magnitude < 1/12).
DensityOperator generic_two_mode(double magnitude, std::mt19937_64 &rng) {
    TwoModeCoefficients c;
    c.alpha = {0.25, 0.25, 0.25, 0.25};
    for (auto &b : c.beta) {
        b = magnitude * test_util::random_phase(rng);
    }
    return general_two_mode(c);
}

std::size_t index_of(const char *bits) {
    return OccupationState::from_bits(bits).index();
}

}  // namespace

TEST(sign_assignment, normalization_and_codes) {
    const SignAssignment s(2, {-1, 1, -1, -1});
    EXPECT_EQ(s.signs(), (std::vector<int>{1, -1, 1, 1}));
    EXPECT_EQ(s.code(), 1u);
    EXPECT_EQ(s.to_string(), "+-++");
    for (std::uint64_t code = 0; code < 128; ++code) {
        EXPECT_EQ(SignAssignment::from_code(3, code).code(), code);
    }
    EXPECT_THROW(SignAssignment(2, {1, 1, 1}), Error);
    EXPECT_THROW(SignAssignment(2, {1, 0, 1, 1}), Error);
    EXPECT_THROW(SignAssignment::from_code(2, 8), Error);
}

TEST(apply_mapping, identity_and_involution) {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DensityOperator rho = random_state(3, 3, seed);
        EXPECT_EQ(apply_mapping(rho, SignAssignment::identity(3)), rho.matrix());
        const SignAssignment s = SignAssignment::from_code(3, rng() % 128);
        EXPECT_EQ(apply_mapping(apply_mapping(rho, s), s), rho.matrix());
    }
}

TEST(apply_mapping, preserves_spectrum_trace_and_hermiticity) {
    for (std::uint64_t code = 0; code < 8; ++code) {
        const SignAssignment s = SignAssignment::from_code(2, code);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const DensityOperator rho = random_state(2, 4, seed);
            const ComplexMatrix image = apply_mapping(rho, s);
            EXPECT_LE(hermiticity_residual(image), 1e-15);
            EXPECT_NEAR(image.trace().real(), 1.0, 1e-12);
            const auto a = rho.spectrum().eigenvalues;
            const auto b = hermitian_eigenvalues(image).eigenvalues;
            for (std::size_t k = 0; k < a.size(); ++k) {
                EXPECT_NEAR(a[k], b[k], 1e-10);
            }
        }
    }
}

TEST(apply_mapping, flipping_fourth_vector_negates_its_coherences) {
    std::mt19937_64 rng(11);
    const DensityOperator rho = generic_two_mode(0.08, rng);
    const TwoModeCoefficients before = two_mode_coefficients(rho);
    const DensityOperator image(2, apply_mapping(rho, SignAssignment(2, {1, 1, 1, -1})));
    const TwoModeCoefficients after = two_mode_coefficients(image);
    for (std::size_t k = 0; k < 6; ++k) {
        const bool touches_fourth = k == 2 || k == 4 || k == 5;
        EXPECT_EQ(after.beta[k], touches_fourth ? -before.beta[k] : before.beta[k]) << "beta" << k + 1;
    }
    EXPECT_EQ(after.alpha, before.alpha);
}

TEST(apply_mapping, dimension_mismatch) {
    const DensityOperator rho = random_state(2, 1, 0);
    EXPECT_THROW(apply_mapping(rho, SignAssignment::identity(3)), Error);
}

TEST(tensor_trace, product_states_factor) {
    std::mt19937_64 rng(5);
    const ComplexMatrix a = test_util::random_matrix(2, 2, rng);
    const ComplexMatrix b = test_util::random_matrix(4, 4, rng);
    const ComplexMatrix ab = kron(a, b);
    const std::array<std::size_t, 2> trace_b{2, 3};
    const std::array<std::size_t, 1> trace_a{1};
    EXPECT_LT(max_abs_diff(tensor_partial_trace(ab, 3, trace_b), b.trace() * a), 1e-12);
    EXPECT_LT(max_abs_diff(tensor_partial_trace(ab, 3, trace_a), a.trace() * b), 1e-12);
    const std::array<std::size_t, 3> all{1, 2, 3};
    EXPECT_NEAR(std::abs(tensor_partial_trace(ab, 3, all)(0, 0) - ab.trace()), 0.0, 1e-12);
}

TEST(coefficient_flow, two_mode_reductions) {
    // Keep mode 1: reduced coherence collects beta2 (0,2) and beta5 (1,3), both +.
    const auto keep_first = coefficient_flow(2, ModePartition(2, {1}));
    const auto coherence = std::find_if(keep_first.begin(), keep_first.end(),
                                        [](const ReducedFlow &f) { return f.row == 0 && f.col == 1; });
    ASSERT_NE(coherence, keep_first.end());
    ASSERT_EQ(coherence->contributions.size(), 2u);
    EXPECT_EQ(coherence->contributions[0].row, 0u);
    EXPECT_EQ(coherence->contributions[0].col, 2u);
    EXPECT_EQ(coherence->contributions[0].sign, 1);
    EXPECT_EQ(coherence->contributions[1].row, 1u);
    EXPECT_EQ(coherence->contributions[1].col, 3u);
    EXPECT_EQ(coherence->contributions[1].sign, 1);

    // Keep mode 2: beta1 (0,1) enters with +, beta6 (2,3) with -.
    const auto keep_second = coefficient_flow(2, ModePartition(2, {2}));
    const auto other = std::find_if(keep_second.begin(), keep_second.end(),
                                    [](const ReducedFlow &f) { return f.row == 0 && f.col == 1; });
    ASSERT_NE(other, keep_second.end());
    ASSERT_EQ(other->contributions.size(), 2u);
    EXPECT_EQ(other->contributions[0].row, 0u);
    EXPECT_EQ(other->contributions[0].col, 1u);
    EXPECT_EQ(other->contributions[0].sign, 1);
    EXPECT_EQ(other->contributions[1].row, 2u);
    EXPECT_EQ(other->contributions[1].col, 3u);
    EXPECT_EQ(other->contributions[1].sign, -1);
}

TEST(coefficient_flow, three_mode_pair_signs) {
    const auto nu = three_mode_nu_positions();
    // Relative sign between the two coherences feeding the surviving
    // reduced coherence when `traced` is removed.
    auto relative = [&](std::size_t traced, std::size_t first, std::size_t second) {
        int a = 0;
        int b = 0;
        for (const ReducedFlow &f : coefficient_flow(3, ModePartition::tracing(3, {traced}))) {
            for (const auto &c : f.contributions) {
                if (c.row == nu[first].first && c.col == nu[first].second) a = c.sign;
                if (c.row == nu[second].first && c.col == nu[second].second) b = c.sign;
            }
        }
        return a * b;
    };
    EXPECT_EQ(relative(3, 2, 3), 1);   // nu3, nu4
    EXPECT_EQ(relative(2, 1, 4), -1);  // nu2, nu5
    EXPECT_EQ(relative(1, 0, 5), 1);   // nu1, nu6
}

TEST(coefficient_flow, reproduces_fermionic_trace) {
    std::mt19937_64 rng(17);
    for (const std::size_t n : {2, 3, 4}) {
        const ComplexMatrix m = test_util::random_matrix(std::size_t{1} << n, std::size_t{1} << n, rng);
        for (std::size_t mode = 1; mode <= n; ++mode) {
            const ModePartition p = ModePartition::tracing(n, {mode});
            const ComplexMatrix expected = inside_out_partial_trace(m, n, p.traced());
            for (const ReducedFlow &f : coefficient_flow(n, p)) {
                Complex sum = 0.0;
                for (const auto &c : f.contributions) {
                    sum += static_cast<double>(c.sign) * m(c.row, c.col);
                }
                EXPECT_LT(std::abs(sum - expected(f.row, f.col)), 1e-12);
            }
        }
    }
}

TEST(sparsity, builders) {
    EXPECT_EQ(SparsityPattern::unrestricted(2).allowed().size(), 6u);
    const SparsityPattern ssr = SparsityPattern::charge_conserving(2, ChargePattern::uniform(2));
    ASSERT_EQ(ssr.allowed().size(), 1u);
    EXPECT_EQ(ssr.allowed()[0], std::make_pair(std::size_t{1}, std::size_t{2}));
    const SparsityPattern three = SparsityPattern::charge_conserving(3, ChargePattern::uniform(3));
    const auto nu = three_mode_nu_positions();
    const std::vector<std::pair<std::size_t, std::size_t>> expected(nu.begin(), nu.end());
    EXPECT_EQ(three.allowed(), expected);
    EXPECT_TRUE(ssr.allows(2, 1));
    EXPECT_FALSE(ssr.allows(0, 3));
    EXPECT_THROW(SparsityPattern(2, {{0, 4}}), Error);
}

TEST(search, two_mode_unrestricted_has_no_mapping) {
    const MappingVerdict v = consistent_mapping_search(SparsityPattern::unrestricted(2));
    EXPECT_FALSE(v.exists);
    EXPECT_TRUE(v.witnesses.empty());
    // beta1/beta6 against beta2/beta5: four equations, none redundant.
    EXPECT_EQ(v.obstruction.size(), 4u);
}

TEST(search, two_mode_charge_ssr_admits_every_sign) {
    const MappingVerdict v =
        consistent_mapping_search(SparsityPattern::charge_conserving(2, ChargePattern::uniform(2)));
    EXPECT_TRUE(v.exists);
    EXPECT_EQ(v.witnesses.size(), 8u);
    EXPECT_TRUE(v.obstruction.empty());
    for (std::size_t k = 0; k < v.witnesses.size(); ++k) {
        EXPECT_EQ(v.witnesses[k].code(), k);
    }
}

TEST(search, three_mode_equal_charge_has_no_mapping) {
    const MappingVerdict v =
        consistent_mapping_search(SparsityPattern::charge_conserving(3, ChargePattern::uniform(3)));
    EXPECT_FALSE(v.exists);
    EXPECT_EQ(v.obstruction.size(), 6u);
    std::set<std::pair<std::size_t, std::size_t>> used;
    for (const auto &eq : v.obstruction) {
        used.emplace(eq.row, eq.col);
        EXPECT_FALSE(eq.describe().empty());
    }
    const auto nu = three_mode_nu_positions();
    EXPECT_EQ(used, (std::set<std::pair<std::size_t, std::size_t>>(nu.begin(), nu.end())));
}

TEST(search, parity_pattern_two_modes) {
    // Parity allows beta3 (vacuum-pair) and beta4; beta3 does not survive
    // either single-mode trace, so every sign works.
    const MappingVerdict v =
        consistent_mapping_search(SparsityPattern::charge_conserving(2, ChargePattern::parity(2)));
    EXPECT_TRUE(v.exists);
    EXPECT_EQ(v.witnesses.size(), 8u);
}

TEST(search, dropping_one_coherence_restores_two_mode_mapping) {
    for (std::size_t drop : {0u, 1u, 4u, 5u}) {
        std::vector<std::pair<std::size_t, std::size_t>> allowed;
        const auto beta = two_mode_beta_positions();
        for (std::size_t k = 0; k < 6; ++k) {
            if (k != drop) {
                allowed.push_back(beta[k]);
            }
        }
        EXPECT_TRUE(consistent_mapping_search(SparsityPattern(2, allowed)).exists) << "drop beta" << drop + 1;
    }
}

TEST(search, obstruction_is_minimal_and_consistent_with_enumeration) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::pair<std::size_t, std::size_t>> allowed;
        for (std::size_t r = 0; r < 8; ++r) {
            for (std::size_t c = r + 1; c < 8; ++c) {
                if (rng() % 4 == 0) {
                    allowed.emplace_back(r, c);
                }
            }
        }
        const SparsityPattern pattern(3, allowed);
        const MappingVerdict v = consistent_mapping_search(pattern);
        EXPECT_EQ(v.exists, v.obstruction.empty());
        if (v.exists) {
            continue;
        }
        // Removing any coherence named by the obstruction from the pattern
        // breaks that obstruction; the sub-pattern spanned by it alone fails.
        std::vector<std::pair<std::size_t, std::size_t>> core;
        for (const auto &eq : v.obstruction) {
            core.emplace_back(eq.row, eq.col);
        }
        EXPECT_FALSE(consistent_mapping_search(SparsityPattern(3, core)).exists);
    }
}

TEST(search, independent_of_job_count) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::pair<std::size_t, std::size_t>> allowed;
        for (std::size_t r = 0; r < 16; ++r) {
            for (std::size_t c = r + 1; c < 16; ++c) {
                if (rng() % 12 == 0) {
                    allowed.emplace_back(r, c);
                }
            }
        }
        const SparsityPattern pattern(4, allowed);
        const MappingVerdict one = consistent_mapping_search(pattern, SearchOptions{1});
        const MappingVerdict many = consistent_mapping_search(pattern, SearchOptions{3});
        EXPECT_EQ(one.exists, many.exists);
        EXPECT_EQ(one.witnesses, many.witnesses);
    }
}

TEST(search, rejects_large_systems_and_foreign_partitions) {
    EXPECT_THROW(consistent_mapping_search(SparsityPattern::unrestricted(5)), Error);
    EXPECT_THROW(consistent_mapping_search(SparsityPattern::unrestricted(2), {ModePartition(3, {1})}), Error);
}

TEST(verify_diagram, vacuum_is_always_consistent) {
    const DensityOperator vacuum = from_pure(std::vector<Complex>{1.0, 0.0, 0.0, 0.0});
    for (std::uint64_t code = 0; code < 8; ++code) {
        for (const auto &p : single_mode_traces(2)) {
            EXPECT_EQ(verify_diagram(vacuum, SignAssignment::from_code(2, code), p, SignAssignment::identity(1)), 0.0);
        }
    }
}

TEST(verify_diagram, ssr_bell_state_any_signs) {
    const double h = 1.0 / std::sqrt(2.0);
    const DensityOperator bell = from_pure(std::vector<Complex>{0.0, h, h, 0.0});
    for (std::uint64_t code = 0; code < 8; ++code) {
        for (const auto &p : single_mode_traces(2)) {
            EXPECT_LE(verify_diagram(bell, SignAssignment::from_code(2, code), p, SignAssignment::identity(1)), 1e-12);
        }
    }
}

TEST(verify_diagram, generic_two_mode_state_breaks_every_sign) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const DensityOperator rho = generic_two_mode(0.08, rng);
        for (std::uint64_t code = 0; code < 8; ++code) {
            const SignAssignment s = SignAssignment::from_code(2, code);
            double worst = 0.0;
            for (const auto &p : single_mode_traces(2)) {
                worst = std::max(worst, best_diagram_residual(rho, s, p).first);
            }
            EXPECT_GT(worst, 0.01) << s.to_string();
        }
    }
}

TEST(verify_diagram, witnesses_pass_on_random_ssr_states) {
    const ChargePattern charges = ChargePattern::uniform(2);
    const MappingVerdict v = consistent_mapping_search(SparsityPattern::charge_conserving(2, charges));
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const DensityOperator rho = random_state(2, 1 + seed % 4, seed, charges);
        for (const auto &s : v.witnesses) {
            for (const auto &p : v.partitions) {
                EXPECT_LE(best_diagram_residual(rho, s, p).first, 1e-10);
            }
        }
    }
}

TEST(verify_diagram, three_mode_ssr_states_break_every_sign) {
    const ChargePattern charges = ChargePattern::uniform(3);
    std::vector<DensityOperator> states;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        states.push_back(random_state(3, 4, 500 + seed, charges));
    }
    for (std::uint64_t code = 0; code < 128; ++code) {
        const SignAssignment s = SignAssignment::from_code(3, code);
        double worst = 0.0;
        for (const auto &rho : states) {
            for (const auto &p : single_mode_traces(3)) {
                worst = std::max(worst, best_diagram_residual(rho, s, p).first);
            }
        }
        EXPECT_GT(worst, 1e-6) << s.to_string();
    }
}

TEST(verify_diagram, dimension_checks) {
    const DensityOperator rho = random_state(2, 2, 0);
    EXPECT_THROW(verify_diagram(rho, SignAssignment::identity(3), ModePartition(2, {1}), SignAssignment::identity(1)),
                 Error);
    EXPECT_THROW(verify_diagram(rho, SignAssignment::identity(2), ModePartition(2, {1}), SignAssignment::identity(2)),
                 Error);
}

TEST(qubit_image, requires_witness_and_covered_support) {
    const ChargePattern charges = ChargePattern::uniform(2);
    const MappingVerdict ssr = consistent_mapping_search(SparsityPattern::charge_conserving(2, charges));
    const MappingVerdict free = consistent_mapping_search(SparsityPattern::unrestricted(2));
    const DensityOperator good = random_state(2, 2, 1, charges);
    const DensityOperator bad = random_state(2, 2, 1);

    const QubitImage image = QubitImage::map(good, ssr, 3);
    EXPECT_EQ(image.witness(), ssr.witnesses[3]);
    EXPECT_EQ(image.matrix(), apply_mapping(good, ssr.witnesses[3]));
    EXPECT_TRUE(image.licenses(ModePartition(2, {1})));

    auto kind_of = [](auto &&f) {
        try {
            f();
        } catch (const Error &e) {
            return e.kind();
        }
        return ErrorKind::SyntaxError;
    };
    EXPECT_EQ(kind_of([&] { QubitImage::map(good, free); }), ErrorKind::NoMappingWitness);
    EXPECT_EQ(kind_of([&] { QubitImage::map(bad, ssr); }), ErrorKind::NoMappingWitness);
    EXPECT_EQ(kind_of([&] { QubitImage::map(good, ssr, 8); }), ErrorKind::NoMappingWitness);
    EXPECT_EQ(kind_of([&] { QubitImage::map(random_state(3, 1, 0), ssr); }), ErrorKind::NoMappingWitness);
}

TEST(search, index_helper_sanity) {
    EXPECT_EQ(index_of("01"), 1u);
    EXPECT_EQ(index_of("10"), 2u);
}
