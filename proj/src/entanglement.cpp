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

#include "fermode/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "fermode/error.hpp"
#include "fermode/fock.hpp"

namespace fermode {

namespace {

constexpr double kWeightCutoff = 1e-14;

double neg_xlog2x_ratio(double lambda, double total) {
    return lambda > 0.0 ? -lambda * std::log2(lambda / total) : 0.0;
}

// ||v||^2 times the entanglement entropy of v / ||v|| for a two-mode vector
// (|0>, |1_2>, |1_1>, |11>) reduced onto mode 1.
double weighted_entropy(const Complex *v) {
    const double a = std::norm(v[0]) + std::norm(v[1]);
    const double d = std::norm(v[2]) + std::norm(v[3]);
    const double total = a + d;
    if (total <= 0.0) {
        return 0.0;
    }
    const Complex b = v[0] * std::conj(v[2]) + v[1] * std::conj(v[3]);
    const double mid = 0.5 * total;
    const double gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    const double hi = mid + gap;
    const double lo = std::max(mid - gap, 0.0);
    return neg_xlog2x_ratio(hi, total) + neg_xlog2x_ratio(lo, total);
}

double binary_entropy(double x) {
    return neg_xlog2x_ratio(x, 1.0) + neg_xlog2x_ratio(1.0 - x, 1.0);
}

// Isometric mixing of the weighted eigenvectors of one charge sector.
class SectorProblem {
   public:
    SectorProblem(std::vector<std::vector<Complex>> weighted, std::vector<std::size_t> sector)
        : weighted_(std::move(weighted)), rank_(weighted_.size()), members_(rank_ * rank_),
          outside_(4, true), scratch_(members_ * 4) {
        for (const std::size_t i : sector) {
            outside_[i] = false;
        }
    }

    std::size_t rank() const noexcept {
        return rank_;
    }
    std::size_t members() const noexcept {
        return members_;
    }

    // Members psi_j = sum_i U_ji e_i with U = A (A^dagger A)^(-1/2); empty
    // when A is rank deficient.
    bool members_of(const std::vector<Complex> &a, std::vector<Complex> &out) const {
        ComplexMatrix gram(rank_, rank_);
        for (std::size_t i = 0; i < rank_; ++i) {
            for (std::size_t k = 0; k < rank_; ++k) {
                Complex sum = 0.0;
                for (std::size_t j = 0; j < members_; ++j) {
                    sum += std::conj(a[j * rank_ + i]) * a[j * rank_ + k];
                }
                gram(i, k) = sum;
            }
        }
        const EigenSystem es = hermitian_eigensystem(hermitian_part(gram));
        if (es.eigenvalues.back() <= 1e-12 * es.eigenvalues.front()) {
            return false;
        }
        ComplexMatrix inv_sqrt(rank_, rank_);
        for (std::size_t k = 0; k < rank_; ++k) {
            const double scale = 1.0 / std::sqrt(es.eigenvalues[k]);
            for (std::size_t r = 0; r < rank_; ++r) {
                for (std::size_t c = 0; c < rank_; ++c) {
                    inv_sqrt(r, c) += scale * es.eigenvectors(r, k) * std::conj(es.eigenvectors(c, k));
                }
            }
        }
        out.assign(members_ * 4, 0.0);
        for (std::size_t j = 0; j < members_; ++j) {
            for (std::size_t i = 0; i < rank_; ++i) {
                Complex u = 0.0;
                for (std::size_t k = 0; k < rank_; ++k) {
                    u += a[j * rank_ + k] * inv_sqrt(k, i);
                }
                for (std::size_t x = 0; x < 4; ++x) {
                    out[j * 4 + x] += u * weighted_[i][x];
                }
            }
        }
        return true;
    }

    // sum_j p_j E(psi_j); +inf for rank-deficient parameters or for any
    // member with weight outside the sector.
    double objective(const std::vector<Complex> &a) {
        if (!members_of(a, scratch_)) {
            return std::numeric_limits<double>::infinity();
        }
        return objective_of_members(scratch_);
    }

    double objective_of_members(const std::vector<Complex> &members) const {
        double total = 0.0;
        for (std::size_t j = 0; j < members_; ++j) {
            const Complex *v = &members[j * 4];
            for (std::size_t x = 0; x < 4; ++x) {
                if (outside_[x] && std::norm(v[x]) > kWeightCutoff) {
                    return std::numeric_limits<double>::infinity();
                }
            }
            total += weighted_entropy(v);
        }
        return total;
    }

   private:
    std::vector<std::vector<Complex>> weighted_;
    std::size_t rank_;
    std::size_t members_;
    std::vector<bool> outside_;
    std::vector<Complex> scratch_;
};

struct SectorResult {
    double value;
    std::vector<Complex> members;  // unnormalized, 4 entries each
};

SectorResult optimize_sector(SectorProblem &problem, const SsrEofBudget &budget, std::uint64_t seed,
                             std::size_t sector_index) {
    const std::size_t n_params = problem.members() * problem.rank();
    SectorResult best{std::numeric_limits<double>::infinity(), {}};
    std::vector<Complex> a(n_params);
    std::vector<Complex> trial(n_params);
    const std::size_t restarts = std::max<std::size_t>(budget.restarts, 1);
    for (std::size_t restart = 0; restart < restarts; ++restart) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(sector_index), static_cast<std::uint32_t>(restart)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        if (restart == 0) {
            std::fill(a.begin(), a.end(), 0.0);
            for (std::size_t i = 0; i < problem.rank(); ++i) {
                a[i * problem.rank() + i] = 1.0;
            }
        } else {
            for (auto &z : a) {
                z = Complex(gauss(rng), gauss(rng));
            }
        }
        double current = problem.objective(a);
        double step = 0.3;
        for (std::size_t it = 0; it < budget.iterations; ++it) {
            for (std::size_t k = 0; k < n_params; ++k) {
                trial[k] = a[k] + step * Complex(gauss(rng), gauss(rng));
            }
            const double value = problem.objective(trial);
            if (value <= current) {
                std::swap(a, trial);
                current = value;
                step = std::min(step * 1.5, 2.0);
            } else {
                step = std::max(step * 0.9036, 1e-8);  // 1.5^(-1/4): one-fifth success rule
            }
        }
        if (current < best.value) {
            best.value = current;
            problem.members_of(a, best.members);
        }
    }
    return best;
}

void require_two_qubits(const QubitImage &image) {
    if (image.n_modes() != 2) {
        throw Error(ErrorKind::DimensionMismatch, "two-qubit measure on a " + std::to_string(image.n_modes()) +
                                                      "-mode image");
    }
}

}  // namespace

double entropy_of_entanglement(const DensityOperator &psi, const ModePartition &p) {
    if (!psi.is_pure()) {
        throw Error(ErrorKind::NotPure, "entropy of entanglement needs a pure state (purity " +
                                            std::to_string(psi.purity()) + ")");
    }
    return von_neumann_entropy(inside_out_partial_trace(psi, p).matrix());
}

ComplexMatrix partial_transpose(const ComplexMatrix &m, std::size_t n_modes, std::span<const std::size_t> modes) {
    const std::size_t dim = std::size_t{1} << n_modes;
    if (m.rows() != dim || m.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "partial transpose expects a " + std::to_string(dim) +
                                                      "-dimensional square matrix");
    }
    std::size_t mask = 0;
    for (const std::size_t mode : modes) {
        if (mode < 1 || mode > n_modes) {
            throw Error(ErrorKind::PartitionMismatch, "mode " + std::to_string(mode) + " out of range");
        }
        mask |= mode_bit(mode, n_modes);
    }
    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const std::size_t r2 = (r & ~mask) | (c & mask);
            const std::size_t c2 = (c & ~mask) | (r & mask);
            out(r2, c2) = m(r, c);
        }
    }
    return out;
}

double negativity(const QubitImage &image, const ModePartition &p) {
    if (p.n_modes() != image.n_modes()) {
        throw Error(ErrorKind::PartitionMismatch, "partition on " + std::to_string(p.n_modes()) +
                                                      " modes for a " + std::to_string(image.n_modes()) +
                                                      "-mode image");
    }
    if (!image.licenses(p)) {
        throw Error(ErrorKind::NoMappingWitness, "witness was not verified for " + p.describe());
    }
    const Spectrum spec =
        hermitian_eigenvalues(partial_transpose(image.matrix(), image.n_modes(), p.traced()));
    double sum = 0.0;
    for (const double lambda : spec.eigenvalues) {
        if (lambda < 0.0) {
            sum -= lambda;
        }
    }
    return sum;
}

double concurrence(const QubitImage &image) {
    require_two_qubits(image);
    const Complex i(0.0, 1.0);
    const ComplexMatrix sigma_y{{0.0, -i}, {i, 0.0}};
    const ComplexMatrix flip = kron(sigma_y, sigma_y);
    const ComplexMatrix &rho = image.matrix();
    const ComplexMatrix tilde = flip * rho.conjugate() * flip;
    const ComplexMatrix root = psd_sqrt(rho);
    // Eigenvalues of R = sqrt(root tilde root) are square roots of these.
    const Spectrum squared = hermitian_eigenvalues(hermitian_part(root * tilde * root));
    const double floor = numerical_zero(squared.eigenvalues.front(), 4);
    std::array<double, 4> l{};
    for (std::size_t k = 0; k < 4; ++k) {
        const double mu = squared.eigenvalues[k];
        l[k] = mu <= floor ? 0.0 : std::sqrt(mu);
    }
    return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

double eof_from_concurrence(double c) {
    c = std::clamp(c, 0.0, 1.0);
    return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double eof_wootters(const QubitImage &image) {
    return eof_from_concurrence(concurrence(image));
}

double average_entanglement(const PureDecomposition &d) {
    double total = 0.0;
    for (std::size_t k = 0; k < d.states.size(); ++k) {
        if (d.states[k].size() != 4) {
            throw Error(ErrorKind::DimensionMismatch, "ensemble member is not a two-mode vector");
        }
        total += d.weights[k] * weighted_entropy(d.states[k].data());
    }
    return total;
}

SsrEofEstimate eof_ssr_minimize(const DensityOperator &rho, const ChargePattern &charges, const SsrEofBudget &budget,
                                std::uint64_t seed) {
    if (rho.n_modes() != 2) {
        throw Error(ErrorKind::ModeCountMismatch, "SSR entanglement of formation is implemented for two modes");
    }
    if (!check_ssr(rho, charges)) {
        throw Error(ErrorKind::SsrViolation, "state has coherences between charge sectors");
    }
    SsrEofEstimate out{0.0, {}};
    const auto sectors = charge_sectors(2, charges);
    for (std::size_t s = 0; s < sectors.size(); ++s) {
        const auto &sector = sectors[s];
        ComplexMatrix block(sector.size(), sector.size());
        for (std::size_t r = 0; r < sector.size(); ++r) {
            for (std::size_t c = 0; c < sector.size(); ++c) {
                block(r, c) = rho(sector[r], sector[c]);
            }
        }
        const EigenSystem es = hermitian_eigensystem(block);
        std::vector<std::vector<Complex>> weighted;
        for (std::size_t k = 0; k < sector.size(); ++k) {
            if (es.eigenvalues[k] <= kWeightCutoff) {
                continue;
            }
            std::vector<Complex> v(4, 0.0);
            const double scale = std::sqrt(es.eigenvalues[k]);
            for (std::size_t r = 0; r < sector.size(); ++r) {
                v[sector[r]] = scale * es.eigenvectors(r, k);
            }
            weighted.push_back(std::move(v));
        }
        if (weighted.empty()) {
            continue;
        }
        SectorResult result;
        if (weighted.size() == 1) {
            // A rank-one block admits only its own eigenvector.
            result.members = weighted.front();
            result.value = weighted_entropy(result.members.data());
        } else {
            SectorProblem problem(std::move(weighted), sector);
            result = optimize_sector(problem, budget, seed, s);
        }
        out.value += result.value;
        for (std::size_t j = 0; j * 4 < result.members.size(); ++j) {
            std::vector<Complex> v(result.members.begin() + j * 4, result.members.begin() + j * 4 + 4);
            double weight = 0.0;
            for (const Complex &z : v) {
                weight += std::norm(z);
            }
            if (weight <= kWeightCutoff) {
                continue;
            }
            for (Complex &z : v) {
                z /= std::sqrt(weight);
            }
            out.decomposition.weights.push_back(weight);
            out.decomposition.states.push_back(std::move(v));
        }
    }
    return out;
}

EntanglementReport measure(const DensityOperator &rho, const ModePartition &p, const MeasureOptions &options) {
    if (p.n_modes() != rho.n_modes()) {
        throw Error(ErrorKind::PartitionMismatch, "partition on " + std::to_string(p.n_modes()) + " modes for a " +
                                                      std::to_string(rho.n_modes()) + "-mode state");
    }
    EntanglementReport report{.partition = p};
    const std::size_t n = rho.n_modes();

    if (rho.is_pure()) {
        report.entropy_of_entanglement = entropy_of_entanglement(rho, p);
        const double other_side = entropy_of_entanglement(rho, p.complement());
        if (std::abs(other_side - *report.entropy_of_entanglement) > kEigenTolerance) {
            report.notes.emplace_back("reduced-state entropies differ across the cut (" + std::to_string(other_side) +
                                      " bits on the traced side): the state breaks parity superselection; "
                                      "the kept-side value is reported");
        }
    } else {
        report.notes.emplace_back("mixed state: entropy of entanglement applies to pure states only");
    }

    if (n > kMaxSearchModes) {
        report.notes.emplace_back("sign-mapping search is limited to " + std::to_string(kMaxSearchModes) +
                                  " modes: qubit-side measures omitted");
    } else {
        std::vector<ModePartition> partitions = single_mode_traces(n);
        const ModePartition flipped = p.complement();
        if (std::find(partitions.begin(), partitions.end(), p) == partitions.end() &&
            std::find(partitions.begin(), partitions.end(), flipped) == partitions.end()) {
            partitions.push_back(p);
        }
        const MappingVerdict verdict = consistent_mapping_search(
            SparsityPattern::support(rho.matrix(), n), partitions, SearchOptions{options.jobs});
        report.mapping_exists = verdict.exists;
        if (verdict.exists) {
            const QubitImage image = QubitImage::map(rho, verdict);
            report.witness = image.witness();
            report.negativity = negativity(image, p);
            if (n == 2) {
                report.concurrence = concurrence(image);
                report.eof_wootters = eof_from_concurrence(*report.concurrence);
            }
        } else {
            report.notes.emplace_back("no consistent sign mapping to qubits exists for the support of this state (" +
                                      std::to_string(verdict.obstruction.size()) +
                                      " obstructing sign equations): negativity and concurrence omitted");
        }
    }

    if (n == 2) {
        const ChargePattern charges = options.charges.value_or(ChargePattern::uniform(2));
        if (check_ssr(rho, charges)) {
            report.eof_ssr_estimate = eof_ssr_minimize(rho, charges, options.budget, options.seed).value;
        } else {
            report.notes.emplace_back("state violates the superselection rule: SSR-restricted estimate omitted");
        }
    }

    if (report.negativity && report.concurrence) {
        report.negativity_concurrence_ok = 2.0 * *report.negativity <= *report.concurrence + 1e-9;
    }
    if (report.eof_wootters && report.eof_ssr_estimate) {
        report.eof_ordering_ok = *report.eof_wootters <= *report.eof_ssr_estimate + 1e-6;
    }
    report.bound_chain_ok = report.negativity_concurrence_ok && report.eof_ordering_ok;
    return report;
}

}  // namespace fermode
