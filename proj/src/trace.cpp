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

#include "fermode/trace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "fermode/error.hpp"

namespace fermode {

namespace {

std::vector<std::size_t> complement_of(std::size_t n_modes, const std::vector<std::size_t> &labels) {
    std::vector<std::size_t> out;
    for (std::size_t mode = 1; mode <= n_modes; ++mode) {
        if (!std::binary_search(labels.begin(), labels.end(), mode)) {
            out.push_back(mode);
        }
    }
    return out;
}

std::size_t mask_of(std::span<const std::size_t> modes, std::size_t n_modes) {
    std::size_t mask = 0;
    for (std::size_t mode : modes) {
        mask |= mode_bit(mode, n_modes);
    }
    return mask;
}

bool is_projector(const ConsistencyOperatorPair &pair) {
    return pair.lambda.empty() && pair.tau.empty();
}

}  // namespace

ModePartition::ModePartition(std::size_t n_modes, std::vector<std::size_t> kept)
    : n_modes_(n_modes), kept_(std::move(kept)) {
    if (n_modes < 2 || n_modes > kMaxModes) {
        throw Error(ErrorKind::PartitionMismatch, "a partition needs between 2 and " + std::to_string(kMaxModes) + " modes");
    }
    std::sort(kept_.begin(), kept_.end());
    if (std::adjacent_find(kept_.begin(), kept_.end()) != kept_.end()) {
        throw Error(ErrorKind::PartitionMismatch, "repeated mode label in partition");
    }
    for (std::size_t mode : kept_) {
        if (mode == 0 || mode > n_modes) {
            throw Error(ErrorKind::PartitionMismatch, "mode label " + std::to_string(mode) + " out of range");
        }
    }
    traced_ = complement_of(n_modes, kept_);
    if (kept_.empty() || traced_.empty()) {
        throw Error(ErrorKind::PartitionMismatch, "kept and traced sets must both be nonempty");
    }
}

ModePartition ModePartition::tracing(std::size_t n_modes, std::vector<std::size_t> traced) {
    std::sort(traced.begin(), traced.end());
    for (std::size_t mode : traced) {
        if (mode == 0 || mode > n_modes) {
            throw Error(ErrorKind::PartitionMismatch, "mode label " + std::to_string(mode) + " out of range");
        }
    }
    if (std::adjacent_find(traced.begin(), traced.end()) != traced.end()) {
        throw Error(ErrorKind::PartitionMismatch, "repeated mode label in partition");
    }
    return ModePartition(n_modes, complement_of(n_modes, traced));
}

std::size_t ModePartition::compose(std::size_t kept_index, std::size_t traced_index) const {
    std::size_t global = 0;
    for (std::size_t j = 0; j < kept_.size(); ++j) {
        if (mode_occupied(kept_index, j + 1, kept_.size())) {
            global |= mode_bit(kept_[j], n_modes_);
        }
    }
    for (std::size_t j = 0; j < traced_.size(); ++j) {
        if (mode_occupied(traced_index, j + 1, traced_.size())) {
            global |= mode_bit(traced_[j], n_modes_);
        }
    }
    return global;
}

std::size_t ModePartition::kept_part(std::size_t global_index) const {
    std::size_t out = 0;
    for (std::size_t mode : kept_) {
        out = (out << 1) | (mode_occupied(global_index, mode, n_modes_) ? 1 : 0);
    }
    return out;
}

std::size_t ModePartition::traced_part(std::size_t global_index) const {
    std::size_t out = 0;
    for (std::size_t mode : traced_) {
        out = (out << 1) | (mode_occupied(global_index, mode, n_modes_) ? 1 : 0);
    }
    return out;
}

ModePartition ModePartition::complement() const {
    return ModePartition(n_modes_, traced_);
}

std::string ModePartition::describe() const {
    std::ostringstream out;
    out << "keep {";
    for (std::size_t j = 0; j < kept_.size(); ++j) {
        out << (j ? "," : "") << kept_[j];
    }
    out << "} trace {";
    for (std::size_t j = 0; j < traced_.size(); ++j) {
        out << (j ? "," : "") << traced_[j];
    }
    out << "}";
    return out.str();
}

int inside_out_sign(std::size_t row, std::size_t col, std::size_t n_modes, std::span<const std::size_t> traced) {
    const std::size_t traced_mask = mask_of(traced, n_modes);
    const std::size_t kept_mask = ((std::size_t{1} << n_modes) - 1) & ~traced_mask;
    unsigned crossings = 0;
    for (std::size_t t : traced) {
        const std::size_t bit = mode_bit(t, n_modes);
        if ((row & bit) == 0) {
            continue;
        }
        // Modes with larger labels sit at lower bit positions.
        const std::size_t later = kept_mask & (bit - 1);
        crossings += static_cast<unsigned>(std::popcount(row & later) + std::popcount(col & later));
    }
    return crossings % 2 == 0 ? 1 : -1;
}

ComplexMatrix inside_out_partial_trace(const ComplexMatrix &m, std::size_t n_modes,
                                       std::span<const std::size_t> traced) {
    const std::size_t dim = std::size_t{1} << n_modes;
    if (m.rows() != dim || m.cols() != dim) {
        throw Error(ErrorKind::PartitionMismatch, "matrix size does not match the mode count");
    }
    std::vector<std::size_t> traced_sorted(traced.begin(), traced.end());
    std::sort(traced_sorted.begin(), traced_sorted.end());
    for (std::size_t mode : traced_sorted) {
        if (mode == 0 || mode > n_modes) {
            throw Error(ErrorKind::PartitionMismatch, "mode label " + std::to_string(mode) + " out of range");
        }
    }
    if (std::adjacent_find(traced_sorted.begin(), traced_sorted.end()) != traced_sorted.end()) {
        throw Error(ErrorKind::PartitionMismatch, "repeated mode label");
    }
    const std::size_t traced_mask = mask_of(traced_sorted, n_modes);
    const std::vector<std::size_t> kept = complement_of(n_modes, traced_sorted);
    const std::size_t kept_dim = std::size_t{1} << kept.size();

    // Global index of every (kept, traced) configuration.
    std::vector<std::size_t> kept_to_global(kept_dim, 0);
    for (std::size_t k = 0; k < kept_dim; ++k) {
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (mode_occupied(k, j + 1, kept.size())) {
                kept_to_global[k] |= mode_bit(kept[j], n_modes);
            }
        }
    }
    std::vector<std::size_t> traced_configs;
    for (std::size_t g = 0; g < dim; ++g) {
        if ((g & ~traced_mask) == 0) {
            traced_configs.push_back(g);
        }
    }

    ComplexMatrix out(kept_dim, kept_dim);
    for (std::size_t r = 0; r < kept_dim; ++r) {
        for (std::size_t c = 0; c < kept_dim; ++c) {
            Complex sum = 0.0;
            for (std::size_t t : traced_configs) {
                const std::size_t row = kept_to_global[r] | t;
                const std::size_t col = kept_to_global[c] | t;
                sum += static_cast<double>(inside_out_sign(row, col, n_modes, traced_sorted)) * m(row, col);
            }
            out(r, c) = sum;
        }
    }
    return out;
}

DensityOperator inside_out_partial_trace(const DensityOperator &rho, const ModePartition &p) {
    if (rho.n_modes() != p.n_modes()) {
        throw Error(ErrorKind::PartitionMismatch, "partition and state have different mode counts");
    }
    return DensityOperator(p.kept().size(), inside_out_partial_trace(rho.matrix(), rho.n_modes(), p.traced()));
}

ConsistencyOperatorPair consistency_operator_pair(const LadderOperators &ops, std::vector<std::size_t> lambda,
                                                  std::vector<std::size_t> tau,
                                                  std::vector<std::size_t> occupied_spectators,
                                                  std::vector<std::size_t> empty_spectators) {
    ComplexMatrix x = ops.identity();
    for (std::size_t mode : lambda) {
        x = x * ops.annihilator(mode);
    }
    for (std::size_t mode : tau) {
        x = x * ops.creator(mode);
    }
    for (std::size_t mode : occupied_spectators) {
        x = x * ops.number_operator(mode);
    }
    for (std::size_t mode : empty_spectators) {
        x = x * (ops.identity() - ops.number_operator(mode));
    }
    ConsistencyOperatorPair pair{std::move(lambda),
                                 std::move(tau),
                                 std::move(occupied_spectators),
                                 std::move(empty_spectators),
                                 ComplexMatrix(ops.dimension(), ops.dimension()),
                                 ComplexMatrix(ops.dimension(), ops.dimension())};
    if (is_projector(pair)) {
        pair.ox = x;
    } else {
        const ComplexMatrix xd = x.adjoint();
        pair.ox = x + xd;
        pair.op = Complex(0.0, 1.0) * (x - xd);
    }
    return pair;
}

namespace {

// Operator pairs for every assignment of each kept mode to one of
// {empty spectator, occupied spectator, lambda, tau}, keeping one
// orientation of each (lambda, tau) swap: the smallest active mode is in
// lambda.
std::vector<ConsistencyOperatorPair> build_pairs(const ModePartition &p, bool embedded) {
    const std::size_t k = p.kept().size();
    const LadderOperators ops(embedded ? p.n_modes() : k);
    std::vector<ConsistencyOperatorPair> pairs;
    std::size_t assignments = 1;
    for (std::size_t j = 0; j < k; ++j) {
        assignments *= 4;
    }
    for (std::size_t code = 0; code < assignments; ++code) {
        std::vector<std::size_t> lambda, tau, occupied, empty;
        std::size_t rest = code;
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t label = embedded ? p.kept()[j] : j + 1;
            switch (rest % 4) {
                case 0:
                    empty.push_back(label);
                    break;
                case 1:
                    occupied.push_back(label);
                    break;
                case 2:
                    lambda.push_back(label);
                    break;
                default:
                    tau.push_back(label);
                    break;
            }
            rest /= 4;
        }
        if (!tau.empty() && (lambda.empty() || tau.front() < lambda.front())) {
            continue;
        }
        pairs.push_back(consistency_operator_pair(ops, lambda, tau, occupied, empty));
    }
    return pairs;
}

// Unknowns: diagonal entries, then (Re, Im) of each upper-triangle entry.
std::size_t unknown_count(std::size_t d) {
    return d * d;
}

// Re Tr(op E_a) for the Hermitian basis element E_a.
double basis_response(const ComplexMatrix &op, std::size_t d, std::size_t a) {
    if (a < d) {
        return op(a, a).real();
    }
    std::size_t offset = a - d;
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r + 1; c < d; ++c) {
            if (offset == 0) {
                // E = e_rc + e_cr
                return (op(c, r) + op(r, c)).real();
            }
            if (offset == 1) {
                // E = i e_rc - i e_cr
                return (Complex(0.0, 1.0) * (op(c, r) - op(r, c))).real();
            }
            offset -= 2;
        }
    }
    throw Error(ErrorKind::DimensionMismatch, "basis element index out of range");
}

RealLu build_system(const std::vector<ConsistencyOperatorPair> &local, std::size_t d) {
    const std::size_t n = unknown_count(d);
    std::vector<const ComplexMatrix *> rows;
    for (const auto &pair : local) {
        rows.push_back(&pair.ox);
        if (!is_projector(pair)) {
            rows.push_back(&pair.op);
        }
    }
    if (rows.size() != n) {
        throw Error(ErrorKind::SingularSystem,
                    "operator count " + std::to_string(rows.size()) + " differs from " + std::to_string(n) + " unknowns");
    }
    std::vector<double> a(n * n);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t u = 0; u < n; ++u) {
            a[b * n + u] = basis_response(*rows[b], d, u);
        }
    }
    return RealLu(n, std::move(a));
}

}  // namespace

ConsistencyOracle::ConsistencyOracle(const ModePartition &p)
    : partition_(p),
      local_(build_pairs(p, false)),
      embedded_(build_pairs(p, true)),
      system_(build_system(local_, p.reduced_dimension())) {
}

std::vector<double> ConsistencyOracle::expectations(const ComplexMatrix &m) const {
    std::vector<double> out;
    out.reserve(system_.size());
    for (const auto &pair : embedded_) {
        out.push_back(expectation(pair.ox, m));
        if (!is_projector(pair)) {
            out.push_back(expectation(pair.op, m));
        }
    }
    return out;
}

ComplexMatrix ConsistencyOracle::solve_hermitian(const ComplexMatrix &hermitian) const {
    const std::size_t d = partition_.reduced_dimension();
    const std::vector<double> x = system_.solve(expectations(hermitian));
    ComplexMatrix out(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        out(r, r) = x[r];
    }
    std::size_t a = d;
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r + 1; c < d; ++c) {
            out(r, c) = Complex(x[a], x[a + 1]);
            out(c, r) = Complex(x[a], -x[a + 1]);
            a += 2;
        }
    }
    return out;
}

ComplexMatrix ConsistencyOracle::reduce_matrix(const ComplexMatrix &m) const {
    const std::size_t dim = std::size_t{1} << partition_.n_modes();
    if (m.rows() != dim || m.cols() != dim) {
        throw Error(ErrorKind::PartitionMismatch, "matrix size does not match the partition");
    }
    // m = H1 + i H2 with H1, H2 Hermitian.
    const ComplexMatrix md = m.adjoint();
    const ComplexMatrix h1 = 0.5 * (m + md);
    const ComplexMatrix h2 = Complex(0.0, -0.5) * (m - md);
    return solve_hermitian(h1) + Complex(0.0, 1.0) * solve_hermitian(h2);
}

DensityOperator ConsistencyOracle::reduce(const DensityOperator &rho) const {
    if (rho.n_modes() != partition_.n_modes()) {
        throw Error(ErrorKind::PartitionMismatch, "partition and state have different mode counts");
    }
    return DensityOperator(partition_.kept().size(), solve_hermitian(rho.matrix()));
}

DensityOperator oracle_partial_trace(const DensityOperator &rho, const ModePartition &p) {
    return ConsistencyOracle(p).reduce(rho);
}

ComplexMatrix sequential_trace(const DensityOperator &rho, std::span<const std::size_t> order) {
    std::vector<std::size_t> labels(rho.n_modes());
    for (std::size_t j = 0; j < labels.size(); ++j) {
        labels[j] = j + 1;
    }
    ComplexMatrix current = rho.matrix();
    for (std::size_t mode : order) {
        const auto it = std::find(labels.begin(), labels.end(), mode);
        if (it == labels.end()) {
            throw Error(ErrorKind::PartitionMismatch, "mode " + std::to_string(mode) + " is not present (repeated or out of range)");
        }
        const std::size_t position = static_cast<std::size_t>(it - labels.begin()) + 1;
        if (labels.size() == 1) {
            current = ComplexMatrix(1, 1, {current.trace()});
        } else {
            const std::array<std::size_t, 1> traced{position};
            current = inside_out_partial_trace(current, labels.size(), traced);
        }
        labels.erase(it);
    }
    return current;
}

double expectation(const ComplexMatrix &op, const ComplexMatrix &rho) {
    return trace_of_product(op, rho).real();
}

}  // namespace fermode
