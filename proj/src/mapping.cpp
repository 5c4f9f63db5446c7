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

#include "fermode/mapping.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <thread>

#include "fermode/error.hpp"
#include "fermode/fock.hpp"

namespace fermode {

namespace {

std::size_t dimension_of(std::size_t n_modes) {
    return std::size_t{1} << n_modes;
}

std::string bits_of(std::size_t index, std::size_t width) {
    std::string out(width, '0');
    for (std::size_t k = 0; k < width; ++k) {
        if ((index >> (width - 1 - k)) & 1U) {
            out[k] = '1';
        }
    }
    return out;
}

// Index of `global` restricted to the modes not in `traced`, lower mode most
// significant.
std::size_t restrict_index(std::size_t global, std::size_t n_modes, std::span<const std::size_t> modes) {
    std::size_t out = 0;
    for (const std::size_t mode : modes) {
        out = (out << 1) | (mode_occupied(global, mode, n_modes) ? 1U : 0U);
    }
    return out;
}

std::vector<std::size_t> complement_modes(std::size_t n_modes, std::span<const std::size_t> traced) {
    std::vector<bool> gone(n_modes + 1, false);
    for (const std::size_t t : traced) {
        if (t < 1 || t > n_modes) {
            throw Error(ErrorKind::PartitionMismatch, "mode " + std::to_string(t) + " outside 1.." +
                                                           std::to_string(n_modes));
        }
        if (gone[t]) {
            throw Error(ErrorKind::PartitionMismatch, "mode " + std::to_string(t) + " traced twice");
        }
        gone[t] = true;
    }
    std::vector<std::size_t> kept;
    for (std::size_t mode = 1; mode <= n_modes; ++mode) {
        if (!gone[mode]) {
            kept.push_back(mode);
        }
    }
    return kept;
}

void require_square(const ComplexMatrix &m, std::size_t dim, const char *what) {
    if (m.rows() != dim || m.cols() != dim) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": expected " + std::to_string(dim) + "x" +
                                                      std::to_string(dim) + ", got " + std::to_string(m.rows()) +
                                                      "x" + std::to_string(m.cols()));
    }
}

// Surviving coherence (row < col) of one partition: the pair of reduced
// indices it lands on and its fermionic sign.
struct Edge {
    std::size_t row;
    std::size_t col;
    std::size_t reduced_row;
    std::size_t reduced_col;
    int sign;
};

std::vector<Edge> surviving_edges(const SparsityPattern &pattern, const ModePartition &p) {
    std::vector<Edge> edges;
    const auto traced = std::span<const std::size_t>(p.traced());
    for (const auto &[row, col] : pattern.allowed()) {
        if (p.traced_part(row) != p.traced_part(col)) {
            continue;
        }
        edges.push_back({row, col, p.kept_part(row), p.kept_part(col),
                         inside_out_sign(row, col, pattern.n_modes(), traced)});
    }
    return edges;
}

// Whether r_a r_b = value(edge) is solvable for the given global signs.
class ReducedColouring {
   public:
    ReducedColouring(std::vector<Edge> edges, std::size_t reduced_dim)
        : edges_(std::move(edges)), adjacency_(reduced_dim), colour_(reduced_dim, 0) {
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            adjacency_[edges_[e].reduced_row].push_back(e);
            adjacency_[edges_[e].reduced_col].push_back(e);
        }
    }

    bool solvable(const std::vector<int> &signs) {
        std::fill(colour_.begin(), colour_.end(), 0);
        for (std::size_t start = 0; start < colour_.size(); ++start) {
            if (colour_[start] != 0 || adjacency_[start].empty()) {
                continue;
            }
            colour_[start] = 1;
            stack_.assign(1, start);
            while (!stack_.empty()) {
                const std::size_t node = stack_.back();
                stack_.pop_back();
                for (const std::size_t e : adjacency_[node]) {
                    const Edge &edge = edges_[e];
                    const int value = signs[edge.row] * signs[edge.col] * edge.sign;
                    const std::size_t other = edge.reduced_row == node ? edge.reduced_col : edge.reduced_row;
                    const int wanted = colour_[node] * value;
                    if (colour_[other] == 0) {
                        colour_[other] = wanted;
                        stack_.push_back(other);
                    } else if (colour_[other] != wanted) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

   private:
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<int> colour_;
    std::vector<std::size_t> stack_;
};

// Linear system over GF(2): one row per equation, variables packed in words.
struct Gf2Row {
    std::vector<std::uint64_t> bits;
    bool rhs = false;
};

bool gf2_consistent(std::vector<Gf2Row> rows) {
    if (rows.empty()) {
        return true;
    }
    const std::size_t words = rows.front().bits.size();
    std::size_t pivot_row = 0;
    for (std::size_t var = 0; var < words * 64 && pivot_row < rows.size(); ++var) {
        const std::size_t w = var / 64;
        const std::uint64_t mask = std::uint64_t{1} << (var % 64);
        std::size_t found = pivot_row;
        while (found < rows.size() && (rows[found].bits[w] & mask) == 0) {
            ++found;
        }
        if (found == rows.size()) {
            continue;
        }
        std::swap(rows[pivot_row], rows[found]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != pivot_row && (rows[r].bits[w] & mask) != 0) {
                for (std::size_t k = 0; k < words; ++k) {
                    rows[r].bits[k] ^= rows[pivot_row].bits[k];
                }
                rows[r].rhs = rows[r].rhs != rows[pivot_row].rhs;
            }
        }
        ++pivot_row;
    }
    for (std::size_t r = pivot_row; r < rows.size(); ++r) {
        if (rows[r].rhs) {
            return false;
        }
    }
    return true;
}

std::vector<SignEquation> minimal_obstruction(const SparsityPattern &pattern,
                                              const std::vector<ModePartition> &partitions) {
    const std::size_t dim = dimension_of(pattern.n_modes());
    std::vector<SignEquation> equations;
    std::vector<std::size_t> offsets;
    std::size_t variables = dim;
    for (const ModePartition &p : partitions) {
        offsets.push_back(variables);
        variables += p.reduced_dimension();
        for (const Edge &e : surviving_edges(pattern, p)) {
            equations.push_back({p, e.row, e.col, e.reduced_row, e.reduced_col, e.sign});
        }
    }
    const std::size_t words = (variables + 63) / 64;
    std::vector<Gf2Row> rows;
    for (const SignEquation &eq : equations) {
        const auto where = std::find(partitions.begin(), partitions.end(), eq.partition) - partitions.begin();
        const std::size_t offset = offsets[static_cast<std::size_t>(where)];
        Gf2Row row{std::vector<std::uint64_t>(words, 0), eq.sign < 0};
        for (const std::size_t var : {eq.row, eq.col, offset + eq.reduced_row, offset + eq.reduced_col}) {
            row.bits[var / 64] ^= std::uint64_t{1} << (var % 64);
        }
        rows.push_back(std::move(row));
    }
    if (gf2_consistent(rows)) {
        return {};
    }
    // Drop every equation whose removal keeps the system inconsistent.
    std::vector<bool> keep(rows.size(), true);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        keep[k] = false;
        std::vector<Gf2Row> trial;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (keep[j]) {
                trial.push_back(rows[j]);
            }
        }
        if (gf2_consistent(std::move(trial))) {
            keep[k] = true;
        }
    }
    std::vector<SignEquation> out;
    for (std::size_t k = 0; k < equations.size(); ++k) {
        if (keep[k]) {
            out.push_back(equations[k]);
        }
    }
    return out;
}

}  // namespace

// --- SignAssignment ---------------------------------------------------------

SignAssignment::SignAssignment(std::size_t n_modes, std::vector<int> signs) : n_modes_(n_modes), signs_(std::move(signs)) {
    if (n_modes_ < 1 || n_modes_ > kMaxModes) {
        throw Error(ErrorKind::TooManyModes, "sign assignment on " + std::to_string(n_modes_) + " modes");
    }
    if (signs_.size() != dimension_of(n_modes_)) {
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(dimension_of(n_modes_)) +
                                                      " signs, got " + std::to_string(signs_.size()));
    }
    for (const int v : signs_) {
        if (v != 1 && v != -1) {
            throw Error(ErrorKind::SemanticError, "sign entries must be +1 or -1");
        }
    }
    if (signs_.front() < 0) {
        for (int &v : signs_) {
            v = -v;
        }
    }
}

SignAssignment SignAssignment::identity(std::size_t n_modes) {
    return SignAssignment(n_modes, std::vector<int>(dimension_of(n_modes), 1));
}

SignAssignment SignAssignment::from_code(std::size_t n_modes, std::uint64_t code) {
    const std::size_t dim = dimension_of(n_modes);
    if (dim - 1 < 64 && (code >> (dim - 1)) != 0) {
        throw Error(ErrorKind::DimensionMismatch, "sign code too wide for " + std::to_string(n_modes) + " modes");
    }
    std::vector<int> signs(dim, 1);
    for (std::size_t i = 1; i < dim; ++i) {
        if ((code >> (i - 1)) & 1U) {
            signs[i] = -1;
        }
    }
    return SignAssignment(n_modes, std::move(signs));
}

std::uint64_t SignAssignment::code() const {
    std::uint64_t code = 0;
    for (std::size_t i = 1; i < signs_.size() && i <= 64; ++i) {
        if (signs_[i] < 0) {
            code |= std::uint64_t{1} << (i - 1);
        }
    }
    return code;
}

std::string SignAssignment::to_string() const {
    std::string out;
    out.reserve(signs_.size());
    for (const int v : signs_) {
        out.push_back(v > 0 ? '+' : '-');
    }
    return out;
}

// --- matrix maps ------------------------------------------------------------

ComplexMatrix apply_mapping(const ComplexMatrix &m, const SignAssignment &s) {
    require_square(m, s.dimension(), "apply_mapping");
    ComplexMatrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) {
            if (s.sign(r) != s.sign(c)) {
                out(r, c) = -out(r, c);
            }
        }
    }
    return out;
}

ComplexMatrix apply_mapping(const DensityOperator &rho, const SignAssignment &s) {
    if (rho.n_modes() != s.n_modes()) {
        throw Error(ErrorKind::DimensionMismatch, "state on " + std::to_string(rho.n_modes()) +
                                                      " modes, signs on " + std::to_string(s.n_modes()));
    }
    return apply_mapping(rho.matrix(), s);
}

ComplexMatrix tensor_partial_trace(const ComplexMatrix &m, std::size_t n_modes, std::span<const std::size_t> traced) {
    require_square(m, dimension_of(n_modes), "tensor_partial_trace");
    const std::vector<std::size_t> kept = complement_modes(n_modes, traced);
    ComplexMatrix out(dimension_of(kept.size()), dimension_of(kept.size()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const std::size_t rt = restrict_index(r, n_modes, traced);
        const std::size_t rk = restrict_index(r, n_modes, kept);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (restrict_index(c, n_modes, traced) == rt) {
                out(rk, restrict_index(c, n_modes, kept)) += m(r, c);
            }
        }
    }
    return out;
}

// --- SparsityPattern --------------------------------------------------------

SparsityPattern::SparsityPattern(std::size_t n_modes, std::vector<std::pair<std::size_t, std::size_t>> allowed)
    : n_modes_(n_modes) {
    if (n_modes < 1 || n_modes > kMaxModes) {
        throw Error(ErrorKind::TooManyModes, "sparsity pattern on " + std::to_string(n_modes) + " modes");
    }
    const std::size_t dim = dimension_of(n_modes);
    for (auto [r, c] : allowed) {
        if (r >= dim || c >= dim) {
            throw Error(ErrorKind::DimensionMismatch, "pattern position outside " + std::to_string(dim) + "x" +
                                                          std::to_string(dim));
        }
        if (r == c) {
            continue;
        }
        allowed_.emplace_back(std::min(r, c), std::max(r, c));
    }
    std::sort(allowed_.begin(), allowed_.end());
    allowed_.erase(std::unique(allowed_.begin(), allowed_.end()), allowed_.end());
}

SparsityPattern SparsityPattern::unrestricted(std::size_t n_modes) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    const std::size_t dim = dimension_of(n_modes);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r + 1; c < dim; ++c) {
            all.emplace_back(r, c);
        }
    }
    return SparsityPattern(n_modes, std::move(all));
}

SparsityPattern SparsityPattern::charge_conserving(std::size_t n_modes, const ChargePattern &charges) {
    std::vector<std::pair<std::size_t, std::size_t>> allowed;
    for (const auto &sector : charge_sectors(n_modes, charges)) {
        for (std::size_t a = 0; a < sector.size(); ++a) {
            for (std::size_t b = a + 1; b < sector.size(); ++b) {
                allowed.emplace_back(sector[a], sector[b]);
            }
        }
    }
    return SparsityPattern(n_modes, std::move(allowed));
}

SparsityPattern SparsityPattern::support(const ComplexMatrix &m, std::size_t n_modes, double tol) {
    require_square(m, dimension_of(n_modes), "SparsityPattern::support");
    std::vector<std::pair<std::size_t, std::size_t>> allowed;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = r + 1; c < m.cols(); ++c) {
            if (std::abs(m(r, c)) > tol || std::abs(m(c, r)) > tol) {
                allowed.emplace_back(r, c);
            }
        }
    }
    return SparsityPattern(n_modes, std::move(allowed));
}

bool SparsityPattern::allows(std::size_t row, std::size_t col) const {
    if (row == col) {
        return true;
    }
    const std::pair<std::size_t, std::size_t> key{std::min(row, col), std::max(row, col)};
    return std::binary_search(allowed_.begin(), allowed_.end(), key);
}

bool SparsityPattern::covers(const ComplexMatrix &m, double tol) const {
    require_square(m, dimension_of(n_modes_), "SparsityPattern::covers");
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (std::abs(m(r, c)) > tol && !allows(r, c)) {
                return false;
            }
        }
    }
    return true;
}

// --- structural analysis ----------------------------------------------------

std::vector<ReducedFlow> coefficient_flow(std::size_t n_modes, const ModePartition &p) {
    if (p.n_modes() != n_modes) {
        throw Error(ErrorKind::PartitionMismatch, "partition on " + std::to_string(p.n_modes()) + " modes");
    }
    const std::size_t reduced = p.reduced_dimension();
    const std::size_t dim = dimension_of(n_modes);
    const auto traced = std::span<const std::size_t>(p.traced());
    std::vector<ReducedFlow> flows;
    for (std::size_t r = 0; r < reduced; ++r) {
        for (std::size_t c = r; c < reduced; ++c) {
            flows.push_back({r, c, {}});
        }
    }
    auto slot = [reduced](std::size_t r, std::size_t c) {
        // Row-major position in the packed upper triangle.
        return r * reduced - (r * (r + 1)) / 2 + c;
    };
    for (std::size_t row = 0; row < dim; ++row) {
        for (std::size_t col = row; col < dim; ++col) {
            if (p.traced_part(row) != p.traced_part(col)) {
                continue;
            }
            const std::size_t kr = p.kept_part(row);
            const std::size_t kc = p.kept_part(col);
            flows[slot(kr, kc)].contributions.push_back({row, col, inside_out_sign(row, col, n_modes, traced)});
        }
    }
    return flows;
}

std::string SignEquation::describe() const {
    const std::size_t n = partition.n_modes();
    const std::size_t k = partition.kept().size();
    std::ostringstream out;
    out << partition.describe() << ": s[" << bits_of(row, n) << "]*s[" << bits_of(col, n) << "] * r["
        << bits_of(reduced_row, k) << "]*r[" << bits_of(reduced_col, k) << "] = " << (sign > 0 ? "+1" : "-1");
    return out.str();
}

bool MappingVerdict::covers_partition(const ModePartition &p) const {
    const ModePartition flipped = p.complement();
    return std::any_of(partitions.begin(), partitions.end(),
                       [&](const ModePartition &q) { return q == p || q == flipped; });
}

std::vector<ModePartition> single_mode_traces(std::size_t n_modes) {
    std::vector<ModePartition> out;
    for (std::size_t mode = 1; mode <= n_modes; ++mode) {
        out.push_back(ModePartition::tracing(n_modes, {mode}));
    }
    return out;
}

MappingVerdict consistent_mapping_search(const SparsityPattern &pattern, const std::vector<ModePartition> &partitions,
                                         const SearchOptions &options) {
    const std::size_t n = pattern.n_modes();
    if (n > kMaxSearchModes) {
        throw Error(ErrorKind::TooManyModes, "mapping search supports at most " +
                                                 std::to_string(kMaxSearchModes) + " modes");
    }
    for (const ModePartition &p : partitions) {
        if (p.n_modes() != n) {
            throw Error(ErrorKind::PartitionMismatch, p.describe() + " is not on " + std::to_string(n) + " modes");
        }
    }
    std::vector<std::pair<std::vector<Edge>, std::size_t>> systems;
    for (const ModePartition &p : partitions) {
        systems.emplace_back(surviving_edges(pattern, p), p.reduced_dimension());
    }

    const std::uint64_t total = std::uint64_t{1} << (dimension_of(n) - 1);
    const unsigned jobs = std::clamp<unsigned>(options.jobs, 1, 64);
    std::vector<std::vector<std::uint64_t>> found(jobs);
    auto work = [&](unsigned job) {
        std::vector<ReducedColouring> colourings;
        for (const auto &[edges, dim] : systems) {
            colourings.emplace_back(edges, dim);
        }
        const std::uint64_t begin = total * job / jobs;
        const std::uint64_t end = total * (job + 1) / jobs;
        std::vector<int> signs(dimension_of(n), 1);
        for (std::uint64_t code = begin; code < end; ++code) {
            for (std::size_t i = 1; i < signs.size(); ++i) {
                signs[i] = ((code >> (i - 1)) & 1U) ? -1 : 1;
            }
            const bool ok = std::all_of(colourings.begin(), colourings.end(),
                                        [&](ReducedColouring &c) { return c.solvable(signs); });
            if (ok) {
                found[job].push_back(code);
            }
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned job = 0; job < jobs; ++job) {
            threads.emplace_back(work, job);
        }
        for (std::thread &t : threads) {
            t.join();
        }
    }

    MappingVerdict verdict{n, pattern, partitions, false, {}, {}};
    for (const auto &chunk : found) {
        for (const std::uint64_t code : chunk) {
            verdict.witnesses.push_back(SignAssignment::from_code(n, code));
        }
    }
    verdict.exists = !verdict.witnesses.empty();
    if (!verdict.exists) {
        verdict.obstruction = minimal_obstruction(pattern, partitions);
    }
    return verdict;
}

MappingVerdict consistent_mapping_search(const SparsityPattern &pattern, const SearchOptions &options) {
    return consistent_mapping_search(pattern, single_mode_traces(pattern.n_modes()), options);
}

// --- numeric diagram check --------------------------------------------------

double verify_diagram(const DensityOperator &rho, const SignAssignment &s, const ModePartition &p,
                      const SignAssignment &reduced) {
    if (s.n_modes() != rho.n_modes() || p.n_modes() != rho.n_modes() || reduced.n_modes() != p.kept().size()) {
        throw Error(ErrorKind::DimensionMismatch, "verify_diagram: mode counts disagree");
    }
    const auto traced = std::span<const std::size_t>(p.traced());
    const ComplexMatrix qubit_side = tensor_partial_trace(apply_mapping(rho.matrix(), s), rho.n_modes(), traced);
    const ComplexMatrix fock_side =
        apply_mapping(inside_out_partial_trace(rho.matrix(), rho.n_modes(), traced), reduced);
    return max_abs_diff(qubit_side, fock_side);
}

std::pair<double, SignAssignment> best_diagram_residual(const DensityOperator &rho, const SignAssignment &s,
                                                        const ModePartition &p) {
    const std::size_t k = p.kept().size();
    std::pair<double, SignAssignment> best{verify_diagram(rho, s, p, SignAssignment::identity(k)),
                                           SignAssignment::identity(k)};
    const std::uint64_t total = std::uint64_t{1} << (dimension_of(k) - 1);
    for (std::uint64_t code = 1; code < total; ++code) {
        SignAssignment r = SignAssignment::from_code(k, code);
        const double residual = verify_diagram(rho, s, p, r);
        if (residual < best.first) {
            best = {residual, std::move(r)};
        }
    }
    return best;
}

// --- QubitImage -------------------------------------------------------------

QubitImage::QubitImage(std::size_t n_modes, ComplexMatrix matrix, SignAssignment witness,
                       std::vector<ModePartition> partitions)
    : n_modes_(n_modes), matrix_(std::move(matrix)), witness_(std::move(witness)), partitions_(std::move(partitions)) {}

QubitImage QubitImage::map(const DensityOperator &rho, const MappingVerdict &verdict, std::size_t witness) {
    if (!verdict.exists) {
        throw Error(ErrorKind::NoMappingWitness, "no consistent sign mapping exists for this pattern");
    }
    if (witness >= verdict.witnesses.size()) {
        throw Error(ErrorKind::NoMappingWitness, "witness " + std::to_string(witness) + " out of range");
    }
    if (rho.n_modes() != verdict.n_modes) {
        throw Error(ErrorKind::NoMappingWitness, "verdict is for " + std::to_string(verdict.n_modes) +
                                                     " modes, state has " + std::to_string(rho.n_modes()));
    }
    if (!verdict.pattern.covers(rho.matrix())) {
        throw Error(ErrorKind::NoMappingWitness, "state has coherences outside the verified pattern");
    }
    const SignAssignment &s = verdict.witnesses[witness];
    return QubitImage(rho.n_modes(), apply_mapping(rho.matrix(), s), s, verdict.partitions);
}

bool QubitImage::licenses(const ModePartition &p) const {
    const ModePartition flipped = p.complement();
    return std::any_of(partitions_.begin(), partitions_.end(),
                       [&](const ModePartition &q) { return q == p || q == flipped; });
}

}  // namespace fermode
