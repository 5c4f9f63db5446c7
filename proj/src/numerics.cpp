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

#include "fermode/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fermode/error.hpp"

namespace fermode {

namespace {

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                        std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

void require_square(const ComplexMatrix &m, const char *what) {
    if (!m.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": matrix is not square");
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : ComplexMatrix(rows, cols, std::vector<Complex>(rows * cols)) {
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw Error(ErrorKind::DimensionMismatch, "matrix extents must be positive");
    }
    if (entries_.size() != rows * cols) {
        throw Error(ErrorKind::DimensionMismatch, "entry count does not match rows*cols");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    if (rows_ == 0 || cols_ == 0) {
        throw Error(ErrorKind::DimensionMismatch, "matrix extents must be positive");
    }
    entries_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        m(k, k) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        m(k, k) = values[k];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out = *this;
    for (auto &z : out.entries_) {
        z = std::conj(z);
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    require_square(*this, "trace");
    Complex sum = 0.0;
    for (std::size_t k = 0; k < rows_; ++k) {
        sum += (*this)(k, k);
    }
    return sum;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "add");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] += other.entries_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "subtract");
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        entries_[k] -= other.entries_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : entries_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix product: inner extents differ");
    }
    ComplexMatrix out(a.rows(), b.cols());
    // i-k-j order; ladder-operator matrices are mostly zeros, so skipping
    // zero left factors dominates the cost.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) {
    m *= scale;
    return m;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex x = a(ar, ac);
            if (x == Complex{}) {
                continue;
            }
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
                }
            }
        }
    }
    return out;
}

ComplexMatrix outer_product(std::span<const Complex> ket) {
    return outer_product(ket, ket);
}

ComplexMatrix outer_product(std::span<const Complex> ket, std::span<const Complex> bra) {
    ComplexMatrix out(ket.size(), bra.size());
    for (std::size_t r = 0; r < ket.size(); ++r) {
        for (std::size_t c = 0; c < bra.size(); ++c) {
            out(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return out;
}

std::vector<Complex> matvec(const ComplexMatrix &m, std::span<const Complex> v) {
    if (m.cols() != v.size()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix-vector product: extents differ");
    }
    std::vector<Complex> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex sum = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            sum += m(r, c) * v[c];
        }
        out[r] = sum;
    }
    return out;
}

Complex trace_of_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "trace of product: extents differ");
    }
    Complex sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik != Complex{}) {
                sum += aik * b(k, i);
            }
        }
    }
    return sum;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return worst;
}

double hermiticity_residual(const ComplexMatrix &m) {
    require_square(m, "hermiticity check");
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = r; c < m.cols(); ++c) {
            worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
        }
    }
    return worst;
}

ComplexMatrix hermitian_part(const ComplexMatrix &m) {
    require_square(m, "hermitian part");
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
        }
    }
    return out;
}

EigenSystem hermitian_eigensystem(const ComplexMatrix &m, double tol) {
    require_square(m, "hermitian_eigensystem");
    if (hermiticity_residual(m) > tol) {
        throw Error(ErrorKind::NonHermitianInput,
                    "max |m - m^dagger| = " + std::to_string(hermiticity_residual(m)) + " exceeds " +
                        std::to_string(tol));
    }
    const std::size_t n = m.rows();
    ComplexMatrix a = hermitian_part(m);
    ComplexMatrix v = ComplexMatrix::identity(n);

    double scale = 0.0;
    for (const auto &z : a.entries()) {
        scale += std::norm(z);
    }
    const double threshold = std::max(scale, 1e-300) * 1e-32;

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(a(p, q));
            }
        }
        if (off <= threshold) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double magnitude = std::abs(apq);
                if (magnitude == 0.0) {
                    continue;
                }
                // Phase out apq, then apply the real symmetric Jacobi rotation.
                const Complex phase = apq / magnitude;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * magnitude);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) {
                    t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * std::conj(phase);
                const Complex jqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    EigenSystem out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.eigenvectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

Spectrum hermitian_eigenvalues(const ComplexMatrix &m, double tol) {
    return Spectrum{hermitian_eigensystem(m, tol).eigenvalues, tol};
}

double shannon_entropy_bits(std::span<const double> probabilities, double cutoff) {
    double h = 0.0;
    for (double p : probabilities) {
        if (p > cutoff) {
            h -= p * std::log2(p);
        }
    }
    return std::max(h, 0.0);
}

double von_neumann_entropy(const ComplexMatrix &m, double tol) {
    require_square(m, "von_neumann_entropy");
    if (hermiticity_residual(m) > tol) {
        throw Error(ErrorKind::NotAState, "matrix is not Hermitian");
    }
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > tol) {
        throw Error(ErrorKind::NotAState, "trace differs from 1 by " + std::to_string(std::abs(tr - 1.0)));
    }
    const Spectrum spectrum = hermitian_eigenvalues(m, tol);
    if (spectrum.eigenvalues.back() < -tol) {
        throw Error(ErrorKind::NotAState, "negative eigenvalue " + std::to_string(spectrum.eigenvalues.back()));
    }
    return std::min(shannon_entropy_bits(spectrum.eigenvalues, tol), std::log2(static_cast<double>(m.rows())));
}

double numerical_zero(double largest, std::size_t dimension) {
    return 4.0 * static_cast<double>(dimension) * std::numeric_limits<double>::epsilon() * std::abs(largest);
}

ComplexMatrix psd_sqrt(const ComplexMatrix &m, double tol) {
    const EigenSystem es = hermitian_eigensystem(m, tol);
    const std::size_t n = m.rows();
    // Eigenvalues within rounding of zero are zero; their square roots would
    // otherwise surface as ~sqrt(eps) artefacts.
    const double floor = numerical_zero(es.eigenvalues.front(), n);
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lambda = es.eigenvalues[k];
        if (lambda < -tol) {
            throw Error(ErrorKind::NotAState, "square root of a matrix with eigenvalue " + std::to_string(lambda));
        }
        const double root = lambda <= floor ? 0.0 : std::sqrt(lambda);
        if (root == 0.0) {
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            const Complex vr = es.eigenvectors(r, k) * root;
            for (std::size_t c = 0; c < n; ++c) {
                out(r, c) += vr * std::conj(es.eigenvectors(c, k));
            }
        }
    }
    return out;
}

RealLu::RealLu(std::size_t n, std::vector<double> matrix, double pivot_tol)
    : n_(n), lu_(std::move(matrix)), pivots_(n) {
    if (lu_.size() != n * n || n == 0) {
        throw Error(ErrorKind::DimensionMismatch, "LU factorization needs a non-empty square matrix");
    }
    double largest = 0.0;
    for (double x : lu_) {
        largest = std::max(largest, std::abs(x));
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(lu_[r * n + col]) > std::abs(lu_[best * n + col])) {
                best = r;
            }
        }
        if (std::abs(lu_[best * n + col]) <= pivot_tol * std::max(largest, 1.0)) {
            throw Error(ErrorKind::SingularSystem, "pivot vanishes in column " + std::to_string(col));
        }
        pivots_[col] = best;
        if (best != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(lu_[col * n + c], lu_[best * n + c]);
            }
        }
        const double pivot = lu_[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = lu_[r * n + col] / pivot;
            lu_[r * n + col] = factor;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t c = col + 1; c < n; ++c) {
                lu_[r * n + c] -= factor * lu_[col * n + c];
            }
        }
    }
}

std::vector<double> RealLu::solve(std::span<const double> rhs) const {
    if (rhs.size() != n_) {
        throw Error(ErrorKind::DimensionMismatch, "right-hand side length differs from system size");
    }
    std::vector<double> x(rhs.begin(), rhs.end());
    for (std::size_t col = 0; col < n_; ++col) {
        std::swap(x[col], x[pivots_[col]]);
    }
    for (std::size_t r = 0; r < n_; ++r) {
        for (std::size_t c = 0; c < r; ++c) {
            x[r] -= lu_[r * n_ + c] * x[c];
        }
    }
    for (std::size_t r = n_; r-- > 0;) {
        for (std::size_t c = r + 1; c < n_; ++c) {
            x[r] -= lu_[r * n_ + c] * x[c];
        }
        x[r] /= lu_[r * n_ + r];
    }
    return x;
}

}  // namespace fermode
