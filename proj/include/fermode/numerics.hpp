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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fermode {

using Complex = std::complex<double>;

/// Tolerance for identities that hold exactly on exactly-representable input.
inline constexpr double kExactTolerance = 1e-12;
/// Tolerance for quantities derived from an eigendecomposition.
inline constexpr double kEigenTolerance = 1e-9;

/// Dense complex matrix, row-major. Always at least 1x1.
class ComplexMatrix {
   public:
    /// Zero matrix. Throws DimensionMismatch when either extent is zero.
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept {
        return rows_;
    }
    std::size_t cols() const noexcept {
        return cols_;
    }
    bool is_square() const noexcept {
        return rows_ == cols_;
    }

    Complex &operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    std::span<const Complex> entries() const noexcept {
        return entries_;
    }
    std::span<Complex> entries() noexcept {
        return entries_;
    }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    Complex trace() const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    bool operator==(const ComplexMatrix &other) const = default;

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
/// |v><v| for a column vector v.
ComplexMatrix outer_product(std::span<const Complex> ket);
/// |ket><bra|.
ComplexMatrix outer_product(std::span<const Complex> ket, std::span<const Complex> bra);
std::vector<Complex> matvec(const ComplexMatrix &m, std::span<const Complex> v);

/// Tr(a b) without forming the product.
Complex trace_of_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
/// Largest entrywise modulus of m - m†.
double hermiticity_residual(const ComplexMatrix &m);
/// (m + m†) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix &m);

struct Spectrum {
    std::vector<double> eigenvalues;  // descending
    double tolerance = kEigenTolerance;
};

struct EigenSystem {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
/// Throws DimensionMismatch for non-square input and NonHermitianInput when
/// max |m - m†| exceeds tol.
EigenSystem hermitian_eigensystem(const ComplexMatrix &m, double tol = kEigenTolerance);
Spectrum hermitian_eigenvalues(const ComplexMatrix &m, double tol = kEigenTolerance);

/// -Σ p log2 p over entries p > cutoff.
double shannon_entropy_bits(std::span<const double> probabilities, double cutoff = kEigenTolerance);

/// Von Neumann entropy in bits. Throws NotAState unless m is Hermitian, has
/// unit trace and no eigenvalue below -tol.
double von_neumann_entropy(const ComplexMatrix &m, double tol = kEigenTolerance);

/// Principal square root of a positive semidefinite matrix; eigenvalues in
/// [-tol, 0) are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix &m, double tol = kEigenTolerance);

/// Magnitude below which an eigenvalue of a `dimension`-sized Hermitian
/// matrix with largest eigenvalue `largest` is indistinguishable from zero.
double numerical_zero(double largest, std::size_t dimension);

/// LU factorization with partial pivoting of a real square system.
class RealLu {
   public:
    /// `matrix` is row-major n×n. Throws SingularSystem when a pivot falls
    /// below `pivot_tol` relative to the largest entry.
    RealLu(std::size_t n, std::vector<double> matrix, double pivot_tol = 1e-12);

    std::size_t size() const noexcept {
        return n_;
    }
    std::vector<double> solve(std::span<const double> rhs) const;

   private:
    std::size_t n_;
    std::vector<double> lu_;
    std::vector<std::size_t> pivots_;
};

}  // namespace fermode
