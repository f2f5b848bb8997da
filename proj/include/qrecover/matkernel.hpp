// Copyright 2026 The qrecover Authors
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
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace qrecover {

using Complex = std::complex<double>;
using StateVector = std::vector<Complex>;

/// Eigenvalues at or below this magnitude count as zero for rank and support
/// decisions.
inline constexpr double kEigenCutoff = 1e-12;

/// Negative eigenvalues above this are clamped to zero before sqrt/log.
inline constexpr double kNegativeClamp = -1e-10;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix diagonal(std::span<const Complex> d);
  /// |v><w|
  static ComplexMatrix outer(std::span<const Complex> v, std::span<const Complex> w);
  /// Single-column matrix holding v.
  static ComplexMatrix column_vector(std::span<const Complex> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  StateVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const Complex> v);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  Complex trace() const;

  /// Largest absolute entry.
  double max_abs() const;
  double frobenius_norm() const;

  bool is_hermitian(double tol) const;
  bool is_unitary(double tol) const;
  bool is_psd(double tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend StateVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
StateVector kron(std::span<const Complex> a, std::span<const Complex> b);

Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // <a|b>
double norm(std::span<const Complex> v);

/// Hermitian part (H + H^dagger)/2.
ComplexMatrix hermitian_part(const ComplexMatrix& h);

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns

  ComplexMatrix reconstruct() const;
};

/// Cyclic Jacobi eigensolver. Throws std::invalid_argument for non-square
/// input or input that is not Hermitian within 1e-10 (relative to its scale).
SpectralDecomposition herm_eig(const ComplexMatrix& h);

struct SingularValueDecomposition {
  ComplexMatrix u;                // rows x rows, unitary
  std::vector<double> singular;   // min(rows, cols), descending
  ComplexMatrix v;                // cols x cols, unitary

  ComplexMatrix reconstruct() const;
};

SingularValueDecomposition svd(const ComplexMatrix& m);

/// Unitary W maximizing Re Tr(W^dagger M); the maximum equals the sum of the
/// singular values of M.
ComplexMatrix polar_unitary(const ComplexMatrix& m);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

enum class ZeroConvention { kApplyFunction, kMapToZero };

/// V diag(f(w)) V^dagger. With kMapToZero, eigenvalues at or below
/// kEigenCutoff map to 0 instead of f(0).
ComplexMatrix spectral_fn(const ComplexMatrix& p, const std::function<double(double)>& f,
                          ZeroConvention zero = ZeroConvention::kApplyFunction);

/// PSD-requiring functions: clamp eigenvalues in [kNegativeClamp, 0) to zero,
/// throw std::domain_error below that.
ComplexMatrix psd_sqrt(const ComplexMatrix& p);
ComplexMatrix psd_log2(const ComplexMatrix& p);

/// Eigenvalues of a PSD matrix with small negatives clamped (throws like psd_sqrt).
std::vector<double> psd_eigenvalues(const ComplexMatrix& p);

/// Extends orthonormal columns to a full unitary whose leading columns are
/// the given ones.
ComplexMatrix complete_to_unitary(const ComplexMatrix& isometry);

}  // namespace qrecover
