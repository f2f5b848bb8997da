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

#include "qrecover/matkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qrecover {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ComplexMatrix: zero dimension");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ComplexMatrix: zero dimension");
  if (data_.size() != rows * cols)
    throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("ComplexMatrix: zero dimension");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v, std::span<const Complex> w) {
  ComplexMatrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

ComplexMatrix ComplexMatrix::column_vector(std::span<const Complex> v) {
  return ComplexMatrix(v.size(), 1, StateVector(v.begin(), v.end()));
}

StateVector ComplexMatrix::column(std::size_t c) const {
  StateVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> v) {
  if (v.size() != rows_) throw std::invalid_argument("set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m = *this;
  for (auto& z : m.data_) z = std::conj(z);
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace: non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  if (!is_square()) return false;
  return (adjoint() * (*this) - identity(rows_)).max_abs() <= tol;
}

bool ComplexMatrix::is_psd(double tol) const {
  if (!is_hermitian(tol)) return false;
  const auto eig = herm_eig(hermitian_part(*this));
  return eig.eigenvalues.front() >= -tol;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix +: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix -: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix *: shape mismatch");
  ComplexMatrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

StateVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector *: shape mismatch");
  StateVector out(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * v[k];
    out[i] = s;
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

StateVector kron(std::span<const Complex> a, std::span<const Complex> b) {
  StateVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw std::invalid_argument("inner: length mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  if (!h.is_square()) throw std::invalid_argument("hermitian_part: non-square matrix");
  ComplexMatrix m = h;
  for (std::size_t r = 0; r < h.rows(); ++r)
    for (std::size_t c = 0; c < h.cols(); ++c) m(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
  return m;
}

namespace {

// 2x2 unitary G with G^dagger [[a, b], [conj(b), d]] G diagonal (a, d real).
struct Rotation {
  Complex g00, g01, g10, g11;
};

Rotation jacobi_rotation(double a, double d, Complex b) {
  const double absb = std::abs(b);
  const double theta = (d - a) / (2.0 * absb);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  Complex phase_conj = std::conj(b / absb);
  phase_conj /= std::abs(phase_conj);
  return {c, s, -s * phase_conj, c * phase_conj};
}

// Right-multiplies columns p, q of m by the rotation.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& g) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const Complex mp = m(k, p);
    const Complex mq = m(k, q);
    m(k, p) = mp * g.g00 + mq * g.g10;
    m(k, q) = mp * g.g01 + mq * g.g11;
  }
}

void rotate_rows_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& g) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const Complex mp = m(p, k);
    const Complex mq = m(q, k);
    m(p, k) = std::conj(g.g00) * mp + std::conj(g.g10) * mq;
    m(q, k) = std::conj(g.g01) * mp + std::conj(g.g11) * mq;
  }
}

constexpr int kMaxSweeps = 100;

}  // namespace

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * ComplexMatrix::diagonal(eigenvalues) * eigenvectors.adjoint();
}

SpectralDecomposition herm_eig(const ComplexMatrix& h) {
  if (!h.is_square()) throw std::invalid_argument("herm_eig: non-square matrix");
  const double scale = std::max(1.0, h.max_abs());
  if (!h.is_hermitian(1e-10 * scale))
    throw std::invalid_argument("herm_eig: matrix is not Hermitian within tolerance");

  const std::size_t n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double fro = a.frobenius_norm();
  for (int sweep = 0; sweep < kMaxSweeps && fro > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-16 * fro) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double absb = std::abs(b);
        if (absb == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Below rounding of both diagonal entries: annihilate without rotating.
        if (sweep > 3 && absb < 1e-18 * std::abs(app) && absb < 1e-18 * std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Rotation g = jacobi_rotation(app, aqq, b);
        rotate_columns(a, p, q, g);
        rotate_rows_adjoint(a, p, q, g);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, g);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  SpectralDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

ComplexMatrix SingularValueDecomposition::reconstruct() const {
  ComplexMatrix s(u.cols(), v.cols());
  for (std::size_t i = 0; i < singular.size(); ++i) s(i, i) = singular[i];
  return u * s * v.adjoint();
}

// One-sided (Hestenes) Jacobi: orthogonalize the columns of M V, then the
// column norms are the singular values.
SingularValueDecomposition svd(const ComplexMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  ComplexMatrix w = m;
  ComplexMatrix v = ComplexMatrix::identity(cols);
  // Pairs whose overlap is at rounding level of the whole matrix are left
  // alone; rotating them chases subnormal noise.
  const double floor = 1e-30 * std::max(m.frobenius_norm() * m.frobenius_norm(), 1e-300);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i < cols; ++i) {
      for (std::size_t j = i + 1; j < cols; ++j) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
          alpha += std::norm(w(r, i));
          beta += std::norm(w(r, j));
          gamma += std::conj(w(r, i)) * w(r, j);
        }
        const double absg = std::abs(gamma);
        if (absg <= floor || absg <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Rotation g = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, i, j, g);
        rotate_columns(v, i, j, g);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(cols);
  for (std::size_t c = 0; c < cols; ++c) norms[c] = qrecover::norm(w.column(c));
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  const std::size_t k = std::min(rows, cols);
  const double smax = norms[order[0]];
  SingularValueDecomposition out{ComplexMatrix(rows, rows), std::vector<double>(k),
                                 ComplexMatrix(cols, cols)};
  for (std::size_t c = 0; c < cols; ++c) out.v.set_column(c, v.column(order[c]));

  std::size_t resolved = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double s = norms[order[i]];
    out.singular[i] = s;
    if (s > 1e-14 * smax && s > 0.0) ++resolved;
  }
  if (resolved > 0) {
    ComplexMatrix basis(rows, resolved);
    for (std::size_t i = 0; i < resolved; ++i) {
      StateVector col = w.column(order[i]);
      for (auto& z : col) z /= out.singular[i];
      basis.set_column(i, col);
    }
    out.u = complete_to_unitary(basis);
  } else {
    out.u = ComplexMatrix::identity(rows);
  }
  return out;
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("polar_unitary: non-square matrix");
  const auto dec = svd(m);
  return dec.u * dec.v.adjoint();
}

double trace_norm(const ComplexMatrix& m) {
  const auto dec = svd(m);
  return std::accumulate(dec.singular.begin(), dec.singular.end(), 0.0);
}

ComplexMatrix spectral_fn(const ComplexMatrix& p, const std::function<double(double)>& f,
                          ZeroConvention zero) {
  const auto dec = herm_eig(p);
  std::vector<double> mapped(dec.eigenvalues.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const double w = dec.eigenvalues[i];
    mapped[i] = (zero == ZeroConvention::kMapToZero && std::abs(w) <= kEigenCutoff) ? 0.0 : f(w);
  }
  return dec.eigenvectors * ComplexMatrix::diagonal(mapped) * dec.eigenvectors.adjoint();
}

namespace {

void require_psd_spectrum(const std::vector<double>& w) {
  if (!w.empty() && w.front() < kNegativeClamp)
    throw std::domain_error("negative eigenvalue " + std::to_string(w.front()) +
                            " below clamp threshold");
}

}  // namespace

std::vector<double> psd_eigenvalues(const ComplexMatrix& p) {
  auto w = herm_eig(p).eigenvalues;
  require_psd_spectrum(w);
  for (auto& x : w) x = std::max(x, 0.0);
  return w;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& p) {
  const auto dec = herm_eig(p);
  require_psd_spectrum(dec.eigenvalues);
  std::vector<double> mapped(dec.eigenvalues.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const double w = dec.eigenvalues[i];
    mapped[i] = w <= kEigenCutoff ? 0.0 : std::sqrt(w);
  }
  return dec.eigenvectors * ComplexMatrix::diagonal(mapped) * dec.eigenvectors.adjoint();
}

ComplexMatrix psd_log2(const ComplexMatrix& p) {
  const auto dec = herm_eig(p);
  require_psd_spectrum(dec.eigenvalues);
  std::vector<double> mapped(dec.eigenvalues.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const double w = dec.eigenvalues[i];
    mapped[i] = w <= kEigenCutoff ? 0.0 : std::log2(w);
  }
  return dec.eigenvectors * ComplexMatrix::diagonal(mapped) * dec.eigenvectors.adjoint();
}

ComplexMatrix complete_to_unitary(const ComplexMatrix& isometry) {
  const std::size_t n = isometry.rows();
  const std::size_t k = isometry.cols();
  if (k > n) throw std::invalid_argument("complete_to_unitary: more columns than rows");

  std::vector<StateVector> basis;
  basis.reserve(n);
  for (std::size_t c = 0; c < k; ++c) basis.push_back(isometry.column(c));

  auto project_out = [&](StateVector& x) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const Complex ov = inner(b, x);
        for (std::size_t i = 0; i < n; ++i) x[i] -= ov * b[i];
      }
  };

  // Greedy: always take the standard basis vector with the largest residual.
  std::vector<bool> used(n, false);
  while (basis.size() < n) {
    std::size_t best = n;
    double best_norm = -1.0;
    StateVector best_vec;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      StateVector e(n);
      e[j] = 1.0;
      project_out(e);
      const double nr = norm(e);
      if (nr > best_norm) {
        best_norm = nr;
        best = j;
        best_vec = std::move(e);
      }
    }
    used[best] = true;
    for (auto& z : best_vec) z /= best_norm;
    project_out(best_vec);
    const double renorm = norm(best_vec);
    for (auto& z : best_vec) z /= renorm;
    basis.push_back(std::move(best_vec));
  }

  ComplexMatrix u(n, n);
  for (std::size_t c = 0; c < n; ++c) u.set_column(c, basis[c]);
  return u;
}

}  // namespace qrecover
