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

#include "qrecover/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrecover {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial) {
  return splitmix64(base ^ splitmix64((point << 32) + trial));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::uniform_int(std::size_t lo, std::size_t hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::size_t>(engine_() % span);
}

// Box-Muller, caching the second variate.
double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (auto& z : g.entries()) z = rng.complex_normal();
  return g;
}

namespace {

// Gram-Schmidt with one reorthogonalization pass.
ComplexMatrix orthonormalize(const ComplexMatrix& g) {
  const std::size_t rows = g.rows();
  const std::size_t cols = g.cols();
  ComplexMatrix q(rows, cols);
  for (std::size_t c = 0; c < cols; ++c) {
    StateVector x = g.column(c);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < c; ++p) {
        const StateVector qp = q.column(p);
        const Complex ov = inner(qp, x);
        for (std::size_t i = 0; i < rows; ++i) x[i] -= ov * qp[i];
      }
    const double nr = norm(x);
    if (nr == 0.0) throw std::runtime_error("orthonormalize: rank-deficient Gaussian sample");
    for (auto& z : x) z /= nr;
    q.set_column(c, x);
  }
  return q;
}

}  // namespace

ComplexMatrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw std::invalid_argument("random_isometry: cols > rows");
  return orthonormalize(ginibre(rows, cols, rng));
}

// Gram-Schmidt already yields a positive-real R diagonal, which is the phase
// convention that makes QR of a Ginibre matrix Haar distributed.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  return orthonormalize(ginibre(dim, dim, rng));
}

ComplexMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  if (rank == 0 || rank > dim) throw std::invalid_argument("random_density: rank out of range");
  const ComplexMatrix g = ginibre(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= 1.0 / tr;
  return hermitian_part(rho);
}

StateVector random_pure(std::size_t dim, Rng& rng) {
  StateVector v(dim);
  for (auto& z : v) z = rng.complex_normal();
  const double nr = norm(v);
  for (auto& z : v) z /= nr;
  return v;
}

}  // namespace qrecover
