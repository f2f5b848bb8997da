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


#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "qrecover/matkernel.hpp"
#include "qrecover/random.hpp"

using namespace qrecover;

TEST_CASE("matrix shape is validated") {
  CHECK_THROWS_AS(ComplexMatrix(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(ComplexMatrix(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), std::invalid_argument);
  const ComplexMatrix m(3, 4);
  CHECK(m.entries().size() == 12);
  CHECK_THROWS_AS(m * m, std::invalid_argument);
}

TEST_CASE("products and kron follow row-major layout") {
  const ComplexMatrix a{{1, 2}, {3, 4}};
  const ComplexMatrix b{{0, Complex(0, 1)}, {1, 0}};
  CHECK(oracle::max_diff(a * b, oracle::matmul(a, b)) < 1e-15);
  const ComplexMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 3) == Complex(0, 2));
  CHECK(k(2, 1) == Complex(0, 3));
  CHECK(k(3, 2) == Complex(4));
  const StateVector v{1, 2}, w{Complex(0, 1), 3};
  const StateVector kv = kron(v, w);
  CHECK(kv[1] == Complex(3));
  CHECK(kv[2] == Complex(0, 2));
  CHECK(inner(v, w) == Complex(6, 1));
}

TEST_CASE("matrix predicates") {
  CHECK(ComplexMatrix::identity(3).is_unitary(1e-12));
  CHECK(ComplexMatrix({{1, Complex(0, 1)}, {Complex(0, -1), 2}}).is_hermitian(1e-12));
  CHECK_FALSE(ComplexMatrix({{1, 1}, {0, 1}}).is_hermitian(1e-12));
  CHECK(ComplexMatrix({{1, 1}, {1, 1}}).is_psd(1e-12));
  CHECK_FALSE(ComplexMatrix({{0, 1}, {1, 0}}).is_psd(1e-12));
}

TEST_CASE("herm_eig on fixed inputs") {
  SUBCASE("identity") {
    const auto d = herm_eig(ComplexMatrix::identity(2));
    CHECK(d.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("pauli z") {
    const double z[] = {1.0, -1.0};
    const auto d = herm_eig(ComplexMatrix::diagonal(std::span<const double>(z)));
    CHECK(d.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(d.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("rejects non-hermitian and non-square") {
    CHECK_THROWS_AS(herm_eig(ComplexMatrix({{1, 1}, {0, 1}})), std::invalid_argument);
    CHECK_THROWS_AS(herm_eig(ComplexMatrix(2, 3)), std::invalid_argument);
  }
}

TEST_CASE("herm_eig reconstructs random hermitian matrices") {
  Rng rng(11);
  for (std::size_t n : {1, 2, 3, 5, 8, 16, 33, 64}) {
    const ComplexMatrix h = oracle::random_hermitian(n, rng);
    const auto d = herm_eig(h);
    const ComplexMatrix& v = d.eigenvectors;
    const ComplexMatrix rebuilt =
        oracle::matmul(oracle::matmul(v, ComplexMatrix::diagonal(std::span<const double>(d.eigenvalues))),
                       oracle::dagger(v));
    CAPTURE(n);
    CHECK(oracle::max_diff(rebuilt, h) <= 1e-10 * static_cast<double>(n));
    CHECK(oracle::max_diff(oracle::matmul(oracle::dagger(v), v), ComplexMatrix::identity(n)) < 1e-10);
    CHECK(std::is_sorted(d.eigenvalues.begin(), d.eigenvalues.end()));
    const double sum = std::accumulate(d.eigenvalues.begin(), d.eigenvalues.end(), 0.0);
    CHECK(std::abs(sum - h.trace().real()) < 1e-9);
  }
}

TEST_CASE("herm_eig handles degenerate spectra") {
  Rng rng(3);
  const ComplexMatrix u = random_unitary(6, rng);
  const double w[] = {0.0, 0.0, 0.5, 0.5, 0.5, 2.0};
  const ComplexMatrix h = hermitian_part(u * ComplexMatrix::diagonal(std::span<const double>(w)) * u.adjoint());
  const auto d = herm_eig(h);
  for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(d.eigenvalues[i] - w[i]) < 1e-12);
  CHECK(oracle::max_diff(d.reconstruct(), h) < 1e-12);
}

TEST_CASE("svd on fixed inputs") {
  SUBCASE("identity") {
    const auto s = svd(ComplexMatrix::identity(3));
    for (double x : s.singular) CHECK(x == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("diag(3, -4)") {
    const auto s = svd(ComplexMatrix{{3, 0}, {0, -4}});
    CHECK(s.singular[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(s.singular[1] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(oracle::max_diff(s.reconstruct(), ComplexMatrix{{3, 0}, {0, -4}}) < 1e-14);
  }
}

TEST_CASE("svd reconstructs random rectangular matrices") {
  Rng rng(5);
  for (auto [r, c] : {std::pair<std::size_t, std::size_t>{4, 6}, {6, 4}, {1, 5}, {5, 1}, {7, 7}, {12, 9}}) {
    const ComplexMatrix m = ginibre(r, c, rng);
    const auto s = svd(m);
    CAPTURE(r);
    CAPTURE(c);
    CHECK(s.u.is_unitary(1e-10));
    CHECK(s.v.is_unitary(1e-10));
    CHECK(std::is_sorted(s.singular.rbegin(), s.singular.rend()));
    ComplexMatrix sigma(r, c);
    for (std::size_t i = 0; i < s.singular.size(); ++i) sigma(i, i) = s.singular[i];
    const ComplexMatrix rebuilt = oracle::matmul(oracle::matmul(s.u, sigma), oracle::dagger(s.v));
    CHECK(oracle::max_diff(rebuilt, m) <= 1e-10 * static_cast<double>(std::max(r, c)));
  }
}

TEST_CASE("svd of rank-deficient matrix completes the bases") {
  Rng rng(8);
  const ComplexMatrix a = ginibre(5, 2, rng);
  const ComplexMatrix m = a * ginibre(2, 5, rng);
  const auto s = svd(m);
  CHECK(s.u.is_unitary(1e-10));
  CHECK(s.v.is_unitary(1e-10));
  CHECK(s.singular[2] < 1e-12);
  CHECK(oracle::max_diff(s.reconstruct(), m) < 1e-10);
}

TEST_CASE("polar unitary") {
  SUBCASE("unitary input is returned") {
    Rng rng(1);
    const ComplexMatrix u = random_unitary(4, rng);
    const ComplexMatrix w = polar_unitary(u);
    CHECK(oracle::max_diff(w, u) < 1e-10);
    CHECK(std::abs((w.adjoint() * u).trace() - Complex(4.0)) < 1e-10);
  }
  SUBCASE("positive diagonal gives identity") {
    const ComplexMatrix m{{2, 0}, {0, 3}};
    const ComplexMatrix w = polar_unitary(m);
    CHECK(oracle::max_diff(w, ComplexMatrix::identity(2)) < 1e-14);
    CHECK(std::abs((w.adjoint() * m).trace() - Complex(5.0)) < 1e-14);
  }
  SUBCASE("trace of W^dagger M equals the singular value sum") {
    Rng rng(2);
    for (std::size_t n : {2, 3, 4, 6, 9}) {
      const ComplexMatrix m = ginibre(n, n, rng);
      const ComplexMatrix w = polar_unitary(m);
      CHECK(w.is_unitary(1e-10));
      const auto s = svd(m);
      const double total = std::accumulate(s.singular.begin(), s.singular.end(), 0.0);
      const Complex t = (w.adjoint() * m).trace();
      CHECK(std::abs(t.real() - total) < 1e-9);
      CHECK(std::abs(t.imag()) < 1e-9);
      CHECK(std::abs(trace_norm(m) - total) < 1e-12);
    }
  }
}

TEST_CASE("spectral functions") {
  SUBCASE("sqrt of diag(4, 9)") {
    const ComplexMatrix r = psd_sqrt(ComplexMatrix{{4, 0}, {0, 9}});
    CHECK(oracle::max_diff(r, ComplexMatrix{{2, 0}, {0, 3}}) < 1e-14);
  }
  SUBCASE("log2 of identity") {
    CHECK(psd_log2(ComplexMatrix::identity(3)).max_abs() < 1e-15);
  }
  SUBCASE("sqrt squares back") {
    Rng rng(4);
    for (std::size_t n : {2, 4, 7}) {
      const ComplexMatrix p = random_density(n, n - 1, rng);
      const ComplexMatrix r = psd_sqrt(p);
      CHECK(oracle::max_diff(oracle::matmul(r, r), p) <= 1e-9 * static_cast<double>(n));
    }
  }
  SUBCASE("identity function is faithful") {
    Rng rng(6);
    const ComplexMatrix p = random_density(5, 5, rng);
    CHECK(oracle::max_diff(spectral_fn(p, [](double x) { return x; }), p) < 1e-12);
  }
  SUBCASE("zero convention") {
    const ComplexMatrix p{{1, 0}, {0, 0}};
    const ComplexMatrix l = spectral_fn(p, [](double x) { return std::log2(x); }, ZeroConvention::kMapToZero);
    CHECK(std::isfinite(l(1, 1).real()));
    CHECK(l.max_abs() < 1e-15);
  }
  SUBCASE("clamp and rejection of negative eigenvalues") {
    CHECK_NOTHROW(psd_sqrt(ComplexMatrix{{1, 0}, {0, -5e-11}}));
    CHECK_THROWS_AS(psd_sqrt(ComplexMatrix{{1, 0}, {0, -1e-6}}), std::domain_error);
    const auto w = psd_eigenvalues(ComplexMatrix{{1, 0}, {0, -5e-11}});
    CHECK(w[0] == 0.0);
  }
}

TEST_CASE("complete_to_unitary extends an isometry") {
  Rng rng(9);
  const ComplexMatrix iso = random_isometry(6, 2, rng);
  const ComplexMatrix u = complete_to_unitary(iso);
  CHECK(u.is_unitary(1e-12));
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t r = 0; r < 6; ++r) CHECK(std::abs(u(r, c) - iso(r, c)) < 1e-14);
  const ComplexMatrix e0{{1}, {0}, {0}};
  CHECK(complete_to_unitary(e0).is_unitary(1e-14));
}
