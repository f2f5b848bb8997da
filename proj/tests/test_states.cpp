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


#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "qrecover/measures.hpp"
#include "qrecover/random.hpp"
#include "qrecover/states.hpp"

using namespace qrecover;

namespace {

LabeledState bell() { return entangled_input({0.5, 0.5}, 2); }

LabeledState random_pure_state(const std::vector<std::string>& labels, const std::vector<std::size_t>& dims,
                               Rng& rng) {
  SubsystemLayout layout(labels, dims);
  return LabeledState::pure(layout, random_pure(layout.total_dim(), rng));
}

std::vector<double> nonzero_sorted(std::vector<double> w) {
  std::erase_if(w, [](double x) { return x < 1e-12; });
  std::sort(w.begin(), w.end());
  return w;
}

}  // namespace

TEST_CASE("layout validation") {
  CHECK_THROWS_AS(SubsystemLayout({"R", "R"}, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemLayout({"R", "Q"}, {2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemLayout({"R"}, {2, 3}), std::invalid_argument);
  const SubsystemLayout l({"R", "Q", "E"}, {2, 3, 4});
  CHECK(l.total_dim() == 24);
  CHECK(l.position("E") == 2);
  CHECK(l.dim("Q") == 3);
  CHECK_THROWS_AS(l.position("X"), std::invalid_argument);
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(LabeledState::pure(SubsystemLayout({"Q"}, {2}), {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledState::pure(SubsystemLayout({"Q"}, {2}), {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LabeledState::mixed(SubsystemLayout({"Q"}, {2}), ComplexMatrix{{0.5, 0}, {0, 0.4}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LabeledState::mixed(SubsystemLayout({"Q"}, {2}), ComplexMatrix{{1.5, 0}, {0, -0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LabeledState::mixed(SubsystemLayout({"Q"}, {2}), ComplexMatrix{{0.5, 1}, {0, 0.5}}),
                  std::invalid_argument);
  const auto m = LabeledState::mixed(SubsystemLayout({"Q"}, {2}), ComplexMatrix{{0.5, 0}, {0, 0.5}});
  CHECK_FALSE(m.is_pure());
  CHECK_THROWS_AS(m.vector(), std::logic_error);
}

TEST_CASE("tensor product") {
  SUBCASE("|0>_Q (x) |0>_E") {
    const auto s = tensor(LabeledState::basis("Q", 2), LabeledState::basis("E", 2));
    CHECK(s.is_pure());
    CHECK(s.layout() == SubsystemLayout({"Q", "E"}, {2, 2}));
    CHECK(std::abs(s.vector()[0] - Complex(1.0)) < 1e-15);
    CHECK(norm(s.vector()) == doctest::Approx(1.0));
  }
  SUBCASE("mixed (x) maximally mixed traces back") {
    Rng rng(1);
    const auto rho = LabeledState::mixed(SubsystemLayout({"A"}, {3}), random_density(3, 2, rng));
    const auto mm = LabeledState::mixed(SubsystemLayout({"B"}, {4}), ComplexMatrix::identity(4) * Complex(0.25));
    const auto back = partial_trace(tensor(rho, mm), {"A"});
    CHECK(oracle::max_diff(back.density(), rho.density()) < 1e-12);
  }
  SUBCASE("bell (x) |0^E>") {
    const auto s = tensor(bell(), LabeledState::basis("E", 2));
    CHECK(s.dim() == 8);
    const auto& v = s.vector();
    const double h = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < 8; ++i) {
      const double expected = (i == 0 || i == 6) ? h : 0.0;  // |000> and |110>
      CHECK(std::abs(v[i] - Complex(expected)) < 1e-15);
    }
  }
  SUBCASE("label collision") {
    CHECK_THROWS_AS(tensor(LabeledState::basis("Q", 2), LabeledState::basis("Q", 2)), std::invalid_argument);
  }
}

TEST_CASE("partial trace") {
  SUBCASE("bell reduction is maximally mixed") {
    const auto r = partial_trace(bell(), {"Q"});
    CHECK(oracle::max_diff(r.density(), ComplexMatrix{{0.5, 0}, {0, 0.5}}) < 1e-15);
  }
  SUBCASE("product of mixed states") {
    Rng rng(2);
    const auto a = LabeledState::mixed(SubsystemLayout({"A"}, {2}), random_density(2, 2, rng));
    const auto b = LabeledState::mixed(SubsystemLayout({"B"}, {3}), random_density(3, 3, rng));
    CHECK(oracle::max_diff(partial_trace(tensor(a, b), {"A"}).density(), a.density()) < 1e-12);
    CHECK(oracle::max_diff(partial_trace(tensor(a, b), {"B"}).density(), b.density()) < 1e-12);
  }
  SUBCASE("agrees with explicit index loops") {
    Rng rng(3);
    const auto s = random_pure_state({"A", "B", "C"}, {2, 3, 4}, rng);
    const ComplexMatrix full = s.density();
    // Keep AB: trace out C from (AB) (x) C.
    CHECK(oracle::max_diff(partial_trace(s, {"A", "B"}).density(), oracle::trace_out_second(full, 6, 4)) < 1e-14);
    // Keep BC: trace out A from A (x) (BC).
    CHECK(oracle::max_diff(partial_trace(s, {"B", "C"}).density(), oracle::trace_out_first(full, 2, 12)) < 1e-14);
    // Keep A alone.
    CHECK(oracle::max_diff(partial_trace(s, {"A"}).density(), oracle::trace_out_second(full, 2, 12)) < 1e-14);
    // Keep the middle subsystem.
    const ComplexMatrix bc = oracle::trace_out_first(full, 2, 12);
    CHECK(oracle::max_diff(partial_trace(s, {"B"}).density(), oracle::trace_out_second(bc, 3, 4)) < 1e-14);
  }
  SUBCASE("kept labels follow layout order") {
    Rng rng(4);
    const auto s = random_pure_state({"A", "B", "C"}, {2, 3, 2}, rng);
    const auto kept = partial_trace(s, {"C", "A"});
    CHECK(kept.layout().labels == std::vector<std::string>{"A", "C"});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(partial_trace(bell(), {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(bell(), {"X"}), std::invalid_argument);
  }
}

TEST_CASE("partial trace preserves trace and positivity") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const std::size_t da = rng.uniform_int(1, 4), db = rng.uniform_int(1, 4);
    const auto rho = LabeledState::mixed(SubsystemLayout({"A", "B"}, {da, db}),
                                         random_density(da * db, rng.uniform_int(1, da * db), rng));
    const ComplexMatrix red = partial_trace(rho, {"B"}).density();
    CHECK(std::abs(red.trace() - Complex(1.0)) < 1e-12);
    CHECK(red.is_psd(1e-12));
    CHECK(red.is_hermitian(1e-14));
  }
}

TEST_CASE("reductions of a pure bipartite state share their spectrum") {
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_pure_state({"A", "B"}, {3, 4}, rng);
    const auto wa = nonzero_sorted(psd_eigenvalues(partial_trace(s, {"A"}).density()));
    const auto wb = nonzero_sorted(psd_eigenvalues(partial_trace(s, {"B"}).density()));
    REQUIRE(wa.size() == wb.size());
    for (std::size_t i = 0; i < wa.size(); ++i) CHECK(std::abs(wa[i] - wb[i]) < 1e-9);
    CHECK(std::abs(von_neumann_entropy(partial_trace(s, {"A"})) - von_neumann_entropy(partial_trace(s, {"B"}))) <
          1e-9);
  }
}

TEST_CASE("schmidt decomposition") {
  SUBCASE("product state") {
    const auto s = tensor(LabeledState::basis("A", 2, 1), LabeledState::basis("B", 3, 2));
    const auto f = schmidt(s);
    REQUIRE(f.coefficients.size() == 1);
    CHECK(f.coefficients[0] == doctest::Approx(1.0));
  }
  SUBCASE("bell") {
    const auto f = schmidt(bell());
    REQUIRE(f.coefficients.size() == 2);
    CHECK(std::abs(f.coefficients[0] - 1.0 / std::sqrt(2.0)) < 1e-14);
    CHECK(std::abs(f.coefficients[1] - 1.0 / std::sqrt(2.0)) < 1e-14);
  }
  SUBCASE("random states reconstruct") {
    Rng rng(7);
    for (auto [da, db] : {std::pair<std::size_t, std::size_t>{4, 4}, {2, 5}, {5, 3}}) {
      const auto s = random_pure_state({"A", "B"}, {da, db}, rng);
      const auto f = schmidt(s);
      StateVector rebuilt(da * db);
      for (std::size_t k = 0; k < f.coefficients.size(); ++k)
        for (std::size_t a = 0; a < da; ++a)
          for (std::size_t b = 0; b < db; ++b)
            rebuilt[a * db + b] += f.coefficients[k] * f.left_basis(a, k) * f.right_basis(b, k);
      double diff = 0.0;
      for (std::size_t i = 0; i < rebuilt.size(); ++i) diff = std::max(diff, std::abs(rebuilt[i] - s.vector()[i]));
      CHECK(diff < 1e-9);
      const auto p = f.probabilities();
      double total = 0.0;
      for (double x : p) total += x;
      CHECK(std::abs(total - 1.0) < 1e-10);
      CHECK(std::is_sorted(f.coefficients.rbegin(), f.coefficients.rend()));
      const ComplexMatrix gl = f.left_basis.adjoint() * f.left_basis;
      const ComplexMatrix gr = f.right_basis.adjoint() * f.right_basis;
      CHECK(oracle::max_diff(gl, ComplexMatrix::identity(gl.rows())) < 1e-10);
      CHECK(oracle::max_diff(gr, ComplexMatrix::identity(gr.rows())) < 1e-10);
      double rdiff = 0.0;
      const StateVector r2 = f.reconstruct();
      for (std::size_t i = 0; i < r2.size(); ++i) rdiff = std::max(rdiff, std::abs(r2[i] - s.vector()[i]));
      CHECK(rdiff < 1e-9);
    }
  }
  SUBCASE("equal states give equal coefficients") {
    Rng rng(8);
    const auto s = random_pure_state({"A", "B"}, {3, 3}, rng);
    StateVector phased = s.vector();
    for (auto& z : phased) z *= std::polar(1.0, 0.7);
    const auto f1 = schmidt(s);
    const auto f2 = schmidt(LabeledState::pure(s.layout(), phased));
    REQUIRE(f1.coefficients.size() == f2.coefficients.size());
    for (std::size_t k = 0; k < f1.coefficients.size(); ++k)
      CHECK(std::abs(f1.coefficients[k] - f2.coefficients[k]) < 1e-12);
  }
  SUBCASE("requires a pure bipartite state") {
    CHECK_THROWS_AS(schmidt(partial_trace(tensor(bell(), LabeledState::basis("E", 2)), {"R", "Q"})),
                    std::invalid_argument);
    CHECK_THROWS_AS(schmidt(tensor(bell(), LabeledState::basis("E", 2))), std::invalid_argument);
  }
}

TEST_CASE("purification") {
  SUBCASE("pure input") {
    Rng rng(9);
    const StateVector psi = random_pure(3, rng);
    const auto rho = LabeledState::mixed(SubsystemLayout({"A"}, {3}), ComplexMatrix::outer(psi, psi));
    const auto p = purify(rho, "X", 2);
    const StateVector expected = kron(std::span<const Complex>(psi), std::span<const Complex>(StateVector{1, 0}));
    CHECK(std::abs(std::abs(inner(expected, p.vector())) - 1.0) < 1e-12);
  }
  SUBCASE("maximally mixed qubit") {
    const auto rho = LabeledState::mixed(SubsystemLayout({"A"}, {2}), ComplexMatrix{{0.5, 0}, {0, 0.5}});
    const auto p = purify(rho, "X", 2);
    CHECK(oracle::max_diff(partial_trace(p, {"A"}).density(), rho.density()) < 1e-14);
    CHECK(oracle::max_diff(partial_trace(p, {"X"}).density(), rho.density()) < 1e-14);
  }
  SUBCASE("round trip for random rank-3 density") {
    Rng rng(10);
    const auto rho = LabeledState::mixed(SubsystemLayout({"A"}, {4}), random_density(4, 3, rng));
    const auto p = purify(rho, "X", 3);
    CHECK(oracle::max_diff(partial_trace(p, {"A"}).density(), rho.density()) < 1e-9);
    CHECK_THROWS_AS(purify(rho, "X", 2), std::invalid_argument);
    CHECK_THROWS_AS(purify(rho, "A", 3), std::invalid_argument);
  }
  SUBCASE("round trip on random multipartite reductions") {
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
      const auto s = random_pure_state({"A", "B"}, {3, 2}, rng);
      const auto red = partial_trace(s, {"A"});
      const auto p = purify(red, "Y", 3);
      CHECK(oracle::max_diff(partial_trace(p, {"A"}).density(), red.density()) < 1e-9);
    }
  }
}

TEST_CASE("entangled input states") {
  SUBCASE("single coefficient is a product state") {
    const auto s = entangled_input({1.0}, 2);
    CHECK(von_neumann_entropy(partial_trace(s, {"Q"})) < 1e-12);
  }
  SUBCASE("bell") {
    CHECK(std::abs(von_neumann_entropy(partial_trace(bell(), {"Q"})) - 1.0) < 1e-12);
  }
  SUBCASE("three-level coefficients") {
    const std::vector<double> lambda{0.7, 0.2, 0.1};
    const auto s = entangled_input(lambda, 3);
    const double direct = -(0.7 * std::log2(0.7) + 0.2 * std::log2(0.2) + 0.1 * std::log2(0.1));
    CHECK(std::abs(von_neumann_entropy(partial_trace(s, {"Q"})) - direct) < 1e-12);
    CHECK(direct == doctest::Approx(1.15678).epsilon(1e-5));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(entangled_input({0.5, 0.4}, 2), std::invalid_argument);
    CHECK_THROWS_AS(entangled_input({0.5, 0.5}, 1), std::invalid_argument);
    CHECK_THROWS_AS(entangled_input({1.5, -0.5}, 2), std::invalid_argument);
  }
}

TEST_CASE("local operators and merging") {
  Rng rng(12);
  const auto s = random_pure_state({"A", "B", "C"}, {2, 3, 2}, rng);
  const ComplexMatrix u = random_unitary(3, rng);
  std::vector<std::size_t> dims = s.layout().dims;
  const StateVector out = apply_local(s.vector(), dims, 1, u);
  const StateVector direct = kron(ComplexMatrix::identity(2), kron(u, ComplexMatrix::identity(2))) *
                             std::span<const Complex>(s.vector());
  double diff = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) diff = std::max(diff, std::abs(out[i] - direct[i]));
  CHECK(diff < 1e-14);

  const auto merged = merge_adjacent(s, "B", "C", "BC");
  CHECK(merged.layout() == SubsystemLayout({"A", "BC"}, {2, 6}));
  CHECK_THROWS_AS(merge_adjacent(s, "A", "C", "AC"), std::invalid_argument);
  CHECK(overlap(s, s) == doctest::Approx(1.0));
}

TEST_CASE("rng streams are reproducible") {
  Rng a(stream_seed(42, 3, 7)), b(stream_seed(42, 3, 7));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(stream_seed(42, 3, 7) != stream_seed(42, 7, 3));
  CHECK(stream_seed(42, 0, 1) != stream_seed(43, 0, 1));
  Rng u(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
    const auto k = u.uniform_int(2, 5);
    CHECK((k >= 2 && k <= 5));
  }
}

TEST_CASE("random states and unitaries are valid") {
  Rng rng(13);
  for (std::size_t n : {1, 2, 5, 8}) {
    CHECK(random_unitary(n, rng).is_unitary(1e-12));
    const ComplexMatrix iso = random_isometry(n * 3, n, rng);
    CHECK(oracle::max_diff(iso.adjoint() * iso, ComplexMatrix::identity(n)) < 1e-12);
    const ComplexMatrix rho = random_density(n, n, rng);
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
    CHECK(rho.is_psd(1e-12));
    CHECK(norm(random_pure(n, rng)) == doctest::Approx(1.0));
  }
  const ComplexMatrix rank2 = random_density(5, 2, rng);
  const auto w = psd_eigenvalues(rank2);
  CHECK(std::count_if(w.begin(), w.end(), [](double x) { return x > 1e-12; }) == 2);
}
