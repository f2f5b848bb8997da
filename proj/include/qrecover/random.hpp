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

// Seeded random sources for states, unitaries and channels.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniform and Gaussian variates are derived here rather than via
// <random> distributions, whose algorithms are implementation-defined, so a
// seed reproduces the same numbers under any conforming standard library.
//
// Stream splitting: the stream for (point, trial) under base seed s is seeded
// with splitmix64(s ^ splitmix64(point * 2^32 + trial)). Each sweep point and
// trial therefore owns an independent generator and serial and parallel
// execution draw identical numbers.

#pragma once

#include <cstdint>
#include <random>

#include "qrecover/matkernel.hpp"

namespace qrecover {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi].
  std::size_t uniform_int(std::size_t lo, std::size_t hi);
  double normal();
  /// Standard complex Gaussian (real and imaginary parts each N(0, 1/2)).
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Orthonormalized Gaussian columns (rows >= cols).
ComplexMatrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

/// Random density operator of the given rank: G G^dagger / Tr with G dim x rank.
ComplexMatrix random_density(std::size_t dim, std::size_t rank, Rng& rng);

/// Uniformly random unit vector.
StateVector random_pure(std::size_t dim, Rng& rng);

}  // namespace qrecover
