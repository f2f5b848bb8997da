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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrecover/matkernel.hpp"
#include "qrecover/random.hpp"
#include "qrecover/states.hpp"

namespace qrecover {

inline constexpr double kCompletenessTol = 1e-9;

/// Kraus family rejected because sum K^dagger K deviates from the identity.
class CompletenessError : public std::invalid_argument {
 public:
  explicit CompletenessError(double residual);
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// CPTP map rho -> sum_i K_i rho K_i^dagger.
class QuantumChannel {
 public:
  /// Throws CompletenessError when max|sum K^dagger K - 1| exceeds `tol`.
  static QuantumChannel from_kraus(std::vector<ComplexMatrix> kraus,
                                   double tol = kCompletenessTol);

  std::size_t dim_in() const { return kraus_.front().cols(); }
  std::size_t dim_out() const { return kraus_.front().rows(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  double completeness_residual() const;

 private:
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {}
  std::vector<ComplexMatrix> kraus_;
};

double completeness_residual(const std::vector<ComplexMatrix>& kraus);

/// Stinespring dilation: unitary on Q (x) E with the environment starting in
/// its first basis vector.
struct Dilation {
  std::size_t dim_q = 0;
  std::size_t env_dim = 0;
  ComplexMatrix u{1, 1};
  StateVector env_init;

  /// Tr_E[u (rho (x) |0><0|) u^dagger]
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

/// env_dim equals the Kraus count. Requires dim_in == dim_out.
Dilation dilate(const QuantumChannel& ch);

ComplexMatrix apply(const QuantumChannel& ch, const ComplexMatrix& rho);

/// Applies the channel to one labeled subsystem; the result is mixed.
LabeledState apply_on(const QuantumChannel& ch, const LabeledState& s, const std::string& label);

/// (1^R (x) U^{QE}) |Psi^{RQ}> (x) |0^E>; the input's last label must be Q.
LabeledState evolve_tripartite(const LabeledState& input, const Dilation& d);

/// Kraus family {A_i B_j}.
QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before);

/// Families: identity, phaseflip {p}, depolarizing {p}, ampdamp {g},
/// random {env_dim, seed}. Accepts the aliases phase-flip and
/// amplitude-damping.
QuantumChannel standard_channel(const std::string& family, const std::vector<double>& params,
                                std::size_t dim);

/// Kraus operators K_l = (1 (x) <l|) V for a random isometry V: Q -> Q (x) E.
/// env_dim = 1 gives a Haar-random unitary channel.
QuantumChannel random_channel(std::size_t dim, std::size_t env_dim, Rng& rng);

/// Parsed form of a CLI channel string such as "random:d=2,e=4,seed=7".
struct ChannelSpec {
  std::string family;
  std::map<std::string, double> params;

  /// Name of the parameter a sweep grid varies: p, g, or e.
  std::string primary_param() const;
  std::string to_string() const;
  std::size_t dim() const;
};

ChannelSpec parse_channel_spec(const std::string& text);
/// For the random family, `rng` (when given) replaces the spec's seed.
QuantumChannel build_channel(const ChannelSpec& spec, Rng* rng = nullptr);
inline QuantumChannel channel_from_spec(const std::string& text) {
  return build_channel(parse_channel_spec(text));
}

}  // namespace qrecover
