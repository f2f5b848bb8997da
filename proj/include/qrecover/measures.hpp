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

// Entropic and distance measures. All entropies are in bits.

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qrecover/channels.hpp"
#include "qrecover/matkernel.hpp"
#include "qrecover/states.hpp"

namespace qrecover {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Named numeric fields in serialization order.
using FlatRecord = std::vector<std::pair<std::string, double>>;

double von_neumann_entropy(const ComplexMatrix& rho);
inline double von_neumann_entropy(const LabeledState& s) { return von_neumann_entropy(s.density()); }

/// Entropy bookkeeping for a tripartite pure state on (R, Q, E) after a channel.
struct LossReport {
  double s_q = 0.0;  // S^Q before the channel, equal to S(rho^R') since R is untouched
  double s_q_out = 0.0;
  double s_rq_out = 0.0;
  double s_r_out = 0.0;
  double s_e_out = 0.0;
  double s_re_out = 0.0;
  double coherent_info = 0.0;  // S^Q' - S^RQ'
  double loss = 0.0;           // S^Q - I
  double loss_via_relent = 0.0;

  FlatRecord fields() const;
};

/// Requires a pure state with labels R, Q and E.
LossReport coherent_information(const LabeledState& final_state);

/// D(rho || sigma) in bits; kInfinity when supp rho is not inside supp sigma.
double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma);

double classical_relative_entropy(std::span<const double> p, std::span<const double> q);

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), evaluated as the trace
/// norm of sqrt(rho) sqrt(sigma).
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// rho - sigma = A - B with orthogonal supports; pi projects onto supp A.
struct HelstromSplit {
  ComplexMatrix pi{1, 1};
  double a_trace = 0.0;
  std::array<double, 2> p{};
  std::array<double, 2> q{};

  double l1_distance() const { return std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]); }
};

HelstromSplit helstrom_split(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Outcome distribution of the projective measurement in the given
/// orthonormal basis (columns).
std::vector<double> measurement_distribution(const ComplexMatrix& rho, const ComplexMatrix& basis);

struct DistanceReport {
  double relent = 0.0;
  double trace_dist = 0.0;
  double fidelity = 1.0;

  /// relent - (2/ln2) D^2; +inf when relent is infinite.
  double pinsker_margin() const;
  /// F - (1 - D).
  double fuchs_margin() const;
  /// F - (1 - sqrt((ln2/2) relent)); +inf when relent is infinite.
  double tight_chain_margin() const;
  /// F - (1 - sqrt(relent)); +inf when relent is infinite.
  double chain_margin() const;
  /// All invariants hold with slack `tol`.
  bool consistent(double tol = 1e-9) const;

  FlatRecord fields() const;
};

DistanceReport distance_report(const ComplexMatrix& rho, const ComplexMatrix& sigma);

struct MonotonicityReport {
  DistanceReport before;
  DistanceReport after;
  /// Positive amounts by which each measure moved the wrong way (0 if fine).
  double relent_increase = 0.0;
  double trace_dist_increase = 0.0;
  double fidelity_decrease = 0.0;

  bool holds(double slack = 1e-8) const {
    return relent_increase <= slack && trace_dist_increase <= slack && fidelity_decrease <= slack;
  }
};

MonotonicityReport monotonicity_check(const QuantumChannel& ch, const ComplexMatrix& rho,
                                      const ComplexMatrix& sigma);

}  // namespace qrecover
