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

// Recovery operations built from the product structure of a tripartite
// purification.
//
// If the final state of R, Q and E has rho^RE = rho^R (x) rho^E, it can be
// written sum_kl sqrt(lambda_k mu_l) |k^R> |phi_kl^Q> |l^E> with orthonormal
// phi_kl. Measuring Q with Pi_l = sum_k |phi_kl><phi_kl| and then applying a
// unitary U_l with U_l |phi_kl> = |k^Q> restores the input on RQ exactly.
//
// When rho^RE is only close to a product, the same construction is applied
// to the purification of rho^R (x) rho^E that has maximal overlap with the
// true final state. Since fidelity cannot decrease under the recovery, the
// restored state has fidelity at least that overlap with the input, which is
// F(rho^RE, rho^R (x) rho^E) > 1 - sqrt(eps) where eps = S^Q - I.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qrecover/channels.hpp"
#include "qrecover/matkernel.hpp"
#include "qrecover/measures.hpp"
#include "qrecover/states.hpp"

namespace qrecover {

struct ProductStructure {
  std::vector<double> lambda;  // eigenvalues of rho^R above the cutoff, descending
  std::vector<double> mu;      // eigenvalues of rho^E above the cutoff, descending
  ComplexMatrix r_basis{1, 1};  // columns |k^R>
  ComplexMatrix e_basis{1, 1};  // columns |l^E>
  /// Retained (k, l) index pairs in lexicographic order; column j of phi is
  /// |phi_{k l}> for pairs[j] = (k, l).
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  ComplexMatrix phi{1, 1};
  /// Mass sum lambda_k mu_l of the pairs dropped because dim Q was too small.
  double truncated_weight = 0.0;

  std::size_t dim_q() const { return phi.rows(); }
  /// Sum of lambda_k mu_l over retained pairs.
  double retained_weight() const;
};

struct ProductPurification {
  LabeledState state;  // pure on (R, Q, E)
  ProductStructure structure;
};

/// sum_kl sqrt(lambda_k mu_l) |k^R> |phi_kl^Q> |l^E>, with phi_kl the leading
/// basis vectors of Q in (k, l) lexicographic order. If rank(rho_r) *
/// rank(rho_e) exceeds dim_q the smallest products are dropped and the state
/// renormalized. rho_r must be labeled R and rho_e labeled E.
ProductPurification product_purification(const LabeledState& rho_r, const LabeledState& rho_e,
                                          std::size_t dim_q);

struct AlignedPurification {
  LabeledState state;
  double overlap = 0.0;
  ComplexMatrix v{1, 1};  // unitary on Q with state = (1 (x) v (x) 1) seed
};

/// Rotates `seed` on Q to maximize |<target|(1 (x) V (x) 1)|seed>|. The maximum
/// is the trace norm of the Q-overlap operator and equals the fidelity of
/// the RE marginals when both states purify over the same Q.
AlignedPurification optimal_purification(const LabeledState& target, const LabeledState& seed);

/// Applies the Q rotation from optimal_purification to the phi family.
ProductStructure rotate_phi(ProductStructure s, const ComplexMatrix& v);

class RecoveryPlan {
 public:
  std::vector<std::size_t> outcomes;       // l for each projector
  std::vector<ComplexMatrix> projectors;   // Pi_l on the workspace
  std::vector<ComplexMatrix> unitaries;    // U_l on the workspace
  std::optional<ComplexMatrix> residual;   // 1 - sum Pi_l, when nonzero
  /// Workspace = Q (x) A with an ancilla A prepared in |0> and discarded.
  std::size_t ancilla_dim = 1;

  /// Kraus {U_l Pi_l} (+ residual) on the workspace.
  const QuantumChannel& as_channel() const { return *as_channel_; }
  /// The recovery as a channel on Q alone (ancilla absorbed).
  const QuantumChannel& system_channel() const { return *system_channel_; }

  std::size_t workspace_dim() const { return projectors.front().rows(); }
  std::size_t dim_q() const { return workspace_dim() / ancilla_dim; }

  /// max |Pi_a Pi_b - delta_ab Pi_a| over all pairs.
  double orthogonality_residual() const;

 private:
  std::optional<QuantumChannel> as_channel_;
  std::optional<QuantumChannel> system_channel_;
  friend RecoveryPlan build_recovery(const ProductStructure&, const ComplexMatrix&, std::size_t);
};

/// target_q_basis columns are |k^Q> on the workspace, one per lambda_k.
RecoveryPlan build_recovery(const ProductStructure& structure, const ComplexMatrix& target_q_basis,
                            std::size_t ancilla_dim = 1);

/// Kraus family (1 (x) <a|) K (1 (x) |0>) over all a and K.
QuantumChannel absorb_ancilla(const QuantumChannel& workspace_channel, std::size_t ancilla_dim);

struct CorrectionOptions {
  /// Enlarge Q with an ancilla when rank(rho^R') * rank(rho^E') > dim Q, so the
  /// product purification never needs truncation. When false, the smallest
  /// lambda_k mu_l products are truncated instead.
  bool allow_ancilla = true;
};

struct CorrectionOutcome {
  LabeledState omega_rq;
  LossReport loss;
  double epsilon = 0.0;
  double achieved_f = 0.0;
  double achieved_fe = 0.0;
  double bound_f = 0.0;   // 1 - sqrt(eps)
  double bound_fe = 0.0;  // 1 - 2 sqrt(eps)
  double uhlmann_overlap = 0.0;
  double truncated_weight = 0.0;
  std::size_t ancilla_dim = 1;
  RecoveryPlan plan;

  double margin_f() const { return achieved_f - bound_f; }
  double margin_fe() const { return achieved_fe - bound_fe; }
  /// eps >= 1 makes 1 - sqrt(eps) <= 0, so the bounds carry no information.
  bool vacuous() const { return epsilon >= 1.0; }

  FlatRecord fields() const;
};

double bound_f_for(double epsilon);
double bound_fe_for(double epsilon);

/// Channel -> dilation -> tripartite state -> loss -> product purification ->
/// alignment -> recovery -> restored state on RQ.
CorrectionOutcome correct(const LabeledState& input, const QuantumChannel& ch,
                          const CorrectionOptions& options = {});

struct DataProcessingResult {
  double i_before = 0.0;
  double i_after = 0.0;
};

/// Coherent information before and after running the recovery's dilation on
/// Q, with the recovery environment absorbed into E.
DataProcessingResult data_processing_check(const LabeledState& final_state, const RecoveryPlan& plan);

}  // namespace qrecover
