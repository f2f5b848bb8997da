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

#include "qrecover/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace qrecover {

namespace {

struct Spectrum {
  std::vector<double> values;  // descending, above cutoff
  ComplexMatrix vectors{1, 1};
};

Spectrum support_spectrum(const ComplexMatrix& rho) {
  const auto dec = herm_eig(rho);
  const std::size_t n = dec.eigenvalues.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = n; i-- > 0;)
    if (dec.eigenvalues[i] > kEigenCutoff) idx.push_back(i);
  if (idx.empty()) throw std::invalid_argument("density operator has no support above cutoff");
  Spectrum s{{}, ComplexMatrix(n, idx.size())};
  for (std::size_t j = 0; j < idx.size(); ++j) {
    s.values.push_back(dec.eigenvalues[idx[j]]);
    s.vectors.set_column(j, dec.eigenvectors.column(idx[j]));
  }
  return s;
}

// Tensor index of (r, q, e) in the (R, Q, E) layout.
std::size_t rqe(std::size_t r, std::size_t q, std::size_t e, std::size_t dq, std::size_t de) {
  return (r * dq + q) * de + e;
}

}  // namespace

double ProductStructure::retained_weight() const {
  double w = 0.0;
  for (const auto& [k, l] : pairs) w += lambda[k] * mu[l];
  return w;
}

ProductPurification product_purification(const LabeledState& rho_r, const LabeledState& rho_e,
                                          std::size_t dim_q) {
  if (dim_q == 0) throw std::invalid_argument("product_purification: dim Q must be positive");
  if (rho_r.layout().labels != std::vector<std::string>{"R"} ||
      rho_e.layout().labels != std::vector<std::string>{"E"})
    throw std::invalid_argument("product_purification: expected states labeled R and E");

  const Spectrum r = support_spectrum(rho_r.density());
  const Spectrum e = support_spectrum(rho_e.density());
  const std::size_t dr = rho_r.dim();
  const std::size_t de = rho_e.dim();

  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t k = 0; k < r.values.size(); ++k)
    for (std::size_t l = 0; l < e.values.size(); ++l) all.emplace_back(k, l);

  double dropped = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> kept = all;
  if (all.size() > dim_q) {
    // Keep the dim_q largest products; ties resolve in lexicographic order.
    std::stable_sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
      return r.values[a.first] * e.values[a.second] > r.values[b.first] * e.values[b.second];
    });
    for (std::size_t j = dim_q; j < kept.size(); ++j)
      dropped += r.values[kept[j].first] * e.values[kept[j].second];
    kept.resize(dim_q);
    std::sort(kept.begin(), kept.end());
  }

  ProductStructure s;
  s.lambda = r.values;
  s.mu = e.values;
  s.r_basis = r.vectors;
  s.e_basis = e.vectors;
  s.pairs = kept;
  s.phi = ComplexMatrix(dim_q, kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) s.phi(j, j) = 1.0;
  s.truncated_weight = dropped;

  StateVector v(dr * dim_q * de);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const auto [k, l] = kept[j];
    const double amp = std::sqrt(s.lambda[k] * s.mu[l]);
    for (std::size_t a = 0; a < dr; ++a) {
      const Complex ra = s.r_basis(a, k);
      if (ra == Complex{}) continue;
      for (std::size_t b = 0; b < de; ++b) v[rqe(a, j, b, dim_q, de)] += amp * ra * s.e_basis(b, l);
    }
  }
  const double nr = norm(v);
  for (auto& z : v) z /= nr;

  return {make_trusted_pure(SubsystemLayout({"R", "Q", "E"}, {dr, dim_q, de}), std::move(v)),
          std::move(s)};
}

AlignedPurification optimal_purification(const LabeledState& target, const LabeledState& seed) {
  if (target.layout() != seed.layout())
    throw std::invalid_argument("optimal_purification: layout mismatch");
  if (target.layout().labels != std::vector<std::string>{"R", "Q", "E"})
    throw std::invalid_argument("optimal_purification: expected layout (R, Q, E)");
  const std::size_t dr = target.layout().dims[0];
  const std::size_t dq = target.layout().dims[1];
  const std::size_t de = target.layout().dims[2];
  const auto& t = target.vector();
  const auto& s = seed.vector();

  // <t|(1 (x) V (x) 1)|s> = Tr(V M) with M[q', q] = sum_re s[r q' e] conj(t[r q e]).
  ComplexMatrix m(dq, dq);
  for (std::size_t a = 0; a < dr; ++a)
    for (std::size_t qp = 0; qp < dq; ++qp)
      for (std::size_t q = 0; q < dq; ++q) {
        Complex acc = 0.0;
        for (std::size_t b = 0; b < de; ++b) acc += s[rqe(a, qp, b, dq, de)] * std::conj(t[rqe(a, q, b, dq, de)]);
        m(qp, q) += acc;
      }

  const ComplexMatrix v = polar_unitary(m).adjoint();
  std::vector<std::size_t> dims = seed.layout().dims;
  StateVector aligned = apply_local(s, dims, 1, v);
  const double ov = std::abs(inner(t, aligned));
  return {make_trusted_pure(seed.layout(), std::move(aligned)), ov, v};
}

ProductStructure rotate_phi(ProductStructure s, const ComplexMatrix& v) {
  s.phi = v * s.phi;
  return s;
}

double RecoveryPlan::orthogonality_residual() const {
  double worst = 0.0;
  for (std::size_t a = 0; a < projectors.size(); ++a)
    for (std::size_t b = 0; b < projectors.size(); ++b) {
      ComplexMatrix prod = projectors[a] * projectors[b];
      if (a == b) prod -= projectors[a];
      worst = std::max(worst, prod.max_abs());
    }
  return worst;
}

RecoveryPlan build_recovery(const ProductStructure& structure, const ComplexMatrix& target_q_basis,
                            std::size_t ancilla_dim) {
  const std::size_t n = structure.dim_q();
  if (target_q_basis.rows() != n)
    throw std::invalid_argument("build_recovery: target basis lives on a different space");
  if (target_q_basis.cols() != structure.lambda.size())
    throw std::invalid_argument("build_recovery: target basis size differs from count(lambda)");
  if (ancilla_dim == 0 || n % ancilla_dim != 0)
    throw std::invalid_argument("build_recovery: ancilla dimension does not divide workspace");
  const ComplexMatrix gram_phi = structure.phi.adjoint() * structure.phi;
  if ((gram_phi - ComplexMatrix::identity(gram_phi.rows())).max_abs() > 1e-9)
    throw std::invalid_argument("build_recovery: phi family is not orthonormal");
  const ComplexMatrix gram_t = target_q_basis.adjoint() * target_q_basis;
  if ((gram_t - ComplexMatrix::identity(gram_t.rows())).max_abs() > 1e-9)
    throw std::invalid_argument("build_recovery: target basis is not orthonormal");

  // Group retained pairs by environment outcome l.
  std::map<std::size_t, std::vector<std::size_t>> by_outcome;
  for (std::size_t j = 0; j < structure.pairs.size(); ++j) by_outcome[structure.pairs[j].second].push_back(j);

  RecoveryPlan plan;
  plan.ancilla_dim = ancilla_dim;
  std::vector<ComplexMatrix> kraus;
  ComplexMatrix covered(n, n);
  for (const auto& [l, columns] : by_outcome) {
    ComplexMatrix domain(n, columns.size());
    ComplexMatrix codomain(n, columns.size());
    ComplexMatrix pi(n, n);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const StateVector phi = structure.phi.column(columns[c]);
      domain.set_column(c, phi);
      codomain.set_column(c, target_q_basis.column(structure.pairs[columns[c]].first));
      pi += ComplexMatrix::outer(phi, phi);
    }
    // U_l maps phi_kl -> k^Q and the completion of one set onto the other's.
    const ComplexMatrix u = complete_to_unitary(codomain) * complete_to_unitary(domain).adjoint();
    covered += pi;
    kraus.push_back(u * pi);
    plan.outcomes.push_back(l);
    plan.projectors.push_back(std::move(pi));
    plan.unitaries.push_back(u);
  }

  ComplexMatrix residual = ComplexMatrix::identity(n) - covered;
  if (residual.trace().real() > 0.5) {
    kraus.push_back(residual);
    plan.residual = std::move(residual);
  }
  plan.as_channel_ = QuantumChannel::from_kraus(kraus);
  plan.system_channel_ = ancilla_dim == 1 ? *plan.as_channel_ : absorb_ancilla(*plan.as_channel_, ancilla_dim);
  return plan;
}

QuantumChannel absorb_ancilla(const QuantumChannel& workspace_channel, std::size_t ancilla_dim) {
  const std::size_t n = workspace_channel.dim_in();
  if (ancilla_dim == 0 || n % ancilla_dim != 0)
    throw std::invalid_argument("absorb_ancilla: ancilla dimension does not divide workspace");
  const std::size_t dq = n / ancilla_dim;
  const std::size_t nout = workspace_channel.dim_out() / ancilla_dim;
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : workspace_channel.kraus())
    for (std::size_t a = 0; a < ancilla_dim; ++a) {
      ComplexMatrix piece(nout, dq);
      for (std::size_t o = 0; o < nout; ++o)
        for (std::size_t i = 0; i < dq; ++i) piece(o, i) = k(o * ancilla_dim + a, i * ancilla_dim);
      if (piece.max_abs() > 0.0) kraus.push_back(std::move(piece));
    }
  return QuantumChannel::from_kraus(std::move(kraus));
}

double bound_f_for(double epsilon) { return 1.0 - std::sqrt(std::max(epsilon, 0.0)); }
double bound_fe_for(double epsilon) { return 1.0 - 2.0 * std::sqrt(std::max(epsilon, 0.0)); }

FlatRecord CorrectionOutcome::fields() const {
  return {{"epsilon", epsilon},         {"achieved_f", achieved_f},
          {"bound_f", bound_f},         {"achieved_fe", achieved_fe},
          {"bound_fe", bound_fe},       {"uhlmann_overlap", uhlmann_overlap},
          {"truncated_weight", truncated_weight}, {"margin_f", margin_f()}};
}

namespace {

// |Psi^{RQE}> (x) |0^A> with A folded into Q.
StateVector embed_with_ancilla(const StateVector& v, std::size_t dr, std::size_t dq, std::size_t de,
                               std::size_t da) {
  StateVector out(dr * dq * da * de);
  for (std::size_t a = 0; a < dr; ++a)
    for (std::size_t q = 0; q < dq; ++q)
      for (std::size_t b = 0; b < de; ++b) out[rqe(a, q * da, b, dq * da, de)] = v[rqe(a, q, b, dq, de)];
  return out;
}

}  // namespace

CorrectionOutcome correct(const LabeledState& input, const QuantumChannel& ch,
                          const CorrectionOptions& options) {
  if (!input.is_pure()) throw std::invalid_argument("correct: input must be pure");
  if (input.layout().labels != std::vector<std::string>{"R", "Q"})
    throw std::invalid_argument("correct: input must live on (R, Q)");
  const std::size_t dr = input.layout().dims[0];
  const std::size_t dq = input.layout().dims[1];
  if (ch.dim_in() != dq || ch.dim_out() != dq)
    throw std::invalid_argument("correct: channel dimension does not match Q");

  const Dilation dil = dilate(ch);
  const LabeledState final_state = evolve_tripartite(input, dil);
  const LossReport loss = coherent_information(final_state);
  if (loss.loss < -1e-9)
    throw std::logic_error("correct: negative loss of coherent information " + std::to_string(loss.loss));

  const LabeledState rho_r = partial_trace(final_state, {"R"});
  const LabeledState rho_e = partial_trace(final_state, {"E"});
  const std::size_t de = dil.env_dim;

  std::size_t da = 1;
  if (options.allow_ancilla) {
    const std::size_t needed = support_spectrum(rho_r.density()).values.size() *
                               support_spectrum(rho_e.density()).values.size();
    da = (needed + dq - 1) / dq;
  }
  const std::size_t dw = dq * da;

  const ProductPurification seed = product_purification(rho_r, rho_e, dw);
  const LabeledState target = make_trusted_pure(SubsystemLayout({"R", "Q", "E"}, {dr, dw, de}),
                                                embed_with_ancilla(final_state.vector(), dr, dq, de, da));
  const AlignedPurification aligned = optimal_purification(target, seed.state);
  const ProductStructure structure = rotate_phi(seed.structure, aligned.v);

  // |k^Q> = (<k^R| (x) 1)|Psi^RQ> / sqrt(lambda_k): the Schmidt partner of each
  // eigenvector of rho^R, embedded as |k^Q>|0^A>.
  const auto& psi = input.vector();
  ComplexMatrix targets(dw, structure.lambda.size());
  for (std::size_t k = 0; k < structure.lambda.size(); ++k) {
    StateVector partner(dq);
    for (std::size_t a = 0; a < dr; ++a) {
      const Complex c = std::conj(structure.r_basis(a, k));
      for (std::size_t q = 0; q < dq; ++q) partner[q] += c * psi[a * dq + q];
    }
    const double nr = norm(partner);
    for (std::size_t q = 0; q < dq; ++q) targets(q * da, k) = partner[q] / nr;
  }

  RecoveryPlan plan = build_recovery(structure, targets, da);
  const LabeledState restored = apply_on(plan.system_channel(), final_state, "Q");
  LabeledState omega = partial_trace(restored, {"R", "Q"});

  const ComplexMatrix omega_m = omega.density();
  const double fe = std::clamp(inner(psi, omega_m * std::span<const Complex>(psi)).real(), 0.0, 1.0);
  const double f = fidelity(omega_m, input.density());

  return CorrectionOutcome{std::move(omega),
                           loss,
                           loss.loss,
                           f,
                           fe,
                           bound_f_for(loss.loss),
                           bound_fe_for(loss.loss),
                           aligned.overlap,
                           structure.truncated_weight,
                           da,
                           std::move(plan)};
}

DataProcessingResult data_processing_check(const LabeledState& final_state, const RecoveryPlan& plan) {
  const LossReport before = coherent_information(final_state);
  const QuantumChannel& rec = plan.system_channel();
  const std::size_t pos = final_state.layout().position("Q");
  if (final_state.layout().dims[pos] != rec.dim_in())
    throw std::invalid_argument("data_processing_check: recovery does not act on Q");
  const Dilation dil = dilate(rec);

  // u (|i> (x) |0^F>) = sum_m K_m|i> (x) |m^F>, so applying the dilation to the
  // fresh environment F is the Kraus-branch sum below.
  const std::size_t df = dil.env_dim;
  const auto with_f = tensor(final_state, make_trusted_pure(SubsystemLayout({"F"}, {df}), dil.env_init));
  StateVector out(with_f.dim());
  for (std::size_t m = 0; m < df; ++m) {
    std::vector<std::size_t> dims = final_state.layout().dims;
    const StateVector branch = apply_local(final_state.vector(), dims, pos, rec.kraus()[m]);
    for (std::size_t i = 0; i < branch.size(); ++i) out[i * df + m] = branch[i];
  }
  const auto evolved = make_trusted_pure(with_f.layout(), std::move(out));
  const auto merged = merge_adjacent(evolved, "E", "F", "E");
  const LossReport after = coherent_information(merged);
  return {before.coherent_info, after.coherent_info};
}

}  // namespace qrecover
