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

#include "qrecover/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrecover {

namespace {

// Support outside which relative entropy is declared infinite.
constexpr double kSupportDeficit = 1e-10;

void require_density(const ComplexMatrix& rho, const char* where) {
  if (!rho.is_square()) throw std::invalid_argument(std::string(where) + ": non-square operator");
  const double scale = std::max(1.0, rho.max_abs());
  if (!rho.is_hermitian(1e-10 * scale))
    throw std::invalid_argument(std::string(where) + ": operator is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-8)
    throw std::invalid_argument(std::string(where) + ": operator does not have unit trace");
}

void require_same_dims(const ComplexMatrix& a, const ComplexMatrix& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

double xlog2x(double w) { return w > kEigenCutoff ? w * std::log2(w) : 0.0; }

}  // namespace

double von_neumann_entropy(const ComplexMatrix& rho) {
  require_density(rho, "von_neumann_entropy");
  double s = 0.0;
  for (double w : psd_eigenvalues(rho)) s -= xlog2x(w);
  return std::max(s, 0.0);
}

FlatRecord LossReport::fields() const {
  return {{"s_q", s_q},         {"s_q_out", s_q_out},   {"s_rq_out", s_rq_out},
          {"s_r_out", s_r_out}, {"s_e_out", s_e_out},   {"s_re_out", s_re_out},
          {"coherent_info", coherent_info}, {"loss", loss}, {"loss_via_relent", loss_via_relent}};
}

LossReport coherent_information(const LabeledState& final_state) {
  if (!final_state.is_pure()) throw std::invalid_argument("coherent_information: state is not pure");
  for (const char* label : {"R", "Q", "E"})
    if (!final_state.layout().contains(label))
      throw std::invalid_argument(std::string("coherent_information: missing subsystem ") + label);

  const auto rho_r = partial_trace(final_state, {"R"}).density();
  const auto rho_e = partial_trace(final_state, {"E"}).density();
  const auto rho_q = partial_trace(final_state, {"Q"}).density();
  const auto rho_rq = partial_trace(final_state, {"R", "Q"}).density();
  const auto rho_re = partial_trace(final_state, {"R", "E"}).density();

  LossReport r;
  r.s_r_out = von_neumann_entropy(rho_r);
  r.s_q = r.s_r_out;
  r.s_q_out = von_neumann_entropy(rho_q);
  r.s_rq_out = von_neumann_entropy(rho_rq);
  r.s_e_out = von_neumann_entropy(rho_e);
  r.s_re_out = von_neumann_entropy(rho_re);
  r.coherent_info = r.s_q_out - r.s_rq_out;
  r.loss = r.s_q - r.coherent_info;
  r.loss_via_relent = relative_entropy(rho_re, kron(rho_r, rho_e));
  return r;
}

double relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_same_dims(rho, sigma, "relative_entropy");
  require_density(rho, "relative_entropy");
  require_density(sigma, "relative_entropy");

  const auto sig = herm_eig(sigma);
  if (sig.eigenvalues.front() < kNegativeClamp)
    throw std::domain_error("relative_entropy: sigma has a negative eigenvalue");

  // -Tr rho log sigma, restricted to supp sigma; the weight of rho left
  // outside the support decides finiteness.
  double cross = 0.0;
  double captured = 0.0;
  const std::size_t n = sigma.rows();
  for (std::size_t j = 0; j < n; ++j) {
    const double s = sig.eigenvalues[j];
    if (s <= kEigenCutoff) continue;
    const StateVector v = sig.eigenvectors.column(j);
    const double weight = inner(v, rho * std::span<const Complex>(v)).real();
    captured += weight;
    cross -= weight * std::log2(s);
  }
  if (rho.trace().real() - captured > kSupportDeficit) return kInfinity;

  double neg_entropy = 0.0;
  for (double w : psd_eigenvalues(rho)) neg_entropy += xlog2x(w);
  return neg_entropy + cross;
}

double classical_relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size() || p.empty())
    throw std::invalid_argument("classical_relative_entropy: distributions differ in length");
  auto check = [](std::span<const double> d) {
    double total = 0.0;
    for (double x : d) {
      if (!(x >= -1e-12)) throw std::invalid_argument("classical_relative_entropy: negative probability");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("classical_relative_entropy: probabilities do not sum to 1");
  };
  check(p);
  check(q);

  double d = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    if (q[k] <= 0.0) return kInfinity;
    d += p[k] * std::log2(p[k] / q[k]);
  }
  return d;
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_same_dims(rho, sigma, "trace_distance");
  const auto w = herm_eig(hermitian_part(rho - sigma)).eigenvalues;
  double s = 0.0;
  for (double x : w) s += std::abs(x);
  return std::clamp(0.5 * s, 0.0, 1.0);
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_same_dims(rho, sigma, "fidelity");
  require_density(rho, "fidelity");
  require_density(sigma, "fidelity");
  return std::clamp(trace_norm(psd_sqrt(rho) * psd_sqrt(sigma)), 0.0, 1.0);
}

HelstromSplit helstrom_split(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_same_dims(rho, sigma, "helstrom_split");
  const auto dec = herm_eig(hermitian_part(rho - sigma));
  const std::size_t n = rho.rows();

  HelstromSplit out;
  out.pi = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (dec.eigenvalues[j] <= kEigenCutoff) continue;
    const StateVector v = dec.eigenvectors.column(j);
    out.pi += ComplexMatrix::outer(v, v);
    out.a_trace += dec.eigenvalues[j];
  }
  const double p1 = std::clamp((out.pi * rho).trace().real(), 0.0, 1.0);
  const double q1 = std::clamp((out.pi * sigma).trace().real(), 0.0, 1.0);
  out.p = {p1, 1.0 - p1};
  out.q = {q1, 1.0 - q1};
  return out;
}

std::vector<double> measurement_distribution(const ComplexMatrix& rho, const ComplexMatrix& basis) {
  if (basis.rows() != rho.rows()) throw std::invalid_argument("measurement_distribution: dimension mismatch");
  std::vector<double> p(basis.cols());
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    const StateVector v = basis.column(k);
    p[k] = std::max(0.0, inner(v, rho * std::span<const Complex>(v)).real());
  }
  return p;
}

double DistanceReport::pinsker_margin() const {
  if (std::isinf(relent)) return kInfinity;
  return relent - (2.0 / std::numbers::ln2) * trace_dist * trace_dist;
}

double DistanceReport::fuchs_margin() const { return fidelity - (1.0 - trace_dist); }

double DistanceReport::tight_chain_margin() const {
  if (std::isinf(relent)) return kInfinity;
  return fidelity - (1.0 - std::sqrt(std::max(0.0, 0.5 * std::numbers::ln2 * relent)));
}

double DistanceReport::chain_margin() const {
  if (std::isinf(relent)) return kInfinity;
  return fidelity - (1.0 - std::sqrt(std::max(0.0, relent)));
}

bool DistanceReport::consistent(double tol) const {
  return pinsker_margin() >= -tol && fuchs_margin() >= -tol && tight_chain_margin() >= -tol &&
         chain_margin() >= -tol;
}

FlatRecord DistanceReport::fields() const {
  return {{"relent", relent}, {"trace_dist", trace_dist}, {"fidelity", fidelity}};
}

DistanceReport distance_report(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  return {relative_entropy(rho, sigma), trace_distance(rho, sigma), fidelity(rho, sigma)};
}

MonotonicityReport monotonicity_check(const QuantumChannel& ch, const ComplexMatrix& rho,
                                      const ComplexMatrix& sigma) {
  if (rho.rows() != ch.dim_in() || sigma.rows() != ch.dim_in())
    throw std::invalid_argument("monotonicity_check: dimension mismatch");
  MonotonicityReport r;
  r.before = distance_report(rho, sigma);
  r.after = distance_report(apply(ch, rho), apply(ch, sigma));
  if (!std::isinf(r.before.relent))
    r.relent_increase = std::isinf(r.after.relent) ? kInfinity
                                                   : std::max(0.0, r.after.relent - r.before.relent);
  r.trace_dist_increase = std::max(0.0, r.after.trace_dist - r.before.trace_dist);
  r.fidelity_decrease = std::max(0.0, r.before.fidelity - r.after.fidelity);
  return r;
}

}  // namespace qrecover
