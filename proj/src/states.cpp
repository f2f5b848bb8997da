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

#include "qrecover/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qrecover {

SubsystemLayout::SubsystemLayout(std::vector<std::string> l, std::vector<std::size_t> d)
    : labels(std::move(l)), dims(std::move(d)) {
  if (labels.size() != dims.size())
    throw std::invalid_argument("SubsystemLayout: label/dimension count mismatch");
  if (labels.empty()) throw std::invalid_argument("SubsystemLayout: no subsystems");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!seen.insert(labels[i]).second)
      throw std::invalid_argument("SubsystemLayout: duplicate label " + labels[i]);
    if (dims[i] == 0) throw std::invalid_argument("SubsystemLayout: zero dimension for " + labels[i]);
  }
}

std::size_t SubsystemLayout::total_dim() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t SubsystemLayout::position(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::invalid_argument("unknown subsystem label " + label);
  return static_cast<std::size_t>(it - labels.begin());
}

bool SubsystemLayout::contains(const std::string& label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

LabeledState LabeledState::pure(SubsystemLayout layout, StateVector v) {
  if (v.size() != layout.total_dim())
    throw std::invalid_argument("LabeledState::pure: vector length does not match layout");
  if (std::abs(norm(v) - 1.0) > 1e-10)
    throw std::invalid_argument("LabeledState::pure: vector is not normalized");
  return {std::move(layout), std::move(v)};
}

LabeledState LabeledState::mixed(SubsystemLayout layout, ComplexMatrix rho) {
  if (!rho.is_square() || rho.rows() != layout.total_dim())
    throw std::invalid_argument("LabeledState::mixed: matrix shape does not match layout");
  if (!rho.is_hermitian(1e-10))
    throw std::invalid_argument("LabeledState::mixed: density operator is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10)
    throw std::invalid_argument("LabeledState::mixed: density operator trace is not 1");
  if (!rho.is_psd(1e-10))
    throw std::invalid_argument("LabeledState::mixed: density operator is not PSD");
  return {std::move(layout), hermitian_part(rho)};
}

LabeledState LabeledState::basis(const std::string& label, std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("LabeledState::basis: index out of range");
  StateVector v(dim);
  v[index] = 1.0;
  return {SubsystemLayout({label}, {dim}), std::move(v)};
}

const StateVector& LabeledState::vector() const {
  if (!is_pure()) throw std::logic_error("LabeledState::vector: state is mixed");
  return std::get<StateVector>(body_);
}

ComplexMatrix LabeledState::density() const {
  if (is_pure()) {
    const auto& v = std::get<StateVector>(body_);
    return ComplexMatrix::outer(v, v);
  }
  return std::get<ComplexMatrix>(body_);
}

LabeledState make_trusted_mixed(SubsystemLayout layout, ComplexMatrix rho) {
  return {std::move(layout), std::move(rho)};
}

LabeledState make_trusted_pure(SubsystemLayout layout, StateVector v) {
  return {std::move(layout), std::move(v)};
}

std::vector<double> SchmidtForm::probabilities() const {
  std::vector<double> p(coefficients.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = coefficients[k] * coefficients[k];
  return p;
}

StateVector SchmidtForm::reconstruct() const {
  StateVector out(left_basis.rows() * right_basis.rows());
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    const auto term = kron(left_basis.column(k), right_basis.column(k));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coefficients[k] * term[i];
  }
  return out;
}

LabeledState tensor(const LabeledState& a, const LabeledState& b) {
  std::vector<std::string> labels = a.layout().labels;
  std::vector<std::size_t> dims = a.layout().dims;
  for (std::size_t i = 0; i < b.layout().size(); ++i) {
    if (a.layout().contains(b.layout().labels[i]))
      throw std::invalid_argument("tensor: label collision on " + b.layout().labels[i]);
    labels.push_back(b.layout().labels[i]);
    dims.push_back(b.layout().dims[i]);
  }
  SubsystemLayout layout(std::move(labels), std::move(dims));
  if (a.is_pure() && b.is_pure()) return make_trusted_pure(std::move(layout), kron(a.vector(), b.vector()));
  return make_trusted_mixed(std::move(layout), kron(a.density(), b.density()));
}

namespace {

// Splits each composite index into (kept index, traced index).
struct TraceMap {
  std::size_t keep_dim = 1;
  std::size_t trace_dim = 1;
  std::vector<std::size_t> full_of;  // [keep * trace_dim + trace] -> full index
};

TraceMap build_trace_map(const SubsystemLayout& layout, const std::vector<bool>& kept) {
  TraceMap m;
  for (std::size_t i = 0; i < layout.size(); ++i) (kept[i] ? m.keep_dim : m.trace_dim) *= layout.dims[i];
  const std::size_t total = layout.total_dim();
  m.full_of.resize(total);
  std::vector<std::size_t> digits(layout.size());
  for (std::size_t full = 0; full < total; ++full) {
    std::size_t rest = full;
    for (std::size_t i = layout.size(); i-- > 0;) {
      digits[i] = rest % layout.dims[i];
      rest /= layout.dims[i];
    }
    std::size_t keep = 0, trace = 0;
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (kept[i])
        keep = keep * layout.dims[i] + digits[i];
      else
        trace = trace * layout.dims[i] + digits[i];
    }
    m.full_of[keep * m.trace_dim + trace] = full;
  }
  return m;
}

}  // namespace

LabeledState partial_trace(const LabeledState& s, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  const auto& layout = s.layout();
  std::vector<bool> kept(layout.size(), false);
  for (const auto& label : keep) kept[layout.position(label)] = true;

  std::vector<std::string> labels;
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (kept[i]) {
      labels.push_back(layout.labels[i]);
      dims.push_back(layout.dims[i]);
    }

  const TraceMap map = build_trace_map(layout, kept);
  ComplexMatrix out(map.keep_dim, map.keep_dim);
  if (s.is_pure()) {
    const auto& v = s.vector();
    for (std::size_t a = 0; a < map.keep_dim; ++a)
      for (std::size_t b = a; b < map.keep_dim; ++b) {
        Complex acc = 0.0;
        for (std::size_t t = 0; t < map.trace_dim; ++t)
          acc += v[map.full_of[a * map.trace_dim + t]] * std::conj(v[map.full_of[b * map.trace_dim + t]]);
        out(a, b) = acc;
        out(b, a) = std::conj(acc);
      }
  } else {
    const ComplexMatrix rho = s.density();
    for (std::size_t a = 0; a < map.keep_dim; ++a)
      for (std::size_t b = 0; b < map.keep_dim; ++b) {
        Complex acc = 0.0;
        for (std::size_t t = 0; t < map.trace_dim; ++t)
          acc += rho(map.full_of[a * map.trace_dim + t], map.full_of[b * map.trace_dim + t]);
        out(a, b) = acc;
      }
  }
  return make_trusted_mixed(SubsystemLayout(std::move(labels), std::move(dims)), hermitian_part(out));
}

SchmidtForm schmidt(const LabeledState& s) {
  if (!s.is_pure()) throw std::invalid_argument("schmidt: state is not pure");
  if (s.layout().size() != 2) throw std::invalid_argument("schmidt: need exactly two subsystems");
  const std::size_t da = s.layout().dims[0];
  const std::size_t db = s.layout().dims[1];
  const ComplexMatrix m(da, db, s.vector());
  const auto dec = svd(m);

  std::size_t rank = 0;
  while (rank < dec.singular.size() && dec.singular[rank] > kEigenCutoff) ++rank;
  SchmidtForm out{std::vector<double>(dec.singular.begin(), dec.singular.begin() + rank),
                  ComplexMatrix(da, rank), ComplexMatrix(db, rank)};
  for (std::size_t k = 0; k < rank; ++k) {
    out.left_basis.set_column(k, dec.u.column(k));
    StateVector right = dec.v.column(k);
    for (auto& z : right) z = std::conj(z);
    out.right_basis.set_column(k, right);
  }
  return out;
}

LabeledState purify(const LabeledState& rho, const std::string& ancilla_label,
                    std::size_t ancilla_dim) {
  const auto dec = herm_eig(rho.density());
  const std::size_t n = dec.eigenvalues.size();
  std::vector<std::size_t> support;  // descending eigenvalue order
  for (std::size_t i = n; i-- > 0;)
    if (dec.eigenvalues[i] > kEigenCutoff) support.push_back(i);
  if (ancilla_dim < support.size())
    throw std::invalid_argument("purify: ancilla dimension below rank of the state");

  std::vector<std::string> labels = rho.layout().labels;
  std::vector<std::size_t> dims = rho.layout().dims;
  if (rho.layout().contains(ancilla_label))
    throw std::invalid_argument("purify: ancilla label collides with " + ancilla_label);
  labels.push_back(ancilla_label);
  dims.push_back(ancilla_dim);

  StateVector v(n * ancilla_dim);
  for (std::size_t j = 0; j < support.size(); ++j) {
    const std::size_t i = support[j];
    const double amp = std::sqrt(dec.eigenvalues[i]);
    for (std::size_t r = 0; r < n; ++r) v[r * ancilla_dim + j] = amp * dec.eigenvectors(r, i);
  }
  const double nr = norm(v);
  for (auto& z : v) z /= nr;
  return make_trusted_pure(SubsystemLayout(std::move(labels), std::move(dims)), std::move(v));
}

LabeledState entangled_input(const std::vector<double>& lambda, std::size_t dim_q) {
  if (lambda.empty()) throw std::invalid_argument("entangled_input: empty distribution");
  if (lambda.size() > dim_q)
    throw std::invalid_argument("entangled_input: more Schmidt coefficients than dim Q");
  double total = 0.0;
  for (double l : lambda) {
    if (!(l >= 0.0)) throw std::invalid_argument("entangled_input: negative probability");
    total += l;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("entangled_input: probabilities do not sum to 1");

  const std::size_t dim_r = lambda.size();
  StateVector v(dim_r * dim_q);
  for (std::size_t k = 0; k < dim_r; ++k) v[k * dim_q + k] = std::sqrt(lambda[k]);
  return make_trusted_pure(SubsystemLayout({"R", "Q"}, {dim_r, dim_q}), std::move(v));
}

StateVector apply_local(std::span<const Complex> v, std::vector<std::size_t>& dims,
                        std::size_t pos, const ComplexMatrix& op) {
  if (pos >= dims.size()) throw std::invalid_argument("apply_local: position out of range");
  if (op.cols() != dims[pos]) throw std::invalid_argument("apply_local: operator dimension mismatch");
  std::size_t left = 1, right = 1;
  for (std::size_t i = 0; i < pos; ++i) left *= dims[i];
  for (std::size_t i = pos + 1; i < dims.size(); ++i) right *= dims[i];
  const std::size_t din = op.cols();
  const std::size_t dout = op.rows();
  if (v.size() != left * din * right) throw std::invalid_argument("apply_local: vector length mismatch");

  StateVector out(left * dout * right);
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t o = 0; o < dout; ++o)
      for (std::size_t i = 0; i < din; ++i) {
        const Complex c = op(o, i);
        if (c == Complex{}) continue;
        const Complex* src = v.data() + (l * din + i) * right;
        Complex* dst = out.data() + (l * dout + o) * right;
        for (std::size_t r = 0; r < right; ++r) dst[r] += c * src[r];
      }
  dims[pos] = dout;
  return out;
}

LabeledState merge_adjacent(const LabeledState& s, const std::string& first,
                            const std::string& second, const std::string& merged) {
  const auto& layout = s.layout();
  const std::size_t p = layout.position(first);
  if (p + 1 >= layout.size() || layout.labels[p + 1] != second)
    throw std::invalid_argument("merge_adjacent: " + first + " and " + second + " are not adjacent");
  std::vector<std::string> labels;
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (i == p + 1) continue;
    labels.push_back(i == p ? merged : layout.labels[i]);
    dims.push_back(i == p ? layout.dims[p] * layout.dims[p + 1] : layout.dims[i]);
  }
  SubsystemLayout out(std::move(labels), std::move(dims));
  if (s.is_pure()) return make_trusted_pure(std::move(out), s.vector());
  return make_trusted_mixed(std::move(out), s.density());
}

double overlap(const LabeledState& a, const LabeledState& b) {
  if (a.layout() != b.layout()) throw std::invalid_argument("overlap: layout mismatch");
  return std::abs(inner(a.vector(), b.vector()));
}

}  // namespace qrecover
