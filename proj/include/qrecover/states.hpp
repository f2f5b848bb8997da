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

// Multipartite states over labeled subsystems.
//
// Index convention: the composite basis index is row-major over the layout
// order, i.e. the leftmost label varies slowest. For layout (R, Q, E) the
// amplitude of |r>|q>|e> sits at ((r * dQ) + q) * dE + e.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qrecover/matkernel.hpp"

namespace qrecover {

struct SubsystemLayout {
  std::vector<std::string> labels;
  std::vector<std::size_t> dims;

  SubsystemLayout() = default;
  SubsystemLayout(std::vector<std::string> labels, std::vector<std::size_t> dims);

  std::size_t size() const { return labels.size(); }
  std::size_t total_dim() const;
  /// Position of label; throws std::invalid_argument if absent.
  std::size_t position(const std::string& label) const;
  std::size_t dim(const std::string& label) const { return dims[position(label)]; }
  bool contains(const std::string& label) const;

  friend bool operator==(const SubsystemLayout&, const SubsystemLayout&) = default;
};

class LabeledState {
 public:
  /// Validates ||v|| = 1 within 1e-10.
  static LabeledState pure(SubsystemLayout layout, StateVector v);
  /// Validates Hermitian, PSD and unit trace within 1e-10.
  static LabeledState mixed(SubsystemLayout layout, ComplexMatrix rho);
  /// Single-subsystem basis state |index>.
  static LabeledState basis(const std::string& label, std::size_t dim, std::size_t index = 0);

  const SubsystemLayout& layout() const { return layout_; }
  std::size_t dim() const { return layout_.total_dim(); }
  bool is_pure() const { return std::holds_alternative<StateVector>(body_); }

  /// Amplitudes; throws std::logic_error for mixed states.
  const StateVector& vector() const;
  /// Density operator (|v><v| for pure states).
  ComplexMatrix density() const;

 private:
  LabeledState(SubsystemLayout layout, std::variant<StateVector, ComplexMatrix> body)
      : layout_(std::move(layout)), body_(std::move(body)) {}

  SubsystemLayout layout_;
  std::variant<StateVector, ComplexMatrix> body_;

  friend LabeledState make_trusted_mixed(SubsystemLayout layout, ComplexMatrix rho);
  friend LabeledState make_trusted_pure(SubsystemLayout layout, StateVector v);
};

/// Skips validation; for results that are correct by construction.
LabeledState make_trusted_mixed(SubsystemLayout layout, ComplexMatrix rho);
LabeledState make_trusted_pure(SubsystemLayout layout, StateVector v);

struct SchmidtForm {
  std::vector<double> coefficients;  // sqrt(lambda_k), descending
  ComplexMatrix left_basis;          // columns |k^A>
  ComplexMatrix right_basis;         // columns |k^B>

  std::vector<double> probabilities() const;
  StateVector reconstruct() const;
};

LabeledState tensor(const LabeledState& a, const LabeledState& b);

LabeledState partial_trace(const LabeledState& s, const std::vector<std::string>& keep);

SchmidtForm schmidt(const LabeledState& s);

/// Canonical purification sum_i sqrt(p_i) |i> (x) |e_i> with eigenpairs of rho.
LabeledState purify(const LabeledState& rho, const std::string& ancilla_label,
                    std::size_t ancilla_dim);

/// sum_k sqrt(lambda_k) |k^R> (x) |k^Q> on layout (R, Q) with dim R = lambda.size().
LabeledState entangled_input(const std::vector<double>& lambda, std::size_t dim_q);

/// Applies op (d_out x d_in) to the subsystem at position pos of a pure
/// state with the given dims; dims[pos] is updated to d_out.
StateVector apply_local(std::span<const Complex> v, std::vector<std::size_t>& dims,
                        std::size_t pos, const ComplexMatrix& op);

/// Merges two adjacent subsystems into one labeled `merged`.
LabeledState merge_adjacent(const LabeledState& s, const std::string& first,
                            const std::string& second, const std::string& merged);

/// |<a|b>| for pure states on identical layouts.
double overlap(const LabeledState& a, const LabeledState& b);

}  // namespace qrecover
