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

#include "qrecover/channels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qrecover {

CompletenessError::CompletenessError(double residual)
    : std::invalid_argument("Kraus completeness violated, residual " + std::to_string(residual)),
      residual_(residual) {}

double completeness_residual(const std::vector<ComplexMatrix>& kraus) {
  ComplexMatrix sum(kraus.front().cols(), kraus.front().cols());
  for (const auto& k : kraus) sum += k.adjoint() * k;
  return (sum - ComplexMatrix::identity(sum.rows())).max_abs();
}

QuantumChannel QuantumChannel::from_kraus(std::vector<ComplexMatrix> kraus, double tol) {
  if (kraus.empty()) throw std::invalid_argument("from_kraus: empty Kraus family");
  for (const auto& k : kraus)
    if (k.rows() != kraus.front().rows() || k.cols() != kraus.front().cols())
      throw std::invalid_argument("from_kraus: inconsistent Kraus operator shapes");
  const double residual = qrecover::completeness_residual(kraus);
  if (residual > tol) throw CompletenessError(residual);
  return QuantumChannel(std::move(kraus));
}

double QuantumChannel::completeness_residual() const { return qrecover::completeness_residual(kraus_); }

ComplexMatrix apply(const QuantumChannel& ch, const ComplexMatrix& rho) {
  if (rho.rows() != ch.dim_in() || !rho.is_square())
    throw std::invalid_argument("apply: density dimension does not match channel input");
  ComplexMatrix out(ch.dim_out(), ch.dim_out());
  for (const auto& k : ch.kraus()) out += k * rho * k.adjoint();
  return hermitian_part(out);
}

ComplexMatrix Dilation::apply(const ComplexMatrix& rho) const {
  const auto env0 = ComplexMatrix::outer(env_init, env_init);
  const ComplexMatrix joint = u * kron(rho, env0) * u.adjoint();
  const auto state = make_trusted_mixed(SubsystemLayout({"Q", "E"}, {dim_q, env_dim}), joint);
  return partial_trace(state, {"Q"}).density();
}

Dilation dilate(const QuantumChannel& ch) {
  if (ch.dim_in() != ch.dim_out())
    throw std::invalid_argument("dilate: channel must map a system to itself");
  const std::size_t d = ch.dim_in();
  const std::size_t e = ch.kraus().size();
  const std::size_t n = d * e;

  // Isometry columns: |i> -> sum_l (K_l |i>) (x) |l^E>.
  ComplexMatrix iso(n, d);
  for (std::size_t l = 0; l < e; ++l)
    for (std::size_t o = 0; o < d; ++o)
      for (std::size_t i = 0; i < d; ++i) iso(o * e + l, i) = ch.kraus()[l](o, i);
  const ComplexMatrix full = complete_to_unitary(iso);

  // Place isometry column i at |i>|0^E>, completion columns everywhere else.
  Dilation out{d, e, ComplexMatrix(n, n), StateVector(e)};
  out.env_init[0] = 1.0;
  std::size_t next_extra = d;
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = (col % e == 0) ? col / e : next_extra++;
    out.u.set_column(col, full.column(src));
  }
  return out;
}

LabeledState apply_on(const QuantumChannel& ch, const LabeledState& s, const std::string& label) {
  const std::size_t pos = s.layout().position(label);
  if (s.layout().dims[pos] != ch.dim_in())
    throw std::invalid_argument("apply_on: subsystem dimension does not match channel input");
  std::vector<std::size_t> out_dims = s.layout().dims;
  out_dims[pos] = ch.dim_out();
  SubsystemLayout layout(s.layout().labels, out_dims);

  const std::size_t n = layout.total_dim();
  ComplexMatrix rho(n, n);
  if (s.is_pure()) {
    for (const auto& k : ch.kraus()) {
      std::vector<std::size_t> dims = s.layout().dims;
      const StateVector branch = apply_local(s.vector(), dims, pos, k);
      rho += ComplexMatrix::outer(branch, branch);
    }
  } else {
    std::size_t left = 1, right = 1;
    for (std::size_t i = 0; i < pos; ++i) left *= s.layout().dims[i];
    for (std::size_t i = pos + 1; i < s.layout().size(); ++i) right *= s.layout().dims[i];
    const ComplexMatrix input = s.density();
    for (const auto& k : ch.kraus()) {
      const ComplexMatrix lifted = kron(kron(ComplexMatrix::identity(left), k), ComplexMatrix::identity(right));
      rho += lifted * input * lifted.adjoint();
    }
  }
  return make_trusted_mixed(std::move(layout), hermitian_part(rho));
}

LabeledState evolve_tripartite(const LabeledState& input, const Dilation& d) {
  if (!input.is_pure()) throw std::invalid_argument("evolve_tripartite: input must be pure");
  const auto& layout = input.layout();
  if (layout.labels.back() != "Q")
    throw std::invalid_argument("evolve_tripartite: last subsystem must be Q");
  if (layout.dims.back() != d.dim_q)
    throw std::invalid_argument("evolve_tripartite: Q dimension does not match dilation");
  if (layout.contains("E")) throw std::invalid_argument("evolve_tripartite: input already has E");

  const auto joint = tensor(input, make_trusted_pure(SubsystemLayout({"E"}, {d.env_dim}), d.env_init));
  // Treat (Q, E) as one block, which is contiguous and last.
  std::vector<std::size_t> dims(layout.dims.begin(), layout.dims.end() - 1);
  dims.push_back(d.dim_q * d.env_dim);
  StateVector out = apply_local(joint.vector(), dims, dims.size() - 1, d.u);
  return make_trusted_pure(joint.layout(), std::move(out));
}

QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before) {
  if (after.dim_in() != before.dim_out())
    throw std::invalid_argument("compose: inner dimensions do not match");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(after.kraus().size() * before.kraus().size());
  for (const auto& a : after.kraus())
    for (const auto& b : before.kraus()) kraus.push_back(a * b);
  return QuantumChannel::from_kraus(std::move(kraus), 1e-8);
}

namespace {

void require_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

void require_qubit(std::size_t dim, const std::string& family) {
  if (dim != 2) throw std::invalid_argument(family + " channel is defined for qubits only");
}

std::string canonical_family(const std::string& family) {
  if (family == "phase-flip") return "phaseflip";
  if (family == "amplitude-damping") return "ampdamp";
  return family;
}

// Weyl operator X^a Z^b on a qudit.
ComplexMatrix weyl(std::size_t d, std::size_t a, std::size_t b) {
  ComplexMatrix w(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(b * j) / static_cast<double>(d);
    w((j + a) % d, j) = std::polar(1.0, angle);
  }
  return w;
}

}  // namespace

QuantumChannel random_channel(std::size_t dim, std::size_t env_dim, Rng& rng) {
  if (dim == 0 || env_dim == 0) throw std::invalid_argument("random_channel: zero dimension");
  const ComplexMatrix v = random_isometry(dim * env_dim, dim, rng);
  std::vector<ComplexMatrix> kraus(env_dim, ComplexMatrix(dim, dim));
  for (std::size_t o = 0; o < dim; ++o)
    for (std::size_t l = 0; l < env_dim; ++l)
      for (std::size_t i = 0; i < dim; ++i) kraus[l](o, i) = v(o * env_dim + l, i);
  return QuantumChannel::from_kraus(std::move(kraus));
}

QuantumChannel standard_channel(const std::string& family_in, const std::vector<double>& params,
                                std::size_t dim) {
  const std::string family = canonical_family(family_in);
  if (dim == 0) throw std::invalid_argument("standard_channel: zero dimension");
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument(family + " channel expects " + std::to_string(n) + " parameter(s)");
  };

  if (family == "identity") {
    need(0);
    return QuantumChannel::from_kraus({ComplexMatrix::identity(dim)});
  }
  if (family == "phaseflip") {
    need(1);
    require_qubit(dim, family);
    const double p = params[0];
    require_unit_interval(p, "phase-flip probability");
    const ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
    return QuantumChannel::from_kraus({std::sqrt(1.0 - p) * ComplexMatrix::identity(2), std::sqrt(p) * z});
  }
  if (family == "depolarizing") {
    need(1);
    const double p = params[0];
    require_unit_interval(p, "depolarizing probability");
    // (1 - p) rho + p 1/d, using the Weyl twirl sum_ab W rho W^dagger / d^2 = 1/d.
    const double d2 = static_cast<double>(dim * dim);
    std::vector<ComplexMatrix> kraus;
    kraus.push_back(std::sqrt(1.0 - p + p / d2) * ComplexMatrix::identity(dim));
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t b = 0; b < dim; ++b)
        if (a != 0 || b != 0) kraus.push_back(std::sqrt(p / d2) * weyl(dim, a, b));
    return QuantumChannel::from_kraus(std::move(kraus));
  }
  if (family == "ampdamp") {
    need(1);
    require_qubit(dim, family);
    const double g = params[0];
    require_unit_interval(g, "damping rate");
    const ComplexMatrix k0{{1.0, 0.0}, {0.0, std::sqrt(1.0 - g)}};
    const ComplexMatrix k1{{0.0, std::sqrt(g)}, {0.0, 0.0}};
    return QuantumChannel::from_kraus({k0, k1});
  }
  if (family == "random") {
    need(2);
    const double env = params[0];
    const double seed = params[1];
    if (!(env >= 1.0) || env != std::floor(env))
      throw std::invalid_argument("random channel env_dim must be a positive integer");
    if (!(seed >= 0.0) || seed != std::floor(seed))
      throw std::invalid_argument("random channel seed must be a non-negative integer");
    Rng rng(static_cast<std::uint64_t>(seed));
    return random_channel(dim, static_cast<std::size_t>(env), rng);
  }
  throw std::invalid_argument("unknown channel family " + family_in);
}

std::string ChannelSpec::primary_param() const {
  const std::string f = canonical_family(family);
  if (f == "phaseflip" || f == "depolarizing") return "p";
  if (f == "ampdamp") return "g";
  if (f == "random") return "e";
  return "";
}

std::size_t ChannelSpec::dim() const {
  const auto it = params.find("d");
  if (it == params.end()) return 2;
  if (!(it->second >= 1.0) || it->second != std::floor(it->second))
    throw std::invalid_argument("channel dimension d must be a positive integer");
  return static_cast<std::size_t>(it->second);
}

std::string ChannelSpec::to_string() const {
  std::string out = family;
  char sep = ':';
  for (const auto& [key, value] : params) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out += sep;
    out += key + "=" + buf;
    sep = ',';
  }
  return out;
}

ChannelSpec parse_channel_spec(const std::string& text) {
  ChannelSpec spec;
  const auto colon = text.find(':');
  spec.family = canonical_family(text.substr(0, colon));
  if (spec.family.empty()) throw std::invalid_argument("channel spec has no family: '" + text + "'");
  if (colon == std::string::npos) return spec;

  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("channel spec item is not key=value: '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw std::invalid_argument("channel spec value is not a number: '" + item + "'");
    spec.params[key] = v;
  }
  return spec;
}

QuantumChannel build_channel(const ChannelSpec& spec, Rng* rng) {
  const std::string family = canonical_family(spec.family);
  static const std::map<std::string, std::vector<std::string>> allowed = {
      {"identity", {"d"}},       {"phaseflip", {"p", "d"}}, {"depolarizing", {"p", "d"}},
      {"ampdamp", {"g", "d"}},   {"random", {"d", "e", "seed"}}};
  const auto fam = allowed.find(family);
  if (fam == allowed.end()) throw std::invalid_argument("unknown channel family " + spec.family);
  for (const auto& [key, value] : spec.params)
    if (std::find(fam->second.begin(), fam->second.end(), key) == fam->second.end())
      throw std::invalid_argument("channel family " + family + " does not take parameter " + key);

  auto get = [&](const std::string& key) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end())
      throw std::invalid_argument("channel family " + family + " requires parameter " + key);
    return it->second;
  };

  const std::size_t d = spec.dim();
  if (family == "identity") return standard_channel(family, {}, d);
  if (family == "phaseflip" || family == "depolarizing") return standard_channel(family, {get("p")}, d);
  if (family == "ampdamp") return standard_channel(family, {get("g")}, d);

  const double env = get("e");
  if (rng != nullptr) {
    if (!(env >= 1.0) || env != std::floor(env))
      throw std::invalid_argument("random channel env_dim must be a positive integer");
    return random_channel(d, static_cast<std::size_t>(env), *rng);
  }
  return standard_channel(family, {env, get("seed")}, d);
}

}  // namespace qrecover
