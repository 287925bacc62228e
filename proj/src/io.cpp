// Copyright 2026 The lculab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lculab/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lculab/error.hpp"

namespace lculab::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(context + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const std::string& context) {
  if (!j.is_number()) throw ValidationError(context + ": expected a number");
  return j.get<double>();
}

Index count(const Json& j, const std::string& context) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ValidationError(context + ": expected a nonnegative integer");
  }
  return static_cast<Index>(j.get<std::int64_t>());
}

}  // namespace

void reject_unknown_keys(const Json& obj, const std::vector<std::string>& allowed,
                         const std::string& context) {
  if (!obj.is_object()) throw ValidationError(context + ": expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ValidationError(context + ": unknown field '" + item.key() + "'");
    }
  }
}

Json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix_to_json: matrix must be square");
  Json re = Json::array(), im = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return Json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  reject_unknown_keys(j, {"dim", "re", "im"}, "matrix");
  const Index n = count(field(j, "dim", "matrix"), "matrix.dim");
  if (n == 0 || n > kMaxDimension) throw DimensionError("matrix: dim out of range");
  const Json& re = field(j, "re", "matrix");
  const Json empty = Json::array();
  const Json& im = j.contains("im") ? j.at("im") : empty;
  if (!re.is_array() || static_cast<Index>(re.size()) != n * n) {
    throw DimensionError("matrix: 're' must hold dim*dim numbers");
  }
  if (!im.is_array() || (!im.empty() && static_cast<Index>(im.size()) != n * n)) {
    throw DimensionError("matrix: 'im' must hold dim*dim numbers");
  }
  ComplexMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      const auto k = static_cast<std::size_t>(r * n + c);
      m(r, c) = Complex(number(re[k], "matrix.re"), im.empty() ? 0.0 : number(im[k], "matrix.im"));
    }
  }
  return m;
}

Json decomposition_to_json(const ProjectorDecomposition& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    terms.push_back({{"alpha", t.alpha}, {"projector", matrix_to_json(t.projector)}});
  }
  return Json{{"dim", p.dim()}, {"terms", terms}, {"identity_offset", p.identity_offset()}};
}

ProjectorDecomposition decomposition_from_json(const Json& j) {
  reject_unknown_keys(j, {"dim", "terms", "identity_offset"}, "decomposition");
  const Index n = count(field(j, "dim", "decomposition"), "decomposition.dim");
  const Json& terms = field(j, "terms", "decomposition");
  if (!terms.is_array()) throw ValidationError("decomposition: 'terms' must be an array");
  std::vector<ProjectorTerm> out;
  for (const auto& t : terms) {
    reject_unknown_keys(t, {"alpha", "projector"}, "decomposition term");
    out.push_back({number(field(t, "alpha", "decomposition term"), "alpha"),
                   matrix_from_json(field(t, "projector", "decomposition term"))});
  }
  const double offset = j.contains("identity_offset") ? number(j.at("identity_offset"), "identity_offset") : 0.0;
  return ProjectorDecomposition(n, std::move(out), offset);
}

Json lcu_to_json(const LcuOperator& x) {
  if (!x.is_dense()) throw ValidationError("lcu_to_json: evolution families are not serialized");
  Json terms = Json::array();
  for (const auto& t : x.terms()) {
    terms.push_back({{"gamma", t.gamma}, {"unitary", matrix_to_json(t.unitary)}});
  }
  return Json{{"dim", x.dim()}, {"terms", terms}};
}

LcuOperator lcu_from_json(const Json& j) {
  reject_unknown_keys(j, {"dim", "terms"}, "lcu");
  const Index n = count(field(j, "dim", "lcu"), "lcu.dim");
  const Json& terms = field(j, "terms", "lcu");
  if (!terms.is_array()) throw ValidationError("lcu: 'terms' must be an array");
  std::vector<LcuTerm> out;
  for (const auto& t : terms) {
    reject_unknown_keys(t, {"gamma", "unitary"}, "lcu term");
    out.push_back({number(field(t, "gamma", "lcu term"), "gamma"),
                   matrix_from_json(field(t, "unitary", "lcu term"))});
  }
  return LcuOperator(n, std::move(out));
}

Json chain_to_json(const RealMatrix& p, const std::vector<Index>& marked) {
  Json entries = Json::array();
  for (Index r = 0; r < p.rows(); ++r) {
    for (Index c = 0; c < p.cols(); ++c) {
      if (p(r, c) != 0.0) entries.push_back(Json::array({r, c, p(r, c)}));
    }
  }
  return Json{{"n_states", p.rows()}, {"entries", entries}, {"marked", marked}};
}

ChainSpec chain_from_json(const Json& j) {
  reject_unknown_keys(j, {"n_states", "entries", "marked"}, "chain");
  const Index n = count(field(j, "n_states", "chain"), "chain.n_states");
  if (n == 0 || n > kMaxDimension) throw DimensionError("chain: n_states out of range");
  ChainSpec spec;
  spec.transition = RealMatrix::Zero(n, n);
  const Json& entries = field(j, "entries", "chain");
  if (!entries.is_array()) throw ValidationError("chain: 'entries' must be an array");
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 3) {
      throw ValidationError("chain: each entry must be [row, col, prob]");
    }
    const Index r = count(e[0], "chain entry row");
    const Index c = count(e[1], "chain entry col");
    if (r >= n || c >= n) throw ValidationError("chain: entry index out of range");
    spec.transition(r, c) += number(e[2], "chain entry prob");
  }
  const Json& marked = field(j, "marked", "chain");
  if (!marked.is_array()) throw ValidationError("chain: 'marked' must be an array");
  for (const auto& m : marked) spec.marked.push_back(count(m, "chain.marked"));
  return spec;
}

ComplexMatrix pauli_matrix(const std::string& label) {
  if (label.empty() || label.size() > 12) throw ValidationError("pauli: label length must be 1..12");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  const Complex i(0.0, 1.0);
  for (char ch : label) {
    ComplexMatrix p(2, 2);
    switch (ch) {
      case 'I': p << 1, 0, 0, 1; break;
      case 'X': p << 0, 1, 1, 0; break;
      case 'Y': p << 0, -i, i, 0; break;
      case 'Z': p << 1, 0, 0, -1; break;
      default: throw ValidationError(std::string("pauli: unknown letter '") + ch + "'");
    }
    out = kron(out, p);
  }
  return out;
}

UnitaryDecomposition parse_pauli_lines(const std::vector<std::string>& lines) {
  std::vector<UnitaryTerm> terms;
  std::size_t width = 0;
  for (const auto& raw : lines) {
    const auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    std::istringstream in(raw);
    double coeff = 0.0;
    std::string label, extra;
    if (!(in >> coeff)) {
      throw ValidationError("pauli: cannot read coefficient in '" + raw + "'");
    }
    if (!(in >> label) || (in >> extra)) {
      throw ValidationError("pauli: expected '<coeff> <PAULI>' in '" + raw + "'");
    }
    if (!std::isfinite(coeff)) throw ValidationError("pauli: non-finite coefficient");
    if (width == 0) width = label.size();
    if (label.size() != width) throw DimensionError("pauli: strings of different lengths");
    if (coeff == 0.0) continue;
    const ComplexMatrix p = pauli_matrix(label);
    terms.push_back({2.0 * std::abs(coeff), coeff < 0 ? ComplexMatrix(-p) : p});
  }
  if (width == 0) throw ValidationError("pauli: no terms");
  return UnitaryDecomposition(Index{1} << width, std::move(terms), 0.5, true);
}

ProjectorDecomposition pauli_decomposition(const std::vector<std::string>& lines) {
  const ProjectorDecomposition full = projectors_from_unitaries(parse_pauli_lines(lines));
  std::vector<ProjectorTerm> kept;
  for (const auto& t : full.terms()) {
    if (max_abs_entry(t.projector) > kProjectorTolerance) kept.push_back(t);
  }
  return ProjectorDecomposition(full.dim(), std::move(kept), full.identity_offset());
}

ProjectorDecomposition decomposition_from_matrix(const HermitianOperator& h) {
  const double shift = std::min(h.min_eigenvalue(), 0.0);
  const ComplexMatrix shifted =
      h.matrix() - shift * ComplexMatrix::Identity(h.dim(), h.dim());
  const ProjectorDecomposition p = ProjectorDecomposition::from_psd(HermitianOperator(shifted));
  return ProjectorDecomposition(p.dim(), p.terms(), -shift);
}

}  // namespace lculab::io
