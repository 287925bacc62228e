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

#include "lculab/sparse_chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lculab/error.hpp"

namespace lculab {

SparseChainOracle::SparseChainOracle(MarkedPartition mp) : mp_(std::move(mp)) {
  const Index n = n_states();
  const RealMatrix& p = mp_.chain().transition();
  nbrs_.resize(static_cast<std::size_t>(n));
  for (Index s = 0; s < n; ++s) {
    for (Index t = 0; t < n; ++t) {
      if (t == s) continue;
      if (p(s, t) != 0.0 || p(t, s) != 0.0) {
        nbrs_[static_cast<std::size_t>(s)].push_back({t, p(s, t), p(t, s)});
      }
    }
  }
  u_index_.assign(static_cast<std::size_t>(n), -1);
  const auto& u = mp_.unmarked();
  for (std::size_t i = 0; i < u.size(); ++i) u_index_[static_cast<std::size_t>(u[i])] = static_cast<Index>(i);
}

const std::vector<NeighborEntry>& SparseChainOracle::neighbors(Index sigma) const {
  if (sigma < 0 || sigma >= n_states()) throw ValidationError("neighbors: state out of range");
  return nbrs_[static_cast<std::size_t>(sigma)];
}

void SparseChainOracle::check_consistency() const {
  const RealMatrix& p = mp_.chain().transition();
  const Index n = n_states();
  for (Index s = 0; s < n; ++s) {
    Index count = 0;
    for (const auto& e : neighbors(s)) {
      if (p(s, e.state) != e.p_to || p(e.state, s) != e.p_from) {
        throw ValidationError("oracle lookup disagrees with the transition matrix at state " +
                              std::to_string(s));
      }
      const auto& back = neighbors(e.state);
      const bool listed = std::any_of(back.begin(), back.end(),
                                      [s](const NeighborEntry& x) { return x.state == s; });
      if (!listed) throw ValidationError("oracle neighbor relation is not symmetric");
      ++count;
    }
    Index expected = 0;
    for (Index t = 0; t < n; ++t) expected += t != s && (p(s, t) != 0.0 || p(t, s) != 0.0);
    if (count != expected) throw ValidationError("oracle is missing neighbors");
  }
}

HBarTerms build_h_bar(const SparseChainOracle& oracle) {
  oracle.check_consistency();
  const Index n = oracle.n_states();
  std::vector<MuState> terms;
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Index s = 0; s < n; ++s) {
    for (const auto& e : oracle.neighbors(s)) {
      MuState mu;
      mu.sigma = s;
      mu.sigma_prime = e.state;
      mu.vector = ComplexVector::Zero(n);
      mu.vector(e.state) = std::sqrt(e.p_to) / std::sqrt(2.0);
      mu.vector(s) = -std::sqrt(e.p_from) / std::sqrt(2.0);
      mu.alpha_bar = (e.p_to + e.p_from) / 2.0;
      h += mu.vector * mu.vector.adjoint();
      terms.push_back(std::move(mu));
    }
  }
  // States with no neighbors keep the bare 1 - Pr(s|s) diagonal.
  for (Index s = 0; s < n; ++s) {
    if (oracle.neighbors(s).empty()) h(s, s) += 1.0 - oracle.self_loop(s);
  }
  return {std::move(terms), HermitianOperator(h)};
}

ProjectedH project_h(const HBarTerms& h_bar, const SparseChainOracle& oracle) {
  const MarkedPartition& mp = oracle.partition();
  const Index nu = oracle.n_unmarked();
  std::vector<EdgeTerm> edges;
  RealVector boundary = RealVector::Zero(nu);
  for (const auto& mu : h_bar.terms) {
    const Index iu = oracle.unmarked_index(mu.sigma);
    const Index ju = oracle.unmarked_index(mu.sigma_prime);
    if (iu >= 0 && ju >= 0) {
      if (mu.sigma > mu.sigma_prime) continue;  // merged with the other orientation
      EdgeTerm e;
      e.a = mu.sigma;
      e.b = mu.sigma_prime;
      e.alpha_bar = 2.0 * mu.alpha_bar;
      e.mu_bar = ComplexVector::Zero(nu);
      e.mu_bar(ju) = mu.vector(mu.sigma_prime);
      e.mu_bar(iu) = mu.vector(mu.sigma);
      e.mu_bar /= e.mu_bar.norm();
      edges.push_back(std::move(e));
    } else if (ju >= 0) {
      // sigma marked: projection keeps (1/sqrt2) sqrt(Pr(s|s')) |s'>, and the
      // reversed orientation contributes the same amount.
      boundary(ju) += std::norm(mu.vector(mu.sigma_prime));
    } else if (iu >= 0) {
      boundary(iu) += std::norm(mu.vector(mu.sigma));
    }
  }
  std::vector<ProjectorTerm> terms;
  for (const auto& e : edges) {
    if (e.alpha_bar > 1.0 + 1e-12) {
      throw ValidationError("project_h: merged edge weight exceeds 1");
    }
    terms.push_back({e.alpha_bar, e.mu_bar * e.mu_bar.adjoint()});
  }
  for (Index i = 0; i < nu; ++i) {
    if (boundary(i) > 0.0) {
      ComplexMatrix proj = ComplexMatrix::Zero(nu, nu);
      proj(i, i) = 1.0;
      terms.push_back({boundary(i), proj});
    }
  }
  ProjectorDecomposition dec(nu, std::move(terms));
  HermitianOperator h(dec.reconstruct());
  (void)mp;
  return {std::move(edges), std::move(boundary), std::move(dec), std::move(h)};
}

std::vector<std::vector<std::size_t>> EdgeColoring::classes() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(num_colors));
  for (std::size_t e = 0; e < edges.size(); ++e) out[static_cast<std::size_t>(color[e])].push_back(e);
  return out;
}

EdgeColoring color_edges(const SparseChainOracle& oracle) {
  EdgeColoring c;
  const Index n = oracle.n_states();
  for (Index s = 0; s < n; ++s) {
    if (oracle.is_marked(s)) continue;
    for (const auto& e : oracle.neighbors(s)) {
      if (e.state > s && !oracle.is_marked(e.state) && (e.p_to != 0.0 || e.p_from != 0.0)) {
        c.edges.emplace_back(s, e.state);
      }
    }
  }
  std::sort(c.edges.begin(), c.edges.end());
  std::vector<std::vector<int>> used(static_cast<std::size_t>(n));
  for (const auto& [a, b] : c.edges) {
    auto& ua = used[static_cast<std::size_t>(a)];
    auto& ub = used[static_cast<std::size_t>(b)];
    int k = 0;
    while (std::find(ua.begin(), ua.end(), k) != ua.end() ||
           std::find(ub.begin(), ub.end(), k) != ub.end()) {
      ++k;
    }
    ua.push_back(k);
    ub.push_back(k);
    c.color.push_back(k);
    c.num_colors = std::max(c.num_colors, k + 1);
  }
  const auto d = static_cast<int>(oracle.sparsity());
  c.greedy_bound = std::max(2 * d - 1, 1);
  c.paper_bound = d * d;
  return c;
}

bool is_proper_coloring(const EdgeColoring& c) {
  if (c.color.size() != c.edges.size()) return false;
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    if (c.color[i] < 0 || c.color[i] >= c.num_colors) return false;
    for (std::size_t j = i + 1; j < c.edges.size(); ++j) {
      if (c.color[i] != c.color[j]) continue;
      const auto& [a, b] = c.edges[i];
      const auto& [x, y] = c.edges[j];
      if (a == x || a == y || b == x || b == y) return false;
    }
  }
  return true;
}

SqrtFactors build_sqrt_factors(const EdgeColoring& coloring, const ProjectedH& projected,
                               const SparseChainOracle& oracle) {
  if (!is_proper_coloring(coloring)) throw ValidationError("build_sqrt_factors: improper coloring");
  if (coloring.edges.size() != projected.edges.size()) {
    throw ValidationError("build_sqrt_factors: coloring does not match the edge list");
  }
  const Index nu = oracle.n_unmarked();
  const ComplexMatrix id = ComplexMatrix::Identity(nu, nu);
  const Complex i(0.0, 1.0);
  SqrtFactors out;
  const auto classes = coloring.classes();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    SqrtFactor f;
    f.color = static_cast<int>(k);
    f.h = ComplexMatrix::Zero(nu, nu);
    f.z = id;
    for (std::size_t e : classes[k]) {
      const EdgeTerm& et = projected.edges[e];
      if (et.a != coloring.edges[e].first || et.b != coloring.edges[e].second) {
        throw ValidationError("build_sqrt_factors: edge order mismatch");
      }
      if (et.alpha_bar > 1.0 + 1e-12) {
        throw ValidationError("build_sqrt_factors: alpha_bar exceeds 1");
      }
      const double delta = std::asin(std::sqrt(std::min(et.alpha_bar, 1.0)));
      const ComplexMatrix proj = et.mu_bar * et.mu_bar.adjoint();
      f.edge_ids.push_back(e);
      f.delta.push_back(delta);
      f.h += et.alpha_bar * proj;
      f.z += (std::exp(i * delta) - 1.0) * proj;
    }
    f.sqrt_h = (-i * f.z + i * f.z.adjoint()) / 2.0;
    out.colors.push_back(std::move(f));
  }

  DiagonalFactor& d = out.diagonal;
  d.theta.resize(nu);
  d.u_d = ComplexMatrix::Zero(nu, nu);
  const Index n = oracle.n_states();
  d.u_d_full = ComplexMatrix::Zero(n, n);
  for (Index s = 0; s < n; ++s) {
    const Index iu = oracle.unmarked_index(s);
    if (iu < 0) {
      d.u_d_full(s, s) = i;
      continue;
    }
    const double b = std::clamp(projected.boundary(iu), 0.0, 1.0);
    d.theta(iu) = std::acos(std::sqrt(b));
    d.u_d(iu, iu) = std::exp(i * d.theta(iu));
    d.u_d_full(s, s) = d.u_d(iu, iu);
  }
  d.h = projected.boundary.cast<Complex>().asDiagonal();
  d.sqrt_h = (d.u_d + d.u_d.adjoint()) / 2.0;
  return out;
}

SparseTildeH assemble_tilde_h_sparse(const SqrtFactors& factors, const EdgeColoring& coloring) {
  const Index nu = factors.diagonal.u_d.rows();
  std::vector<ComplexMatrix> roots;
  for (const auto& f : factors.colors) roots.push_back(f.sqrt_h);
  roots.push_back(factors.diagonal.sqrt_h);
  const Index a = static_cast<Index>(roots.size()) + 1;
  const ComplexMatrix id_n = ComplexMatrix::Identity(nu, nu);
  const Complex i(0.0, 1.0);

  std::vector<UnitaryTerm> terms;
  const auto push_pair = [&](const ComplexMatrix& u1, const ComplexMatrix& u2, Index level) {
    const ComplexMatrix c = ancilla_coupling(a, level);
    ComplexMatrix rest = ComplexMatrix::Identity(a, a);
    rest(0, 0) = 0.0;
    rest(level, level) = 0.0;
    terms.push_back({1.0, kron(u1, c) + kron(id_n, rest)});
    terms.push_back({1.0, kron(u2, c) - kron(id_n, rest)});
  };
  for (std::size_t k = 0; k < factors.colors.size(); ++k) {
    const ComplexMatrix& z = factors.colors[k].z;
    push_pair(-i * z, i * z.adjoint(), static_cast<Index>(k) + 1);
  }
  push_pair(factors.diagonal.u_d, factors.diagonal.u_d.adjoint(), a - 1);
  UnitaryDecomposition unitaries(nu * a, std::move(terms), 0.5, /*involutory=*/false);

  GapAmplifiedHamiltonian g(nu, roots);
  double residual = max_abs_entry(unitaries.reconstruct() - g.matrix());
  ComplexMatrix h = factors.diagonal.h;
  for (const auto& f : factors.colors) h += f.h;
  const ComplexMatrix sq = g.matrix() * g.matrix();
  residual = std::max(residual, max_abs_entry(g.ancilla_zero_sector(sq) - h));
  if (residual > 1e-10) {
    throw InternalError("assemble_tilde_h_sparse: reconstruction residual " +
                        std::to_string(residual));
  }
  SparseTildeH out{std::move(unitaries), std::move(g)};
  out.colors = coloring.num_colors;
  out.terms = static_cast<int>(out.unitaries.size());
  out.reconstruction_residual = residual;
  return out;
}

SparsePipeline build_sparse_pipeline(const SparseChainOracle& oracle) {
  const HBarTerms hb = build_h_bar(oracle);
  ProjectedH projected = project_h(hb, oracle);
  EdgeColoring coloring = color_edges(oracle);
  SqrtFactors factors = build_sqrt_factors(coloring, projected, oracle);
  SparseTildeH assembled = assemble_tilde_h_sparse(factors, coloring);
  return {std::move(projected), std::move(coloring), std::move(factors), std::move(assembled)};
}

}  // namespace lculab
