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

#pragma once

// Sparse-access construction of the hitting-time Hamiltonian: rank-1
// "mu-state" decomposition of 1 - S, its restriction to the unmarked set,
// an edge coloring into commuting groups, square roots of each group as
// (-iZ_k + iZ_k^dag)/2, and the resulting unitary decomposition of Ht.
//
// Operators on the unmarked set use the sorted order of
// MarkedPartition::unmarked().

#include <utility>
#include <vector>

#include "lculab/gap_amplification.hpp"
#include "lculab/markov.hpp"

namespace lculab {

struct NeighborEntry {
  Index state = 0;
  /// Pr(sigma | state), sigma being the queried state.
  double p_to = 0.0;
  /// Pr(state | sigma).
  double p_from = 0.0;
};

/// Row/column lookup of a reversible chain plus marked-set membership.
class SparseChainOracle {
 public:
  explicit SparseChainOracle(MarkedPartition mp);

  const MarkedPartition& partition() const { return mp_; }
  Index n_states() const { return mp_.chain().n_states(); }
  Index sparsity() const { return mp_.chain().sparsity(); }
  /// Neighbors sigma' != sigma with a nonzero transition, sorted by state.
  const std::vector<NeighborEntry>& neighbors(Index sigma) const;
  double self_loop(Index sigma) const { return mp_.chain().probability(sigma, sigma); }
  bool is_marked(Index sigma) const { return mp_.is_marked(sigma); }
  /// -1 on unmarked states, +1 on marked ones.
  double reflection_sign(Index sigma) const { return is_marked(sigma) ? 1.0 : -1.0; }
  /// Position of sigma in the sorted unmarked list, or -1.
  Index unmarked_index(Index sigma) const { return u_index_[static_cast<std::size_t>(sigma)]; }
  Index n_unmarked() const { return static_cast<Index>(mp_.unmarked().size()); }

  /// Throws ValidationError unless every lookup matches the dense matrix and
  /// the neighbor relation is symmetric.
  void check_consistency() const;

 private:
  MarkedPartition mp_;
  std::vector<std::vector<NeighborEntry>> nbrs_;
  std::vector<Index> u_index_;
};

/// (1/sqrt2)(sqrt(Pr(s|s')) |s'> - sqrt(Pr(s'|s)) |s>) for an ordered pair.
struct MuState {
  Index sigma = 0;
  Index sigma_prime = 0;
  ComplexVector vector;
  /// ||mu||^2 = (Pr(s|s') + Pr(s'|s)) / 2.
  double alpha_bar = 0.0;
};

struct HBarTerms {
  std::vector<MuState> terms;
  /// sum over ordered pairs of |mu><mu|, equal to 1 - S.
  HermitianOperator reconstructed;
};

HBarTerms build_h_bar(const SparseChainOracle& oracle);

/// One unordered edge inside the unmarked set; both orientations merged.
struct EdgeTerm {
  Index a = 0;  // state ids, a < b
  Index b = 0;
  /// Pr(a|b) + Pr(b|a).
  double alpha_bar = 0.0;
  /// Normalized edge state on the unmarked subspace.
  ComplexVector mu_bar;
};

struct ProjectedH {
  std::vector<EdgeTerm> edges;
  /// sum over marked s of Pr(s | s') for every unmarked s'.
  RealVector boundary;
  /// Edge projectors followed by the nonzero boundary diagonal terms.
  ProjectorDecomposition decomposition;
  HermitianOperator h;
};

ProjectedH project_h(const HBarTerms& h_bar, const SparseChainOracle& oracle);

struct EdgeColoring {
  /// Sorted (a, b) with a < b, both unmarked.
  std::vector<std::pair<Index, Index>> edges;
  std::vector<int> color;
  int num_colors = 0;
  /// Greedy guarantee 2d - 1.
  int greedy_bound = 0;
  /// d^2, the count used by the complexity formulas.
  int paper_bound = 0;

  std::vector<std::vector<std::size_t>> classes() const;
};

/// Greedy proper edge coloring over sorted edges, smallest free color first.
EdgeColoring color_edges(const SparseChainOracle& oracle);
bool is_proper_coloring(const EdgeColoring& c);

struct SqrtFactor {
  int color = 0;
  std::vector<std::size_t> edge_ids;
  /// sin(delta_e) = sqrt(alpha_bar_e).
  std::vector<double> delta;
  ComplexMatrix h;
  ComplexMatrix z;
  ComplexMatrix sqrt_h;
};

struct DiagonalFactor {
  /// cos(theta) = sqrt(boundary), on the unmarked subspace.
  RealVector theta;
  ComplexMatrix u_d;
  /// Same on the full state space, with phase i on marked states.
  ComplexMatrix u_d_full;
  ComplexMatrix h;
  ComplexMatrix sqrt_h;
};

struct SqrtFactors {
  std::vector<SqrtFactor> colors;
  DiagonalFactor diagonal;
};

SqrtFactors build_sqrt_factors(const EdgeColoring& coloring, const ProjectedH& projected,
                               const SparseChainOracle& oracle);

struct SparseTildeH {
  /// Ht = (1/2) sum_k U_k, two unitaries per color plus two for the diagonal.
  UnitaryDecomposition unitaries;
  GapAmplifiedHamiltonian tilde_h;
  int colors = 0;
  int terms = 0;
  /// Largest entrywise mismatch of (1/2) sum U_k vs Ht and of the squared
  /// ancilla-0 sector vs H.
  double reconstruction_residual = 0.0;
};

SparseTildeH assemble_tilde_h_sparse(const SqrtFactors& factors, const EdgeColoring& coloring);

/// The whole chain: oracle -> H_bar -> H -> coloring -> factors -> Ht.
struct SparsePipeline {
  ProjectedH projected;
  EdgeColoring coloring;
  SqrtFactors factors;
  SparseTildeH assembled;
};

SparsePipeline build_sparse_pipeline(const SparseChainOracle& oracle);

}  // namespace lculab
