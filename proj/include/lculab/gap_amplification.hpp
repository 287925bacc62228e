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

// Spectral gap amplification: from H = sum_k alpha_k Pi_k build
//   Ht = sum_k sqrt(alpha_k) Pi_k (x) (|k><0| + |0><k|)
// on system (x) ancilla, whose square restricted to ancilla |0> is H.
// Basis ordering is system-major: index = s * ancilla_dim + a.

#include <optional>
#include <string>
#include <vector>

#include "lculab/cost.hpp"
#include "lculab/operators.hpp"

namespace lculab {

inline constexpr double kProjectorTolerance = 1e-10;

struct ProjectorTerm {
  double alpha = 0.0;
  ComplexMatrix projector;
};

/// H = sum_k alpha_k Pi_k - identity_offset * 1, alpha_k > 0, Pi_k orthogonal
/// projectors. The offset is bookkeeping only; every algorithm works with the
/// positive semidefinite part.
class ProjectorDecomposition {
 public:
  ProjectorDecomposition(Index dim, std::vector<ProjectorTerm> terms,
                         double identity_offset = 0.0);

  /// Splits a PSD operator into rank-1 eigenprojectors with alpha = eigenvalue;
  /// eigenvalues below zero_tolerance are dropped.
  static ProjectorDecomposition from_psd(const HermitianOperator& h,
                                         double zero_tolerance = 1e-12);

  Index dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<ProjectorTerm>& terms() const { return terms_; }
  double identity_offset() const { return offset_; }

  /// sum_k alpha_k Pi_k.
  ComplexMatrix reconstruct() const;
  HermitianOperator hamiltonian() const { return HermitianOperator(reconstruct()); }
  double sum_alpha() const;
  double sum_sqrt_alpha() const;

 private:
  Index dim_;
  std::vector<ProjectorTerm> terms_;
  double offset_;
};

struct UnitaryTerm {
  double alpha = 0.0;
  ComplexMatrix unitary;
};

/// prefactor * sum_k alpha_k U_k with alpha_k > 0 and each U_k unitary.
/// When `involutory` is set every U_k must also satisfy U_k^2 = 1; this is
/// the form H = (1/2) sum_k alpha_k U_k with +-1-eigenvalue unitaries.
class UnitaryDecomposition {
 public:
  UnitaryDecomposition(Index dim, std::vector<UnitaryTerm> terms, double prefactor = 0.5,
                       bool involutory = true);

  Index dim() const { return dim_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<UnitaryTerm>& terms() const { return terms_; }
  double prefactor() const { return prefactor_; }
  bool involutory() const { return involutory_; }
  ComplexMatrix reconstruct() const;
  /// prefactor * sum_k alpha_k.
  double weight() const;

 private:
  Index dim_;
  std::vector<UnitaryTerm> terms_;
  double prefactor_;
  bool involutory_;
};

/// Pi_k = (U_k + 1)/2; the discarded identity part is recorded as the offset.
ProjectorDecomposition projectors_from_unitaries(const UnitaryDecomposition& u);

class GapAmplifiedHamiltonian {
 public:
  /// root_blocks[k] is sqrt(h_k), attached to ancilla level k + 1.
  GapAmplifiedHamiltonian(Index system_dim, std::vector<ComplexMatrix> root_blocks,
                          std::optional<ProjectorDecomposition> source = std::nullopt);

  Index system_dim() const { return system_dim_; }
  Index ancilla_dim() const { return ancilla_dim_; }
  Index dim() const { return system_dim_ * ancilla_dim_; }
  const HermitianOperator& hamiltonian() const { return matrix_; }
  const ComplexMatrix& matrix() const { return matrix_.matrix(); }
  const std::vector<ComplexMatrix>& root_blocks() const { return roots_; }
  const std::optional<ProjectorDecomposition>& source() const { return source_; }
  /// sum_k ||sqrt(h_k)||, an upper bound on ||Ht||.
  double norm_bound() const { return norm_bound_; }

  /// |phi> (x) |0>.
  ComplexVector embed(const ComplexVector& phi) const;
  /// Columns of `phis` each embedded as |phi> (x) |0>.
  ComplexMatrix embed_columns(const ComplexMatrix& phis) const;
  /// (1 (x) <0|) v.
  ComplexVector ancilla_zero_block(const ComplexVector& v) const;
  /// (1 (x) <0|) op (1 (x) |0>).
  ComplexMatrix ancilla_zero_sector(const ComplexMatrix& op) const;

 private:
  Index system_dim_;
  Index ancilla_dim_;
  std::vector<ComplexMatrix> roots_;
  std::optional<ProjectorDecomposition> source_;
  HermitianOperator matrix_;
  double norm_bound_ = 0.0;
};

GapAmplifiedHamiltonian build_tilde_h(const ProjectorDecomposition& p);

/// |k><0| + |0><k| on a dimension-`dim` register.
ComplexMatrix ancilla_coupling(Index dim, Index k);
/// exp(-i sign (pi/2) (|k><0| + |0><k|)) in closed form.
ComplexMatrix ancilla_rotation(Index dim, Index k, int sign);

/// Decomposition of Ht into 2K unitaries with weights sqrt(alpha_k)/2:
///   Pi_k (x) ( i e^{-i(pi/2)A_k}) + (1 - Pi_k) (x) 1
///   Pi_k (x) (-i e^{+i(pi/2)A_k}) - (1 - Pi_k) (x) 1
/// whose equal-weight sum is exactly 2 sqrt(alpha_k) Pi_k (x) A_k.
/// Requires a projector-presented Ht.
UnitaryDecomposition tilde_h_unitary_terms(const GapAmplifiedHamiltonian& g);

/// exp(-i Ht t), computed from the eigendecomposition.
ComplexMatrix exact_evolution(const GapAmplifiedHamiltonian& g, double t);

enum class TauSource { kSumAlphaTilde, kSumSqrtAlpha };

struct SimulationCostModel {
  double tau = 0.0;
  double epsilon = 0.0;
  double terms = 1.0;  // K
  double c_u = 1.0;    // gates per U_k
  TauSource tau_source = TauSource::kSumSqrtAlpha;
  CostConstants constants;
};

struct SimulationCost {
  double queries = 0.0;
  double extra_gates = 0.0;
  double total_gates = 0.0;
  double log_factor = 0.0;
  bool clamped = false;
  TauSource tau_source = TauSource::kSumSqrtAlpha;
};

/// tau = |t| sum_k alpha~_k from the unitary decomposition of Ht.
double tau_from_unitary_terms(double t, const UnitaryDecomposition& terms);
/// tau = |t| sum_k sqrt(alpha_k).
double tau_from_sqrt_alpha(double t, const ProjectorDecomposition& p);
std::string to_string(TauSource s);

/// queries = c_q tau F, extra = c_g K tau F, total = c_t (ln K C_U + K) tau F,
/// F = ln(tau/eps) / lnln(tau/eps) (see log_ratio_factor for clamping).
SimulationCost simulation_query_cost(const SimulationCostModel& m);

}  // namespace lculab
