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

// Gibbs-state preparation through the Hubbard-Stratonovich identity
//   e^{-beta x^2 / 2} = (2 pi)^{-1/2} int dy e^{-y^2/2} e^{-i y sqrt(beta) x},
// discretized on a symmetric grid and applied to the gap-amplified
// Hamiltonian, whose square on ancilla |0> is H.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lculab/cost.hpp"
#include "lculab/gap_amplification.hpp"
#include "lculab/lcu.hpp"
#include "lculab/operators.hpp"
#include "lculab/random.hpp"

namespace lculab {

enum class PreconditionMode { kStrict, kWarn };

struct HsGrid {
  std::int64_t J = 0;
  double delta_y = 0.0;
  double beta = 0.0;
  double epsilon_prime = 0.0;
  double norm_bound = 0.0;
  /// w_j for j = -J..J, stored at index j + J.
  std::vector<double> weights;
  int iterations = 0;
  /// Largest sampled |e^{-beta x/2} - sum_j w_j e^{-i y_j sqrt(beta x)}|.
  double max_scalar_error = 0.0;
  /// Gaussian mass beyond |y| > y_J.
  double tail_bound = 0.0;
  std::vector<std::string> warnings;

  double node(std::int64_t j) const { return static_cast<double>(j) * delta_y; }
  double y_J() const { return static_cast<double>(J) * delta_y; }
  double weight_sum() const;
  std::size_t size() const { return weights.size(); }
  /// sum_j w_j cos(y_j s), which equals the full complex sum by symmetry.
  double response(double s) const;
  /// sum_i response(s[i]) for n points.
  double response_sum(const double* s, std::size_t n) const;
};

/// Builds the grid for H with ||H|| <= norm_bound. Starts from
///   delta_y = 1 / sqrt(norm_bound beta ln(1/eps')),  y_J = sqrt(ln(1/eps'))
/// (beta norm_bound floored at 1) and refines until the scalar test passes on
/// 64 points of [0, norm_bound] at eps'/2: y_J grows by 5/4 while the Gaussian
/// tail exceeds eps'/4, otherwise delta_y halves. At most 20 refinements.
HsGrid calibrate_hs_grid(double norm_bound, double beta, double epsilon_prime,
                         PreconditionMode mode = PreconditionMode::kStrict);

/// Same, without refinement: the grid for explicit delta_y and J.
HsGrid make_hs_grid(double delta_y, std::int64_t J, double beta, double epsilon_prime,
                    double norm_bound);

/// X' = sum_j w_j e^{-i y_j sqrt(beta) Ht}, as an evolution family.
LcuOperator hs_lcu(const HsGrid& grid, const GapAmplifiedHamiltonian& g);
/// Same operator with every evolution materialized as a dense unitary.
LcuOperator hs_lcu_dense(const HsGrid& grid, const GapAmplifiedHamiltonian& g);
/// Dense operator whose evolutions are replaced by unitaries W_j with
/// ||W_j - e^{-i y_j sqrt(beta) Ht}|| = perturbation exactly (perturbation < 2).
LcuOperator hs_lcu_perturbed(const HsGrid& grid, const GapAmplifiedHamiltonian& g,
                             double perturbation, Rng& rng);

/// max over the columns phi of states of
///   || (e^{-beta H/2} phi) (x) |0> - X' (phi (x) |0>) ||,
/// with H the positive part of p and X' = hs_lcu(grid, build_tilde_h(p)).
double hs_residual(const HsGrid& grid, const ProjectorDecomposition& p,
                   const ComplexMatrix& states);

/// (1/sqrt(N)) sum_s |s>|s>, N = 2^n, index s * N + s'.
StateVector maximally_entangled_state(int n_qubits);

enum class GibbsMode { kDesk, kOracleFree };

struct GibbsTask {
  explicit GibbsTask(ProjectorDecomposition d) : decomposition(std::move(d)) {}

  ProjectorDecomposition decomposition;
  double beta = 0.0;
  double epsilon = 0.1;
  GibbsMode mode = GibbsMode::kDesk;
  /// Required in oracle-free mode; a lower bound on Z.
  std::optional<double> z_lower_bound;
  /// eps' = eps_prime_constant * eps * sqrt(Z / N).
  double eps_prime_constant = 0.5;
  PreconditionMode precondition_mode = PreconditionMode::kStrict;
  LcuConfig lcu;
  CostConstants constants;
  /// Gates per controlled U_k in the simulation ledger.
  double c_u = 1.0;
};

struct GibbsResult {
  GibbsResult(DensityMatrix prepared, DensityMatrix exact)
      : prepared_density(std::move(prepared)), exact_density(std::move(exact)) {}

  DensityMatrix prepared_density;
  DensityMatrix exact_density;
  double trace_dist = 0.0;
  double success_amplitude = 0.0;
  double partition_function = 0.0;
  double eps_prime = 0.0;
  HsGrid grid;
  std::int64_t amplification_rounds = 0;
  std::int64_t rounds_inverse_form = 0;
  CostReport cost{CostReport::Composition::kGibbs};
  std::vector<std::string> warnings;
};

/// Z = Tr e^{-beta H} for the positive part of the decomposition.
double partition_function(const ProjectorDecomposition& p, double beta);
/// e^{-beta H} / Z for the positive part of the decomposition.
DensityMatrix thermal_state(const ProjectorDecomposition& p, double beta);

GibbsResult prepare_gibbs(const GibbsTask& task);

}  // namespace lculab
