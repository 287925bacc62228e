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

// Linear combinations of unitaries X = sum_l gamma_l V_l applied exactly to
// states, with amplitude-amplification round counting.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "lculab/operators.hpp"

namespace lculab {

inline constexpr double kAnnihilationThreshold = 1e-14;

struct LcuTerm {
  double gamma = 0.0;
  ComplexMatrix unitary;
};

/// X = sum_l gamma_l exp(-i t_l G) for a fixed Hermitian generator G, stored
/// through the eigensystem of G. `response`, when set, must return
/// sum_l gamma_l exp(-i t_l E) for an eigenvalue E; it lets callers supply a
/// closed form or a fast recurrence for families with very many terms.
struct EvolutionFamily {
  std::shared_ptr<const Eigensystem> generator;
  std::vector<double> times;
  std::vector<double> gammas;
  std::function<Complex(double)> response;
  /// Declares response(E) = response(-E); eigenvalues equal in magnitude to
  /// within 1e-12 relative then share one evaluation.
  bool even_response = false;
};

class LcuOperator {
 public:
  LcuOperator(Index dim, std::vector<LcuTerm> terms);
  explicit LcuOperator(EvolutionFamily family);

  Index dim() const { return dim_; }
  /// Number of terms L.
  std::size_t size() const;
  double gamma_total() const { return gamma_total_; }
  bool is_dense() const { return !family_; }
  /// Dense terms; empty for an evolution family.
  const std::vector<LcuTerm>& terms() const { return terms_; }
  const EvolutionFamily* family() const { return family_.get(); }

  /// sum_l gamma_l exp(-i t_l E), summed term by term.
  Complex family_response(double e) const;
  /// Values of the response on every generator eigenvalue, using the fast
  /// closure when present.
  ComplexVector spectral_response() const;

  /// X * columns.
  ComplexMatrix apply(const ComplexMatrix& columns) const;
  ComplexMatrix matrix() const;

 private:
  Index dim_ = 0;
  std::vector<LcuTerm> terms_;
  std::shared_ptr<const EvolutionFamily> family_;
  struct ResponseCache;
  std::shared_ptr<ResponseCache> cache_;
  double gamma_total_ = 0.0;
};

struct LcuConfig {
  double c_a = 1.0;
  double annihilation_threshold = kAnnihilationThreshold;
};

struct LcuRunResult {
  StateVector output_state;
  double success_amplitude = 0.0;
  /// ceil(c_a (pi/4) / asin(a)).
  std::int64_t amplification_rounds = 0;
  /// ceil(c_a / a).
  std::int64_t rounds_inverse_form = 0;
  /// amplification_rounds * (2L + 1).
  std::int64_t effective_queries = 0;
};

/// Amplitudes sqrt(gamma_l / gamma).
StateVector b_state(const std::vector<double>& weights);

std::int64_t amplification_rounds(double success_amplitude, double c_a = 1.0);
std::int64_t rounds_inverse_form(double success_amplitude, double c_a = 1.0);

LcuRunResult apply_lcu(const LcuOperator& x, const StateVector& phi, const LcuConfig& cfg = {});

struct LcuBlockResult {
  /// X M / ||X M||_F.
  ComplexMatrix output;
  /// ||X M||_F / (gamma ||M||_F).
  double success_amplitude = 0.0;
  std::int64_t amplification_rounds = 0;
  std::int64_t rounds_inverse_form = 0;
  std::int64_t effective_queries = 0;
};

/// apply_lcu on a state stored as a matrix of columns, each column being the
/// system part paired with one orthonormal ancilla basis state the LCU does
/// not touch.
LcuBlockResult apply_lcu_columns(const LcuOperator& x, const ComplexMatrix& columns,
                                 const LcuConfig& cfg = {});

/// (B^dag (x) 1) SELECT (B (x) 1) |phi>|0> on system (x) ancilla with basis
/// index s * L + l. Dense operators only.
StateVector extended_lcu_state(const LcuOperator& x, const StateVector& phi);
/// Unnormalized (1 (x) <0|) v for an ancilla of dimension `ancilla_dim`.
ComplexVector ancilla_zero_block(const ComplexVector& v, Index ancilla_dim);

}  // namespace lculab
