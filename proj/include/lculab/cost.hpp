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

// Gate/query-count ledger for the asymptotic complexity formulas, evaluated
// with explicit constants, and log-log scaling fits.

#include <string>
#include <utility>
#include <vector>

namespace lculab {

/// Every asymptotic constant in one place. All default to 1; scaling fits
/// are slope-only, so none of them affects an exponent.
struct CostConstants {
  double queries = 1.0;         // Hamiltonian-simulation query count
  double extra_gates = 1.0;     // simulation ancilla gates, K * tau * log factor
  double total_gates = 1.0;     // C_W for projector-presented Hamiltonians
  double sparse_gates = 1.0;    // C_W for sparse chains
  double b_gate = 1.0;          // coefficient-state preparation
  double eps_prime = 1.0;       // eps' = c * (...)
  double evolution_time = 1.0;  // t = c * (...)
};

/// ln(r) / lnln(r), with lnln clamped below at 1 (r <= e^e) and ln clamped
/// below at 1 (r <= e) so the factor stays positive and monotone.
double log_ratio_factor(double ratio, bool* clamped = nullptr);

struct CostEntry {
  std::string name;
  double value = 0.0;
  std::string formula;
};

/// Named cost entries plus the rule that composes them into "total".
class CostReport {
 public:
  enum class Composition {
    kSimulation,   // total = C_W
    kGibbs,        // total = amplification_rounds * (C_W + C_prep + C_B)
    kHittingTime,  // total = ae_repetitions * grover_queries *
                   //         (C_W + C_U + C_sqrt_pi + C_B)
  };

  explicit CostReport(Composition c = Composition::kSimulation) : composition_(c) {}

  void set(const std::string& name, double value, const std::string& formula);
  double get(const std::string& name) const;
  bool has(const std::string& name) const;
  const std::vector<CostEntry>& entries() const { return entries_; }
  Composition composition() const { return composition_; }

  /// Recomputes total from the other entries using the composition rule.
  double recompute_total() const;
  /// Sets "total" from recompute_total().
  void finalize();
  double total() const { return get("total"); }

 private:
  Composition composition_;
  std::vector<CostEntry> entries_;
};

struct OracleCosts {
  double c_p = 1.0;        // transition-oracle gates
  double c_u = 1.0;        // marked-set reflection gates
  double c_sqrt_pi = 1.0;  // stationary-state preparation gates
};

struct Theorem1Params {
  double norm = 1.0;            // ||H||
  double sum_sqrt_alpha = 1.0;  // tau per unit time
  double terms = 1.0;           // K
  double c_u = 1.0;             // gates per controlled U_k
};

/// Gibbs preparation cost: sqrt(N/Z) (C_W(t, eps') + n + log J), with
/// t = sqrt(beta ln(1/eps')), eps' = c eps sqrt(Z/N),
/// J = sqrt(||H|| beta) ln(1/eps'). Also records the qubit-Hamiltonian form
/// sqrt(N beta / Z) * ln^2(sqrt(N beta / Z) / eps).
CostReport theorem1_cost(double dim, double partition_function, double beta, double epsilon,
                         const Theorem1Params& params, const CostConstants& k = {});

/// Hitting-time estimation cost: (1/eps')(C_W(t, eps') + C_U + C_sqrt_pi + C_B)
/// with eps' = c eps Delta / ln(1/(eps Delta)), t = ln(1/(eps Delta)) / sqrt(Delta),
/// C_B = c_B ln(1/(Delta eps)) and C_W from sparse_cost.
CostReport theorem2_cost(double delta, double epsilon, double sparsity, double dim,
                         const OracleCosts& oracles, const CostConstants& k = {});

/// C_W for a d-sparse chain: (d ln N + C_U + C_P) tau ln(tau/eps)/lnln(tau/eps),
/// tau = |t| d^2.
CostReport sparse_cost(double sparsity, double dim, double time, double epsilon, double c_p,
                       double c_u, const CostConstants& k = {});

struct ScalingFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares slope of log(cost) against log(x). Needs >= 4 points with
/// positive coordinates spanning at least one decade in x.
ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points);

}  // namespace lculab
