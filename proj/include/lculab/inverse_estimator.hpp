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

// Hitting-time estimation: 1/H as a double sum of evolutions under Ht,
//   1/x ~ dz sum_k e^{-z_k x},   e^{-z x} ~ sum_j w_j e^{-i y_j sqrt(2 z) sqrt(x)},
// the expectation of the resulting circuit in |sqrt(pi_U)>, and a sampled
// amplitude-estimation model.

#include <cstdint>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "lculab/cost.hpp"
#include "lculab/gap_amplification.hpp"
#include "lculab/gibbs.hpp"
#include "lculab/lcu.hpp"
#include "lculab/markov.hpp"

namespace lculab {

/// Evolution time for the k-th exponential: y_j sqrt(2 z_k) (exact) or the
/// variant y_j sqrt(z_k), which represents e^{-z_k x / 2} instead.
enum class TimeScaling { kSqrtTwoZ, kSqrtZ };

struct InverseGrid {
  std::int64_t K = 0;
  double delta_z = 0.0;
  double z_K = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  /// Inner grid, calibrated with norm 1, beta = 2 z_K, eps'' = eps / (2 z_K).
  HsGrid hs;
  /// dz * sum_j w_j summed over k = 0..K-1.
  double gamma = 0.0;
  int iterations = 0;
  /// Largest sampled |1/x - dz sum_k e^{-z_k x}| on [Delta, 1].
  double exp_sum_error = 0.0;
  /// Largest sampled error of the full double sum on [Delta, 1].
  double max_scalar_error = 0.0;
  std::vector<std::string> warnings;

  double z(std::int64_t k) const { return static_cast<double>(k) * delta_z; }
  /// dz sum_{k<K} e^{-z_k x}, closed form.
  double exp_sum(double x) const;
  /// sum_k dz sum_j w_j cos(y_j sqrt(c z_k) e), c = 2 or 1 by scaling.
  double response(double e, TimeScaling scaling = TimeScaling::kSqrtTwoZ) const;
  std::int64_t terms() const { return K * static_cast<std::int64_t>(hs.size()); }
};

struct InverseGridOptions {
  double c1 = 1.0;  // z_K = c1 (1/Delta) ln(1/(Delta eps))
  double c2 = 1.0;  // dz = c2 eps
};

/// Starts from the options' constants, then grows z_K by 5/4 while the
/// truncation e^{-z_K Delta}/Delta exceeds eps/8 and otherwise halves dz,
/// until the exponential sum is within eps/4 on 64 samples of [Delta, 1];
/// then calibrates the inner grid and checks the double sum at eps/2.
InverseGrid calibrate_inverse_grid(double delta, double epsilon,
                                   const InverseGridOptions& options = {});

/// sum_{j,k} dz w_j e^{-i y_j sqrt(2 z_k) Ht}. The ancilla-0 spectrum of Ht^2
/// must lie in [Delta, 1].
LcuOperator inverse_lcu(const InverseGrid& grid, const GapAmplifiedHamiltonian& g,
                        TimeScaling scaling = TimeScaling::kSqrtTwoZ);

/// max over the columns phi of states of || (H^{-1} phi) (x) |0> - X (phi (x) |0>) ||.
double inverse_residual(const InverseGrid& grid, const ProjectorDecomposition& p,
                        const ComplexMatrix& states,
                        TimeScaling scaling = TimeScaling::kSqrtTwoZ);

/// (pi_U / gamma) Re <sqrt(pi_U)| X |sqrt(pi_U)> with X the ancilla-0 block
/// of inverse_lcu acting on |sqrt(pi_U)>|0>.
double t_circuit_expectation(const InverseGrid& grid, const GapAmplifiedHamiltonian& g,
                             const MarkedPartition& mp,
                             TimeScaling scaling = TimeScaling::kSqrtTwoZ);

inline constexpr double kAeConfidenceLimit = 0.8105694691387022;  // 8/pi^2

struct AeResult {
  double estimate = 0.0;
  std::int64_t grover_queries = 0;
  std::int64_t outcome = 0;
};

/// M = ceil(c_ae / eps), rounded up to even.
std::int64_t ae_grover_count(double epsilon, double c_ae = 4.0);
/// Pr(y) = sin^2(M pi d) / (M^2 sin^2(pi d)), d = theta_a - y/M,
/// theta_a = asin(sqrt(a)) / pi, for y = 0..M-1.
std::vector<double> ae_outcome_distribution(double true_value, std::int64_t m);
/// Samples one outcome y and returns sin^2(pi y / M). Confidence above 8/pi^2
/// is rejected: boosting is a cost-model entry only.
AeResult amplitude_estimation(double true_value, double epsilon, double confidence,
                              std::uint64_t seed, double c_ae = 4.0);

enum class ChainRoute { kDense, kSparse };
enum class HittingMode { kDesk, kOracleFree };

struct HittingTimeTask {
  explicit HittingTimeTask(MarkedPartition p) : partition(std::move(p)) {}

  MarkedPartition partition;
  double epsilon = 0.1;
  /// eps' = eps_prime_constant * eps Delta / ln(1/(eps Delta)).
  double eps_prime_constant = 1.0;
  double confidence = 0.81;
  HittingMode mode = HittingMode::kDesk;
  /// Required in oracle-free mode; 0 < lower bound <= lambda_min(H).
  std::optional<double> delta_lower_bound;
  ChainRoute route = ChainRoute::kDense;
  TimeScaling scaling = TimeScaling::kSqrtTwoZ;
  double c_ae = 4.0;
  InverseGridOptions grid_options;
  OracleCosts oracles;
  CostConstants constants;
};

struct HittingTimeResult {
  double estimate = 0.0;
  double exact = 0.0;
  double error = 0.0;
  /// <0|<0_a| T |0>|0_a>.
  double exact_amplitude = 0.0;
  /// z_K * exact_amplitude, the estimate without sampling noise.
  double noiseless_estimate = 0.0;
  double delta = 0.0;
  double eps_prime = 0.0;
  std::int64_t grover_queries = 0;
  InverseGrid grid;
  CostReport cost{CostReport::Composition::kHittingTime};
  std::optional<std::pair<double, double>> classical_cost_comparison;
};

HittingTimeResult estimate_hitting_time(const HittingTimeTask& task, std::uint64_t seed);
/// A fresh amplitude-estimation draw for an already computed result:
/// z_K * amplitude_estimation(exact_amplitude, eps', confidence, seed).
double resample_hitting_estimate(const HittingTimeResult& r, const HittingTimeTask& task,
                                 std::uint64_t seed);

}  // namespace lculab
