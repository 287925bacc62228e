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

#include "lculab/inverse_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lculab/error.hpp"
#include "lculab/sparse_chain.hpp"

namespace lculab {

namespace {

constexpr int kSamples = 64;
constexpr int kMaxRefinements = 20;

double sample_point(double delta, int i) { return delta + (1.0 - delta) * i / (kSamples - 1); }

}  // namespace

double InverseGrid::exp_sum(double x) const {
  const double q = std::exp(-delta_z * x);
  if (q == 1.0) return delta_z * static_cast<double>(K);
  return delta_z * (1.0 - std::pow(q, static_cast<double>(K))) / (1.0 - q);
}

double InverseGrid::response(double e, TimeScaling scaling) const {
  const double c = scaling == TimeScaling::kSqrtTwoZ ? 2.0 : 1.0;
  std::vector<double> s(static_cast<std::size_t>(K));
  for (std::int64_t k = 0; k < K; ++k) s[static_cast<std::size_t>(k)] = std::sqrt(c * z(k)) * e;
  return delta_z * hs.response_sum(s.data(), s.size());
}

InverseGrid calibrate_inverse_grid(double delta, double epsilon,
                                   const InverseGridOptions& options) {
  if (!(delta > 0.0) || delta > 1.0) throw ValidationError("calibrate_inverse_grid: need 0 < Delta <= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw ValidationError("calibrate_inverse_grid: need 0 < eps < 1");
  }
  if (!(options.c1 > 0.0) || !(options.c2 > 0.0)) {
    throw ValidationError("calibrate_inverse_grid: constants must be positive");
  }
  InverseGrid g;
  g.delta = delta;
  g.epsilon = epsilon;
  double z_k = options.c1 * std::max(std::log(1.0 / (delta * epsilon)), 1.0) / delta;
  double dz = options.c2 * epsilon;
  bool ok = false;
  for (int it = 0; it <= kMaxRefinements; ++it) {
    g.K = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(z_k / dz - 1e-9)));
    g.delta_z = dz;
    g.z_K = static_cast<double>(g.K) * dz;
    g.iterations = it;
    g.exp_sum_error = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = sample_point(delta, i);
      g.exp_sum_error = std::max(g.exp_sum_error, std::abs(1.0 / x - g.exp_sum(x)));
    }
    if (g.exp_sum_error <= epsilon / 4.0) {
      ok = true;
      break;
    }
    if (std::exp(-g.z_K * delta) / delta > epsilon / 8.0) {
      z_k = g.z_K * 1.25;
    } else {
      dz /= 2.0;
    }
  }
  if (!ok) throw CalibrationError("calibrate_inverse_grid: exponential sum did not converge");

  double inner_eps = epsilon / (2.0 * g.z_K);
  for (int attempt = 0; attempt < 6; ++attempt) {
    g.hs = calibrate_hs_grid(1.0, 2.0 * g.z_K, std::min(inner_eps, 0.5), PreconditionMode::kWarn);
    g.gamma = static_cast<double>(g.K) * g.delta_z * g.hs.weight_sum();
    g.max_scalar_error = 0.0;
    for (int i = 0; i < kSamples; ++i) {
      const double x = sample_point(delta, i);
      g.max_scalar_error =
          std::max(g.max_scalar_error, std::abs(1.0 / x - g.response(std::sqrt(x))));
    }
    if (g.max_scalar_error <= epsilon / 2.0) {
      g.warnings = g.hs.warnings;
      return g;
    }
    inner_eps /= 2.0;
  }
  throw CalibrationError("calibrate_inverse_grid: double sum did not reach eps/2");
}

LcuOperator inverse_lcu(const InverseGrid& grid, const GapAmplifiedHamiltonian& g,
                        TimeScaling scaling) {
  const ComplexMatrix sq = g.matrix() * g.matrix();
  const HermitianOperator h(g.ancilla_zero_sector(sq));
  const double lo = h.min_eigenvalue(), hi = h.max_eigenvalue();
  if (lo < grid.delta * (1.0 - 1e-9) || hi > 1.0 + 1e-9) {
    throw PreconditionError("inverse_lcu: spectrum [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "] is not inside [Delta, 1]");
  }
  EvolutionFamily fam;
  fam.generator = std::make_shared<const Eigensystem>(g.hamiltonian().eigensystem());
  const double c = scaling == TimeScaling::kSqrtTwoZ ? 2.0 : 1.0;
  const std::int64_t width = static_cast<std::int64_t>(grid.hs.size());
  fam.times.reserve(static_cast<std::size_t>(grid.K * width));
  fam.gammas.reserve(static_cast<std::size_t>(grid.K * width));
  for (std::int64_t k = 0; k < grid.K; ++k) {
    const double root = std::sqrt(c * grid.z(k));
    for (std::int64_t j = -grid.hs.J; j <= grid.hs.J; ++j) {
      fam.times.push_back(grid.hs.node(j) * root);
      fam.gammas.push_back(grid.delta_z * grid.hs.weights[static_cast<std::size_t>(j + grid.hs.J)]);
    }
  }
  fam.response = [grid, scaling](double e) { return Complex(grid.response(e, scaling), 0.0); };
  fam.even_response = true;
  return LcuOperator(std::move(fam));
}

double inverse_residual(const InverseGrid& grid, const ProjectorDecomposition& p,
                        const ComplexMatrix& states, TimeScaling scaling) {
  if (states.rows() != p.dim()) throw DimensionError("inverse_residual: dimension mismatch");
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  const LcuOperator x = inverse_lcu(grid, g, scaling);
  const ComplexMatrix got = x.apply(g.embed_columns(states));
  const ComplexMatrix want = g.embed_columns(inverse(p.hamiltonian()) * states);
  double worst = 0.0;
  for (Index c = 0; c < states.cols(); ++c) worst = std::max(worst, (got.col(c) - want.col(c)).norm());
  return worst;
}

double t_circuit_expectation(const InverseGrid& grid, const GapAmplifiedHamiltonian& g,
                             const MarkedPartition& mp, TimeScaling scaling) {
  const RealVector sqrt_pi = mp.pi_u_state().cwiseSqrt();
  if (sqrt_pi.size() != g.system_dim()) {
    throw DimensionError("t_circuit_expectation: Ht does not act on the unmarked set");
  }
  const LcuOperator x = inverse_lcu(grid, g, scaling);
  const ComplexVector psi = sqrt_pi.cast<Complex>();
  const ComplexVector out = x.apply(g.embed(psi));
  const Complex overlap = psi.dot(g.ancilla_zero_block(out));
  return std::clamp(mp.pi_u() * overlap.real() / x.gamma_total(), 0.0, 1.0);
}

std::int64_t ae_grover_count(double epsilon, double c_ae) {
  if (!(epsilon > 0.0) || !(c_ae > 0.0)) throw ValidationError("ae_grover_count: need eps > 0");
  const double m = std::ceil(c_ae / epsilon - 1e-9);
  if (m > 1e9) throw ValidationError("ae_grover_count: precision too fine");
  auto mi = static_cast<std::int64_t>(m);
  if (mi % 2 != 0) ++mi;
  return std::max<std::int64_t>(mi, 2);
}

std::vector<double> ae_outcome_distribution(double true_value, std::int64_t m) {
  if (!(true_value >= -1e-9 && true_value <= 1.0 + 1e-9)) {
    throw ValidationError("ae_outcome_distribution: value must lie in [0, 1]");
  }
  if (m < 1) throw ValidationError("ae_outcome_distribution: M must be positive");
  const double a = std::clamp(true_value, 0.0, 1.0);
  const double theta = std::asin(std::sqrt(a)) / std::numbers::pi;
  const double md = static_cast<double>(m);
  std::vector<double> pr(static_cast<std::size_t>(m));
  for (std::int64_t y = 0; y < m; ++y) {
    const double d = theta - static_cast<double>(y) / md;
    const double s = std::sin(std::numbers::pi * d);
    if (std::abs(s) < 1e-15) {
      pr[static_cast<std::size_t>(y)] = 1.0;
    } else {
      const double num = std::sin(md * std::numbers::pi * d);
      pr[static_cast<std::size_t>(y)] = num * num / (md * md * s * s);
    }
  }
  return pr;
}

AeResult amplitude_estimation(double true_value, double epsilon, double confidence,
                              std::uint64_t seed, double c_ae) {
  if (!(confidence > 0.0) || confidence > kAeConfidenceLimit) {
    throw ValidationError("amplitude_estimation: confidence must lie in (0, 8/pi^2]");
  }
  AeResult r;
  r.grover_queries = ae_grover_count(epsilon, c_ae);
  const auto pr = ae_outcome_distribution(true_value, r.grover_queries);
  Rng rng = make_rng(seed);
  const double u = uniform01(rng);
  double acc = 0.0;
  r.outcome = r.grover_queries - 1;
  for (std::size_t y = 0; y < pr.size(); ++y) {
    acc += pr[y];
    if (u < acc) {
      r.outcome = static_cast<std::int64_t>(y);
      break;
    }
  }
  const double s = std::sin(std::numbers::pi * static_cast<double>(r.outcome) /
                            static_cast<double>(r.grover_queries));
  r.estimate = s * s;
  return r;
}

HittingTimeResult estimate_hitting_time(const HittingTimeTask& task, std::uint64_t seed) {
  const MarkedPartition& mp = task.partition;
  if (!(task.epsilon > 0.0) || !(task.epsilon < 1.0)) {
    throw ValidationError("estimate_hitting_time: need 0 < eps < 1");
  }
  const DiscriminantPair dp = discriminant(mp);
  double delta = dp.delta;
  if (task.mode == HittingMode::kOracleFree) {
    if (!task.delta_lower_bound || !(*task.delta_lower_bound > 0.0)) {
      throw ValidationError("estimate_hitting_time: oracle-free mode needs delta_lower_bound > 0");
    }
    if (*task.delta_lower_bound > dp.delta * (1.0 + 1e-9)) {
      throw PreconditionError("estimate_hitting_time: delta_lower_bound exceeds lambda_min(H)");
    }
    delta = *task.delta_lower_bound;
  }
  if (!(delta > 0.0)) throw PreconditionError("estimate_hitting_time: H is singular");

  HittingTimeResult r;
  r.delta = delta;
  r.exact = exact_hitting_time_inverse(dp, mp);
  r.grid = calibrate_inverse_grid(std::min(delta, 1.0), task.epsilon, task.grid_options);

  std::optional<GapAmplifiedHamiltonian> g;
  if (task.route == ChainRoute::kDense) {
    g.emplace(build_tilde_h(ProjectorDecomposition::from_psd(dp.h)));
  } else {
    g.emplace(build_sparse_pipeline(SparseChainOracle(mp)).assembled.tilde_h);
  }
  r.exact_amplitude = t_circuit_expectation(r.grid, *g, mp, task.scaling);
  r.noiseless_estimate = r.grid.z_K * r.exact_amplitude;

  const double u = std::max(std::log(1.0 / (task.epsilon * delta)), 1.0);
  r.eps_prime = task.eps_prime_constant * task.epsilon * delta / u;
  const AeResult ae =
      amplitude_estimation(r.exact_amplitude, r.eps_prime, task.confidence, seed, task.c_ae);
  r.grover_queries = ae.grover_queries;
  r.estimate = r.grid.z_K * ae.estimate;
  r.error = std::abs(r.estimate - r.exact);

  const double t = r.grid.hs.y_J() * std::sqrt(2.0 * r.grid.z_K);
  const auto& chain = mp.chain();
  const CostReport sim = sparse_cost(static_cast<double>(chain.sparsity()),
                                     static_cast<double>(chain.n_states()), t, r.eps_prime,
                                     task.oracles.c_p, task.oracles.c_u, task.constants);
  r.cost.set("eps_prime", r.eps_prime, "eps' = c eps Delta / ln(1/(eps Delta))");
  r.cost.set("t", t, "t = y_J sqrt(2 z_K)");
  r.cost.set("tau", sim.get("tau"), "tau = |t| d^2");
  r.cost.set("C_W", sim.get("C_W"), "C_W = (d ln N + C_U + C_P) tau ln(tau/eps') / lnln(tau/eps')");
  r.cost.set("C_U", task.oracles.c_u, "marked-set oracle gate count (input)");
  r.cost.set("C_sqrt_pi", task.oracles.c_sqrt_pi, "stationary-state preparation (input)");
  r.cost.set("C_B", task.constants.b_gate * u, "C_B = c_B ln(1/(Delta eps))");
  r.cost.set("grover_queries", static_cast<double>(r.grover_queries), "M = ceil(c_AE / eps')");
  r.cost.set("ae_repetitions", 1.0, "one run at confidence <= 8/pi^2");
  r.cost.finalize();

  const double classical_steps =
      std::ceil(16.0 * exact_variance(mp) / (task.epsilon * task.epsilon)) * r.exact;
  r.classical_cost_comparison = std::make_pair(r.cost.total(), classical_steps);
  return r;
}

double resample_hitting_estimate(const HittingTimeResult& r, const HittingTimeTask& task,
                                 std::uint64_t seed) {
  return r.grid.z_K *
         amplitude_estimation(r.exact_amplitude, r.eps_prime, task.confidence, seed, task.c_ae)
             .estimate;
}

}  // namespace lculab
