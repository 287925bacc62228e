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

#include "lculab/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lculab/error.hpp"

namespace lculab {

namespace {

constexpr int kCalibrationSamples = 64;
constexpr int kMaxRefinements = 20;

std::vector<double> gaussian_weights(double delta_y, std::int64_t J) {
  std::vector<double> w(static_cast<std::size_t>(2 * J + 1));
  const double c = delta_y / std::sqrt(2.0 * std::numbers::pi);
  for (std::int64_t j = -J; j <= J; ++j) {
    const double y = static_cast<double>(j) * delta_y;
    w[static_cast<std::size_t>(j + J)] = c * std::exp(-0.5 * y * y);
  }
  return w;
}

double sampled_error(const HsGrid& g) {
  double worst = 0.0;
  for (int i = 0; i < kCalibrationSamples; ++i) {
    const double x = g.norm_bound * i / (kCalibrationSamples - 1);
    const double err = std::abs(std::exp(-0.5 * g.beta * x) - g.response(std::sqrt(g.beta * x)));
    worst = std::max(worst, err);
  }
  return worst;
}

void check_precondition(bool ok, const std::string& msg, PreconditionMode mode,
                        std::vector<std::string>& warnings) {
  if (ok) return;
  if (mode == PreconditionMode::kStrict) throw PreconditionError(msg);
  warnings.push_back(msg);
}

}  // namespace

double HsGrid::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double HsGrid::response(double s) const {
  // sum_j w_j cos(j theta) by the Chebyshev recurrence.
  const double theta = delta_y * s;
  const double c1 = std::cos(theta);
  double prev = 1.0, cur = c1;
  double total = weights[static_cast<std::size_t>(J)];
  for (std::int64_t j = 1; j <= J; ++j) {
    total += 2.0 * weights[static_cast<std::size_t>(J + j)] * cur;
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
  }
  return total;
}

double HsGrid::response_sum(const double* s, std::size_t n) const {
  constexpr std::size_t kBlock = 16;
  double out = 0.0;
  for (std::size_t base = 0; base < n; base += kBlock) {
    const std::size_t m = std::min(kBlock, n - base);
    double c1[kBlock], prev[kBlock], cur[kBlock], total[kBlock];
    const double w0 = weights[static_cast<std::size_t>(J)];
    for (std::size_t i = 0; i < kBlock; ++i) {
      c1[i] = i < m ? std::cos(delta_y * s[base + i]) : 1.0;
      prev[i] = 1.0;
      cur[i] = c1[i];
      total[i] = w0;
    }
    for (std::int64_t j = 1; j <= J; ++j) {
      const double w2 = 2.0 * weights[static_cast<std::size_t>(J + j)];
      for (std::size_t i = 0; i < kBlock; ++i) {
        total[i] += w2 * cur[i];
        const double next = 2.0 * c1[i] * cur[i] - prev[i];
        prev[i] = cur[i];
        cur[i] = next;
      }
    }
    for (std::size_t i = 0; i < m; ++i) out += total[i];
  }
  return out;
}

HsGrid make_hs_grid(double delta_y, std::int64_t J, double beta, double epsilon_prime,
                    double norm_bound) {
  if (!(delta_y > 0.0) || J < 0 || beta < 0.0 || !(epsilon_prime > 0.0) || norm_bound < 0.0) {
    throw ValidationError("make_hs_grid: invalid parameters");
  }
  HsGrid g;
  g.J = J;
  g.delta_y = delta_y;
  g.beta = beta;
  g.epsilon_prime = epsilon_prime;
  g.norm_bound = norm_bound;
  g.weights = gaussian_weights(delta_y, J);
  g.tail_bound = std::erfc(g.y_J() / std::numbers::sqrt2);
  g.max_scalar_error = sampled_error(g);
  return g;
}

HsGrid calibrate_hs_grid(double norm_bound, double beta, double epsilon_prime,
                         PreconditionMode mode) {
  if (!std::isfinite(norm_bound) || norm_bound < 0.0 || !std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("calibrate_hs_grid: norm bound and beta must be finite and >= 0");
  }
  if (!(epsilon_prime > 0.0) || !(epsilon_prime < 1.0)) {
    throw ValidationError("calibrate_hs_grid: epsilon' must lie in (0, 1)");
  }
  std::vector<std::string> warnings;
  const double log_inv = std::log(1.0 / epsilon_prime);
  check_precondition(norm_bound * beta >= 4.0,
                     "||H|| beta = " + std::to_string(norm_bound * beta) + " < 4", mode, warnings);
  check_precondition(log_inv >= 4.0,
                     "log(1/eps') = " + std::to_string(log_inv) + " < 4", mode, warnings);

  double delta_y = 1.0 / std::sqrt(std::max(norm_bound * beta, 1.0) * log_inv);
  double y_j = std::sqrt(log_inv);
  for (int it = 0; it <= kMaxRefinements; ++it) {
    const auto J = static_cast<std::int64_t>(std::ceil(y_j / delta_y - 1e-9));
    HsGrid g = make_hs_grid(delta_y, J, beta, epsilon_prime, norm_bound);
    g.iterations = it;
    if (g.max_scalar_error <= epsilon_prime / 2.0) {
      g.warnings = std::move(warnings);
      return g;
    }
    if (g.tail_bound > epsilon_prime / 4.0) {
      y_j *= 1.25;
    } else {
      delta_y /= 2.0;
    }
  }
  throw CalibrationError("calibrate_hs_grid: no grid reached eps'/2 within " +
                         std::to_string(kMaxRefinements) + " refinements");
}

namespace {

void check_grid(const HsGrid& grid, const GapAmplifiedHamiltonian& g) {
  if (grid.weights.size() != static_cast<std::size_t>(2 * grid.J + 1)) {
    throw ValidationError("hs_lcu: malformed grid");
  }
  if (g.dim() <= 0) throw DimensionError("hs_lcu: empty Hamiltonian");
}

}  // namespace

LcuOperator hs_lcu(const HsGrid& grid, const GapAmplifiedHamiltonian& g) {
  check_grid(grid, g);
  EvolutionFamily fam;
  fam.generator = std::make_shared<const Eigensystem>(g.hamiltonian().eigensystem());
  const double sb = std::sqrt(grid.beta);
  for (std::int64_t j = -grid.J; j <= grid.J; ++j) {
    fam.times.push_back(grid.node(j) * sb);
    fam.gammas.push_back(grid.weights[static_cast<std::size_t>(j + grid.J)]);
  }
  fam.response = [grid, sb](double e) { return Complex(grid.response(sb * e), 0.0); };
  fam.even_response = true;
  return LcuOperator(std::move(fam));
}

LcuOperator hs_lcu_dense(const HsGrid& grid, const GapAmplifiedHamiltonian& g) {
  check_grid(grid, g);
  const Eigensystem& es = g.hamiltonian().eigensystem();
  const double sb = std::sqrt(grid.beta);
  std::vector<LcuTerm> terms;
  for (std::int64_t j = -grid.J; j <= grid.J; ++j) {
    const double t = grid.node(j) * sb;
    terms.push_back({grid.weights[static_cast<std::size_t>(j + grid.J)],
                     matrix_function(es, [t](double e) { return std::exp(Complex(0.0, -t * e)); })});
  }
  return LcuOperator(g.dim(), std::move(terms));
}

LcuOperator hs_lcu_perturbed(const HsGrid& grid, const GapAmplifiedHamiltonian& g,
                             double perturbation, Rng& rng) {
  if (!(perturbation >= 0.0) || !(perturbation < 2.0)) {
    throw ValidationError("hs_lcu_perturbed: perturbation must lie in [0, 2)");
  }
  LcuOperator exact = hs_lcu_dense(grid, g);
  const double theta = 2.0 * std::asin(perturbation / 2.0);
  std::vector<LcuTerm> terms;
  for (const auto& t : exact.terms()) {
    const HermitianOperator k = random_hermitian(g.dim(), rng);
    const double scale = k.norm() > 0.0 ? theta / k.norm() : 0.0;
    const ComplexMatrix kick =
        matrix_function(k, [scale](double e) { return std::exp(Complex(0.0, -scale * e)); });
    terms.push_back({t.gamma, t.unitary * kick});
  }
  return LcuOperator(g.dim(), std::move(terms));
}

double hs_residual(const HsGrid& grid, const ProjectorDecomposition& p,
                   const ComplexMatrix& states) {
  if (states.rows() != p.dim()) throw DimensionError("hs_residual: dimension mismatch");
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  const LcuOperator x = hs_lcu(grid, g);
  const double beta = grid.beta;
  const ComplexMatrix target = matrix_function(
      p.hamiltonian(), [beta](double e) { return Complex(std::exp(-0.5 * beta * e)); });
  const ComplexMatrix got = x.apply(g.embed_columns(states));
  const ComplexMatrix want = g.embed_columns(target * states);
  double worst = 0.0;
  for (Index c = 0; c < states.cols(); ++c) worst = std::max(worst, (got.col(c) - want.col(c)).norm());
  return worst;
}

StateVector maximally_entangled_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 6) {
    throw ValidationError("maximally_entangled_state: n must lie in [1, 6]");
  }
  const Index n = Index{1} << n_qubits;
  ComplexVector v = ComplexVector::Zero(n * n);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index s = 0; s < n; ++s) v(s * n + s) = a;
  return StateVector(v);
}

double partition_function(const ProjectorDecomposition& p, double beta) {
  const HermitianOperator h = p.hamiltonian();
  double z = 0.0;
  for (Index i = 0; i < h.dim(); ++i) z += std::exp(-beta * h.eigensystem().values(i));
  return z;
}

DensityMatrix thermal_state(const ProjectorDecomposition& p, double beta) {
  const HermitianOperator h = p.hamiltonian();
  const double shift = h.min_eigenvalue();
  ComplexMatrix m =
      matrix_function(h, [beta, shift](double e) { return Complex(std::exp(-beta * (e - shift))); });
  m /= m.trace().real();
  return DensityMatrix(m);
}

GibbsResult prepare_gibbs(const GibbsTask& task) {
  const ProjectorDecomposition& p = task.decomposition;
  if (!std::isfinite(task.beta) || task.beta < 0.0) {
    throw ValidationError("prepare_gibbs: beta must be finite and >= 0");
  }
  if (!(task.epsilon > 0.0) || !(task.epsilon < 1.0)) {
    throw ValidationError("prepare_gibbs: epsilon must lie in (0, 1)");
  }
  if (!(task.eps_prime_constant > 0.0)) {
    throw ValidationError("prepare_gibbs: eps' constant must be positive");
  }
  const Index n_dim = p.dim();
  const double N = static_cast<double>(n_dim);
  const double z_exact = partition_function(p, task.beta);
  if (!(z_exact > 0.0)) throw AnnihilationError("prepare_gibbs: partition function is zero");

  double z_used = z_exact;
  if (task.mode == GibbsMode::kOracleFree) {
    if (!task.z_lower_bound || !(*task.z_lower_bound > 0.0)) {
      throw ValidationError("prepare_gibbs: oracle-free mode needs a positive z_lower_bound");
    }
    z_used = std::min(*task.z_lower_bound, N);
  }
  const double eps_prime = task.eps_prime_constant * task.epsilon * std::sqrt(z_used / N);

  const double norm = p.hamiltonian().norm();
  HsGrid grid = calibrate_hs_grid(norm, task.beta, eps_prime, task.precondition_mode);
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  const LcuOperator x = hs_lcu(grid, g);

  // |phi_0> with the purification register as the column index.
  const ComplexMatrix phi0 =
      g.embed_columns(ComplexMatrix::Identity(n_dim, n_dim) / std::sqrt(N));
  const LcuBlockResult run = apply_lcu_columns(x, phi0, task.lcu);

  ComplexMatrix rho = partial_trace_right(run.output * run.output.adjoint(), n_dim,
                                          g.ancilla_dim());
  rho = (rho + rho.adjoint()) / 2.0;
  rho /= rho.trace().real();

  GibbsResult r{DensityMatrix(rho), thermal_state(p, task.beta)};
  r.trace_dist = trace_distance(r.prepared_density, r.exact_density);
  r.success_amplitude = run.success_amplitude;
  r.partition_function = z_exact;
  r.eps_prime = eps_prime;
  r.amplification_rounds = run.amplification_rounds;
  r.rounds_inverse_form = run.rounds_inverse_form;
  r.warnings = grid.warnings;
  r.grid = grid;

  const double t = grid.y_J() * std::sqrt(task.beta);
  const double tau = t * p.sum_sqrt_alpha();
  const double k_terms = 2.0 * static_cast<double>(p.size());
  double cw = 0.0;
  if (tau > 0.0 && k_terms > 0.0) {
    SimulationCostModel m;
    m.tau = tau;
    m.epsilon = eps_prime;
    m.terms = k_terms;
    m.c_u = task.c_u;
    m.constants = task.constants;
    cw = simulation_query_cost(m).total_gates;
  }
  r.cost.set("eps_prime", eps_prime, "eps' = c eps sqrt(Z/N)");
  r.cost.set("t", t, "t = y_J sqrt(beta)");
  r.cost.set("J", static_cast<double>(grid.J), "grid half-width");
  r.cost.set("tau", tau, "tau = t * sum_k sqrt(alpha_k)");
  r.cost.set("C_W", cw, "C_W = (ln K C_U + K) tau ln(tau/eps') / lnln(tau/eps')");
  r.cost.set("C_prep", std::log2(N), "n = log2 N");
  r.cost.set("C_B", task.constants.b_gate * std::log2(2.0 * static_cast<double>(grid.J) + 1.0),
             "log2(2J + 1)");
  r.cost.set("amplification_rounds", static_cast<double>(run.amplification_rounds),
             "ceil(c_a (pi/4) / asin(a))");
  r.cost.finalize();
  return r;
}

}  // namespace lculab
