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

#include "lculab/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lculab/error.hpp"

namespace lculab {

double log_ratio_factor(double ratio, bool* clamped) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw ValidationError("log_ratio_factor: ratio must be positive and finite");
  }
  const double ln = std::log(ratio);
  const double lnln = ln > 0.0 ? std::log(ln) : 0.0;
  const bool c = ln < 1.0 || lnln < 1.0;
  if (clamped) *clamped = c;
  return std::max(ln, 1.0) / std::max(lnln, 1.0);
}

void CostReport::set(const std::string& name, double value, const std::string& formula) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError("CostReport: entry " + name + " must be finite and nonnegative");
  }
  for (auto& e : entries_) {
    if (e.name == name) {
      e.value = value;
      e.formula = formula;
      return;
    }
  }
  entries_.push_back({name, value, formula});
}

bool CostReport::has(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const CostEntry& e) { return e.name == name; });
}

double CostReport::get(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.value;
  }
  throw ValidationError("CostReport: no entry named " + name);
}

double CostReport::recompute_total() const {
  auto opt = [&](const char* n) { return has(n) ? get(n) : 0.0; };
  switch (composition_) {
    case Composition::kSimulation:
      return get("C_W");
    case Composition::kGibbs:
      return get("amplification_rounds") * (get("C_W") + opt("C_prep") + opt("C_B"));
    case Composition::kHittingTime:
      return opt("ae_repetitions") * get("grover_queries") *
             (get("C_W") + opt("C_U") + opt("C_sqrt_pi") + opt("C_B"));
  }
  return 0.0;
}

void CostReport::finalize() {
  const char* rule = "";
  switch (composition_) {
    case Composition::kSimulation:
      rule = "total = C_W";
      break;
    case Composition::kGibbs:
      rule = "total = amplification_rounds * (C_W + C_prep + C_B)";
      break;
    case Composition::kHittingTime:
      rule = "total = ae_repetitions * grover_queries * (C_W + C_U + C_sqrt_pi + C_B)";
      break;
  }
  set("total", recompute_total(), rule);
}

CostReport sparse_cost(double sparsity, double dim, double time, double epsilon, double c_p,
                       double c_u, const CostConstants& k) {
  if (!(sparsity > 0) || !(dim > 0) || !(epsilon > 0) || c_p < 0 || c_u < 0 || time == 0.0) {
    throw ValidationError("sparse_cost: inputs must be positive");
  }
  const double tau = std::abs(time) * sparsity * sparsity;
  const double factor = log_ratio_factor(tau / epsilon);
  const double per_query = sparsity * std::log(dim) + c_u + c_p;
  CostReport r(CostReport::Composition::kSimulation);
  r.set("tau", tau, "tau = |t| d^2");
  r.set("queries", k.queries * tau * factor, "tau ln(tau/eps) / lnln(tau/eps)");
  r.set("C_P", c_p, "transition-oracle gate count (input)");
  r.set("C_U", c_u, "marked-set oracle gate count (input)");
  r.set("C_W", k.sparse_gates * per_query * tau * factor,
        "C_W = (d ln N + C_U + C_P) tau ln(tau/eps) / lnln(tau/eps)");
  r.finalize();
  return r;
}

CostReport theorem1_cost(double dim, double partition_function, double beta, double epsilon,
                         const Theorem1Params& p, const CostConstants& k) {
  if (!(dim > 0) || !(partition_function > 0) || beta < 0 || !(epsilon > 0) || p.norm < 0 ||
      p.sum_sqrt_alpha < 0 || p.terms < 0) {
    throw ValidationError("theorem1_cost: inputs must be positive");
  }
  CostReport r(CostReport::Composition::kGibbs);
  const double ratio = dim / partition_function;
  const double eps_prime = k.eps_prime * epsilon / std::sqrt(ratio);
  const double log_inv = std::max(std::log(1.0 / eps_prime), 1.0);
  const double t = k.evolution_time * std::sqrt(beta * log_inv);
  const double j = std::sqrt(p.norm * beta) * log_inv;
  r.set("eps_prime", eps_prime, "eps' = c eps sqrt(Z/N)");
  r.set("t", t, "t = sqrt(beta ln(1/eps'))");
  r.set("J", j, "J = sqrt(||H|| beta) ln(1/eps')");
  const double tau = t * p.sum_sqrt_alpha;
  double cw = 0.0;
  if (tau > 0.0) {
    const double f = log_ratio_factor(tau / eps_prime);
    const double gates_per = p.terms > 1 ? std::log(p.terms) * p.c_u + p.terms : p.terms;
    cw = k.total_gates * gates_per * tau * f;
  }
  r.set("tau", tau, "tau = t * sum_k sqrt(alpha_k)");
  r.set("C_W", cw, "C_W = (ln K C_U + K) tau ln(tau/eps') / lnln(tau/eps')");
  r.set("C_prep", std::log2(dim), "n = log2 N (maximally entangled state)");
  r.set("C_B", k.b_gate * std::log2(2.0 * j + 1.0), "log2(2J + 1)");
  r.set("amplification_rounds", std::sqrt(ratio), "sqrt(N/Z)");
  r.set("ae_repetitions", 1.0, "not used");
  r.finalize();
  const double s = std::sqrt(ratio * std::max(beta, 0.0));
  const double lg = s > 0 ? std::log(std::max(s / epsilon, std::numbers::e)) : 0.0;
  r.set("qubit_form", s * lg * lg, "sqrt(N beta/Z) ln^2(sqrt(N beta/Z)/eps)");
  return r;
}

CostReport theorem2_cost(double delta, double epsilon, double sparsity, double dim,
                         const OracleCosts& o, const CostConstants& k) {
  if (!(delta > 0) || !(epsilon > 0) || !(sparsity > 0) || !(dim > 0)) {
    throw ValidationError("theorem2_cost: inputs must be positive");
  }
  const double u = std::max(std::log(1.0 / (epsilon * delta)), 1.0);
  const double eps_prime = k.eps_prime * epsilon * delta / u;
  const double t = k.evolution_time * u / std::sqrt(delta);
  const CostReport sim = sparse_cost(sparsity, dim, t, eps_prime, o.c_p, o.c_u, k);
  CostReport r(CostReport::Composition::kHittingTime);
  r.set("eps_prime", eps_prime, "eps' = c eps Delta / ln(1/(eps Delta))");
  r.set("t", t, "t = ln(1/(eps Delta)) / sqrt(Delta)");
  r.set("tau", sim.get("tau"), "tau = |t| d^2");
  r.set("C_W", sim.get("C_W"), "C_W = (d ln N + C_U + C_P) tau ln(tau/eps') / lnln(tau/eps')");
  r.set("C_P", o.c_p, "transition-oracle gate count (input)");
  r.set("C_U", o.c_u, "marked-set oracle gate count (input)");
  r.set("C_sqrt_pi", o.c_sqrt_pi, "stationary-state preparation gate count (input)");
  r.set("C_B", k.b_gate * u, "C_B = c_B ln(1/(Delta eps))");
  r.set("grover_queries", 1.0 / eps_prime, "1/eps' uses of T");
  r.set("ae_repetitions", 1.0, "single amplitude-estimation run at confidence 8/pi^2");
  r.set("amplification_rounds", 0.0, "not used");
  r.finalize();
  return r;
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) {
    throw ValidationError("fit_scaling: need at least 4 points");
  }
  double xmin = points.front().first, xmax = xmin;
  for (const auto& [x, y] : points) {
    if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) {
      throw ValidationError("fit_scaling: coordinates must be positive and finite");
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (xmax / xmin < 10.0 * (1.0 - 1e-12)) {
    throw ValidationError("fit_scaling: x spread is less than one decade");
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx, dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace lculab
