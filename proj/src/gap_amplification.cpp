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

#include "lculab/gap_amplification.hpp"

#include <cmath>

#include "lculab/error.hpp"

namespace lculab {

ProjectorDecomposition::ProjectorDecomposition(Index dim, std::vector<ProjectorTerm> terms,
                                               double identity_offset)
    : dim_(dim), terms_(std::move(terms)), offset_(identity_offset) {
  if (dim <= 0 || dim > kMaxDimension) {
    throw DimensionError("ProjectorDecomposition: invalid dimension");
  }
  if (!std::isfinite(identity_offset)) {
    throw ValidationError("ProjectorDecomposition: non-finite identity offset");
  }
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    const std::string where = "ProjectorDecomposition term " + std::to_string(k);
    if (!(t.alpha > 0.0) || !std::isfinite(t.alpha)) {
      throw ValidationError(where + ": alpha must be positive, got " + std::to_string(t.alpha));
    }
    if (t.projector.rows() != dim || t.projector.cols() != dim) {
      throw DimensionError(where + ": projector has wrong shape");
    }
    require_finite(t.projector, where.c_str());
    if (max_abs_entry(t.projector - t.projector.adjoint()) > kProjectorTolerance) {
      throw ValidationError(where + ": projector is not Hermitian");
    }
    if (max_abs_entry(t.projector * t.projector - t.projector) > kProjectorTolerance) {
      throw ValidationError(where + ": projector is not idempotent");
    }
  }
}

ProjectorDecomposition ProjectorDecomposition::from_psd(const HermitianOperator& h,
                                                        double zero_tolerance) {
  const auto& es = h.eigensystem();
  std::vector<ProjectorTerm> terms;
  for (Index i = 0; i < es.values.size(); ++i) {
    const double lambda = es.values(i);
    if (lambda < -zero_tolerance) {
      throw ValidationError("from_psd: operator has negative eigenvalue " +
                            std::to_string(lambda));
    }
    if (lambda <= zero_tolerance) continue;
    const ComplexVector v = es.vectors.col(i);
    terms.push_back({lambda, v * v.adjoint()});
  }
  return ProjectorDecomposition(h.dim(), std::move(terms));
}

ComplexMatrix ProjectorDecomposition::reconstruct() const {
  ComplexMatrix h = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& t : terms_) h += t.alpha * t.projector;
  return h;
}

double ProjectorDecomposition::sum_alpha() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.alpha;
  return s;
}

double ProjectorDecomposition::sum_sqrt_alpha() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::sqrt(t.alpha);
  return s;
}

UnitaryDecomposition::UnitaryDecomposition(Index dim, std::vector<UnitaryTerm> terms,
                                           double prefactor, bool involutory)
    : dim_(dim), terms_(std::move(terms)), prefactor_(prefactor), involutory_(involutory) {
  if (dim <= 0 || dim > kMaxDimension) {
    throw DimensionError("UnitaryDecomposition: invalid dimension");
  }
  if (!(prefactor > 0.0)) throw ValidationError("UnitaryDecomposition: prefactor must be > 0");
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    const std::string where = "UnitaryDecomposition term " + std::to_string(k);
    if (!(t.alpha > 0.0) || !std::isfinite(t.alpha)) {
      throw ValidationError(where + ": alpha must be positive");
    }
    if (t.unitary.rows() != dim || t.unitary.cols() != dim) {
      throw DimensionError(where + ": unitary has wrong shape");
    }
    if (!is_unitary(t.unitary, kProjectorTolerance)) {
      throw ValidationError(where + ": not unitary");
    }
    if (involutory && max_abs_entry(t.unitary * t.unitary - id) > kProjectorTolerance) {
      throw ValidationError(where + ": not involutory (U^2 != 1)");
    }
  }
}

ComplexMatrix UnitaryDecomposition::reconstruct() const {
  ComplexMatrix h = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& t : terms_) h += t.alpha * t.unitary;
  return prefactor_ * h;
}

double UnitaryDecomposition::weight() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.alpha;
  return prefactor_ * s;
}

ProjectorDecomposition projectors_from_unitaries(const UnitaryDecomposition& u) {
  if (!u.involutory()) {
    throw ValidationError("projectors_from_unitaries: unitaries must be involutory");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(u.dim(), u.dim());
  std::vector<ProjectorTerm> terms;
  double offset = 0.0;
  // p alpha U = 2 p alpha Pi - p alpha.
  for (const auto& t : u.terms()) {
    const double a = u.prefactor() * t.alpha;
    terms.push_back({2.0 * a, (t.unitary + id) / 2.0});
    offset += a;
  }
  return ProjectorDecomposition(u.dim(), std::move(terms), offset);
}

namespace {

HermitianOperator assemble(Index n, const std::vector<ComplexMatrix>& roots) {
  const Index a = static_cast<Index>(roots.size()) + 1;
  ComplexMatrix m = ComplexMatrix::Zero(n * a, n * a);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const Index level = static_cast<Index>(k) + 1;
    const ComplexMatrix& r = roots[k];
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (r(i, j) == Complex(0.0)) continue;
        m(i * a + level, j * a) += r(i, j);
        m(i * a, j * a + level) += r(i, j);
      }
    }
  }
  return HermitianOperator(m);
}

}  // namespace

GapAmplifiedHamiltonian::GapAmplifiedHamiltonian(Index system_dim,
                                                 std::vector<ComplexMatrix> root_blocks,
                                                 std::optional<ProjectorDecomposition> source)
    : system_dim_(system_dim),
      ancilla_dim_(static_cast<Index>(root_blocks.size()) + 1),
      roots_(std::move(root_blocks)),
      source_(std::move(source)),
      matrix_((system_dim > 0 && system_dim * (static_cast<Index>(roots_.size()) + 1) <=
                                    kMaxDimension)
                  ? assemble(system_dim, roots_)
                  : throw DimensionError("GapAmplifiedHamiltonian: dimension out of range")) {
  for (const auto& r : roots_) {
    if (r.rows() != system_dim || r.cols() != system_dim) {
      throw DimensionError("GapAmplifiedHamiltonian: root block has wrong shape");
    }
    norm_bound_ += spectral_norm(r);
  }
}

GapAmplifiedHamiltonian build_tilde_h(const ProjectorDecomposition& p) {
  std::vector<ComplexMatrix> roots;
  roots.reserve(p.size());
  for (const auto& t : p.terms()) roots.push_back(std::sqrt(t.alpha) * t.projector);
  return GapAmplifiedHamiltonian(p.dim(), std::move(roots), p);
}

ComplexVector GapAmplifiedHamiltonian::embed(const ComplexVector& phi) const {
  if (phi.size() != system_dim_) throw DimensionError("embed: dimension mismatch");
  ComplexVector out = ComplexVector::Zero(dim());
  for (Index s = 0; s < system_dim_; ++s) out(s * ancilla_dim_) = phi(s);
  return out;
}

ComplexMatrix GapAmplifiedHamiltonian::embed_columns(const ComplexMatrix& phis) const {
  if (phis.rows() != system_dim_) throw DimensionError("embed_columns: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(dim(), phis.cols());
  for (Index s = 0; s < system_dim_; ++s) out.row(s * ancilla_dim_) = phis.row(s);
  return out;
}

ComplexVector GapAmplifiedHamiltonian::ancilla_zero_block(const ComplexVector& v) const {
  if (v.size() != dim()) throw DimensionError("ancilla_zero_block: dimension mismatch");
  ComplexVector out(system_dim_);
  for (Index s = 0; s < system_dim_; ++s) out(s) = v(s * ancilla_dim_);
  return out;
}

ComplexMatrix GapAmplifiedHamiltonian::ancilla_zero_sector(const ComplexMatrix& op) const {
  if (op.rows() != dim() || op.cols() != dim()) {
    throw DimensionError("ancilla_zero_sector: dimension mismatch");
  }
  ComplexMatrix out(system_dim_, system_dim_);
  for (Index i = 0; i < system_dim_; ++i) {
    for (Index j = 0; j < system_dim_; ++j) out(i, j) = op(i * ancilla_dim_, j * ancilla_dim_);
  }
  return out;
}

ComplexMatrix ancilla_coupling(Index dim, Index k) {
  if (k <= 0 || k >= dim) throw DimensionError("ancilla_coupling: level out of range");
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  a(k, 0) = 1.0;
  a(0, k) = 1.0;
  return a;
}

ComplexMatrix ancilla_rotation(Index dim, Index k, int sign) {
  // A^2 is the projector onto span{|0>, |k>}, so
  // exp(-i s (pi/2) A) = (1 - A^2) - i s A.
  const ComplexMatrix a = ancilla_coupling(dim, k);
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  return (id - a * a) - Complex(0.0, static_cast<double>(sign)) * a;
}

UnitaryDecomposition tilde_h_unitary_terms(const GapAmplifiedHamiltonian& g) {
  if (!g.source()) {
    throw ValidationError("tilde_h_unitary_terms: needs a projector-presented Hamiltonian");
  }
  const auto& p = *g.source();
  const Index n = g.system_dim();
  const Index a = g.ancilla_dim();
  const ComplexMatrix id_n = ComplexMatrix::Identity(n, n);
  const ComplexMatrix id_a = ComplexMatrix::Identity(a, a);
  const Complex i(0.0, 1.0);
  std::vector<UnitaryTerm> terms;
  terms.reserve(2 * p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto& t = p.terms()[k];
    const Index level = static_cast<Index>(k) + 1;
    const ComplexMatrix rot_minus = ancilla_rotation(a, level, +1);  // e^{-i(pi/2)A}
    const ComplexMatrix rot_plus = ancilla_rotation(a, level, -1);   // e^{+i(pi/2)A}
    const ComplexMatrix complement = id_n - t.projector;
    const double w = std::sqrt(t.alpha) / 2.0;
    terms.push_back({w, kron(t.projector, i * rot_minus) + kron(complement, id_a)});
    terms.push_back({w, kron(t.projector, -i * rot_plus) - kron(complement, id_a)});
  }
  return UnitaryDecomposition(g.dim(), std::move(terms), 1.0, /*involutory=*/false);
}

ComplexMatrix exact_evolution(const GapAmplifiedHamiltonian& g, double t) {
  if (!std::isfinite(t)) throw ValidationError("exact_evolution: time must be finite");
  return matrix_function(g.hamiltonian(),
                         [t](double e) { return std::exp(Complex(0.0, -e * t)); });
}

double tau_from_unitary_terms(double t, const UnitaryDecomposition& terms) {
  return std::abs(t) * terms.weight();
}

double tau_from_sqrt_alpha(double t, const ProjectorDecomposition& p) {
  return std::abs(t) * p.sum_sqrt_alpha();
}

std::string to_string(TauSource s) {
  return s == TauSource::kSumAlphaTilde ? "sum_alpha_tilde" : "sum_sqrt_alpha";
}

SimulationCost simulation_query_cost(const SimulationCostModel& m) {
  if (!(m.tau > 0.0) || !(m.epsilon > 0.0) || !std::isfinite(m.tau)) {
    throw ValidationError("simulation_query_cost: tau and epsilon must be positive");
  }
  if (!(m.terms > 0.0) || m.c_u < 0.0) {
    throw ValidationError("simulation_query_cost: K must be positive");
  }
  SimulationCost c;
  c.log_factor = log_ratio_factor(m.tau / m.epsilon, &c.clamped);
  c.tau_source = m.tau_source;
  const double base = m.tau * c.log_factor;
  c.queries = m.constants.queries * base;
  c.extra_gates = m.constants.extra_gates * m.terms * base;
  c.total_gates = m.constants.total_gates * (std::log(m.terms) * m.c_u + m.terms) * base;
  return c;
}

}  // namespace lculab
