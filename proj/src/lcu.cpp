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

#include "lculab/lcu.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lculab/error.hpp"

namespace lculab {

struct LcuOperator::ResponseCache {
  std::once_flag once;
  ComplexVector values;
};

LcuOperator::LcuOperator(Index dim, std::vector<LcuTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim <= 0 || dim > kMaxDimension) throw DimensionError("LcuOperator: invalid dimension");
  if (terms_.empty()) throw ValidationError("LcuOperator: no terms");
  for (std::size_t l = 0; l < terms_.size(); ++l) {
    const auto& t = terms_[l];
    const std::string where = "LcuOperator term " + std::to_string(l);
    if (!(t.gamma > 0.0) || !std::isfinite(t.gamma)) {
      throw ValidationError(where + ": gamma must be positive");
    }
    if (t.unitary.rows() != dim || t.unitary.cols() != dim) {
      throw DimensionError(where + ": unitary has wrong shape");
    }
    if (!is_unitary(t.unitary, 1e-10)) throw ValidationError(where + ": not unitary");
    gamma_total_ += t.gamma;
  }
}

LcuOperator::LcuOperator(EvolutionFamily family) {
  if (!family.generator) throw ValidationError("LcuOperator: missing generator");
  if (family.times.empty() || family.times.size() != family.gammas.size()) {
    throw ValidationError("LcuOperator: times and gammas must be non-empty and equal length");
  }
  for (std::size_t l = 0; l < family.gammas.size(); ++l) {
    if (!(family.gammas[l] > 0.0) || !std::isfinite(family.gammas[l])) {
      throw ValidationError("LcuOperator family term " + std::to_string(l) +
                            ": gamma must be positive");
    }
    if (!std::isfinite(family.times[l])) {
      throw ValidationError("LcuOperator family term " + std::to_string(l) +
                            ": time must be finite");
    }
    gamma_total_ += family.gammas[l];
  }
  dim_ = family.generator->values.size();
  family_ = std::make_shared<const EvolutionFamily>(std::move(family));
  cache_ = std::make_shared<ResponseCache>();
}

std::size_t LcuOperator::size() const { return family_ ? family_->times.size() : terms_.size(); }

Complex LcuOperator::family_response(double e) const {
  if (!family_) throw ValidationError("family_response: not an evolution family");
  Complex s(0.0);
  for (std::size_t l = 0; l < family_->times.size(); ++l) {
    s += family_->gammas[l] * std::exp(Complex(0.0, -family_->times[l] * e));
  }
  return s;
}

ComplexVector LcuOperator::spectral_response() const {
  if (!family_) throw ValidationError("spectral_response: not an evolution family");
  std::call_once(cache_->once, [this] {
    const RealVector& ev = family_->generator->values;
    const auto eval = [this](double e) {
      return family_->response ? family_->response(e) : family_response(e);
    };
    ComplexVector f(ev.size());
    if (!family_->even_response) {
      for (Index i = 0; i < ev.size(); ++i) f(i) = eval(ev(i));
    } else {
      std::vector<Index> order(static_cast<std::size_t>(ev.size()));
      for (Index i = 0; i < ev.size(); ++i) order[static_cast<std::size_t>(i)] = i;
      std::sort(order.begin(), order.end(),
                [&ev](Index a, Index b) { return std::abs(ev(a)) < std::abs(ev(b)); });
      double last = -1.0;
      Complex value(0.0);
      for (Index i : order) {
        const double m = std::abs(ev(i));
        if (last < 0.0 || m - last > 1e-12 * std::max(1.0, m)) {
          value = eval(m);
          last = m;
        }
        f(i) = value;
      }
    }
    cache_->values = std::move(f);
  });
  return cache_->values;
}

ComplexMatrix LcuOperator::apply(const ComplexMatrix& columns) const {
  if (columns.rows() != dim_) throw DimensionError("LcuOperator::apply: dimension mismatch");
  if (family_) {
    const ComplexMatrix& v = family_->generator->vectors;
    ComplexMatrix c = v.adjoint() * columns;
    c = spectral_response().asDiagonal() * c;
    return v * c;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_, columns.cols());
  for (const auto& t : terms_) out.noalias() += t.gamma * (t.unitary * columns);
  return out;
}

ComplexMatrix LcuOperator::matrix() const {
  return apply(ComplexMatrix::Identity(dim_, dim_));
}

StateVector b_state(const std::vector<double>& weights) {
  if (weights.empty()) throw ValidationError("b_state: empty weight list");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("b_state: weights must be > 0");
    total += w;
  }
  ComplexVector a(static_cast<Index>(weights.size()));
  for (std::size_t l = 0; l < weights.size(); ++l) {
    a(static_cast<Index>(l)) = std::sqrt(weights[l] / total);
  }
  return StateVector::normalized(a);
}

std::int64_t amplification_rounds(double a, double c_a) {
  if (!(a > 0.0)) throw AnnihilationError("amplification_rounds: zero success amplitude");
  const double s = std::asin(std::min(a, 1.0));
  return static_cast<std::int64_t>(std::ceil(c_a * (std::numbers::pi / 4.0) / s - 1e-12));
}

std::int64_t rounds_inverse_form(double a, double c_a) {
  if (!(a > 0.0)) throw AnnihilationError("rounds_inverse_form: zero success amplitude");
  return static_cast<std::int64_t>(std::ceil(c_a / std::min(a, 1.0) - 1e-12));
}

namespace {

double clamp_amplitude(double a) { return a > 1.0 && a < 1.0 + 1e-9 ? 1.0 : a; }

}  // namespace

LcuRunResult apply_lcu(const LcuOperator& x, const StateVector& phi, const LcuConfig& cfg) {
  if (phi.dim() != x.dim()) throw DimensionError("apply_lcu: dimension mismatch");
  const ComplexVector y = x.apply(phi.amplitudes());
  const double norm = y.norm();
  if (!(norm >= cfg.annihilation_threshold)) {
    throw AnnihilationError("apply_lcu: state lies in the kernel of X (||X phi|| = " +
                            std::to_string(norm) + ")");
  }
  LcuRunResult r{StateVector::normalized(y)};
  r.success_amplitude = clamp_amplitude(norm / x.gamma_total());
  r.amplification_rounds = amplification_rounds(r.success_amplitude, cfg.c_a);
  r.rounds_inverse_form = rounds_inverse_form(r.success_amplitude, cfg.c_a);
  r.effective_queries =
      r.amplification_rounds * (2 * static_cast<std::int64_t>(x.size()) + 1);
  return r;
}

LcuBlockResult apply_lcu_columns(const LcuOperator& x, const ComplexMatrix& columns,
                                 const LcuConfig& cfg) {
  if (columns.rows() != x.dim()) throw DimensionError("apply_lcu_columns: dimension mismatch");
  const double in_norm = columns.norm();
  if (!(in_norm > 0.0)) throw ValidationError("apply_lcu_columns: zero input state");
  ComplexMatrix y = x.apply(columns);
  const double norm = y.norm();
  if (!(norm >= cfg.annihilation_threshold * in_norm)) {
    throw AnnihilationError("apply_lcu_columns: state lies in the kernel of X");
  }
  LcuBlockResult r;
  r.output = y / norm;
  r.success_amplitude = clamp_amplitude(norm / (in_norm * x.gamma_total()));
  r.amplification_rounds = amplification_rounds(r.success_amplitude, cfg.c_a);
  r.rounds_inverse_form = rounds_inverse_form(r.success_amplitude, cfg.c_a);
  r.effective_queries =
      r.amplification_rounds * (2 * static_cast<std::int64_t>(x.size()) + 1);
  return r;
}

StateVector extended_lcu_state(const LcuOperator& x, const StateVector& phi) {
  if (!x.is_dense()) throw ValidationError("extended_lcu_state: dense operators only");
  if (phi.dim() != x.dim()) throw DimensionError("extended_lcu_state: dimension mismatch");
  const Index n = x.dim();
  const Index l_count = static_cast<Index>(x.size());
  if (n * l_count > kMaxDimension * 16) {
    throw DimensionError("extended_lcu_state: dilated dimension too large");
  }
  std::vector<double> gammas;
  for (const auto& t : x.terms()) gammas.push_back(t.gamma);
  const ComplexVector b = b_state(gammas).amplitudes();

  // B is the Householder reflection exchanging |0> and |b> (both real).
  ComplexVector v = -b;
  v(0) += 1.0;
  const double vv = v.squaredNorm();
  ComplexMatrix bmat = ComplexMatrix::Identity(l_count, l_count);
  if (vv > 1e-30) bmat -= (2.0 / vv) * (v * v.adjoint());

  // After SELECT (B (x) 1): rows indexed by ancilla, columns by system.
  ComplexMatrix stage(l_count, n);
  for (Index l = 0; l < l_count; ++l) {
    stage.row(l) = (bmat(l, 0) * (x.terms()[l].unitary * phi.amplitudes())).transpose();
  }
  const ComplexMatrix out = bmat.adjoint() * stage;
  ComplexVector flat(n * l_count);
  for (Index s = 0; s < n; ++s) {
    for (Index l = 0; l < l_count; ++l) flat(s * l_count + l) = out(l, s);
  }
  return StateVector(flat);
}

ComplexVector ancilla_zero_block(const ComplexVector& v, Index ancilla_dim) {
  if (ancilla_dim <= 0 || v.size() % ancilla_dim != 0) {
    throw DimensionError("ancilla_zero_block: dimension mismatch");
  }
  const Index n = v.size() / ancilla_dim;
  ComplexVector out(n);
  for (Index s = 0; s < n; ++s) out(s) = v(s * ancilla_dim);
  return out;
}

}  // namespace lculab
