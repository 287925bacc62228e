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

#include "lculab/operators.hpp"

#include <cmath>
#include <string>

#include "lculab/error.hpp"

namespace lculab {
namespace {

void check_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (m.rows() > kMaxDimension) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(m.rows()) +
                         " exceeds the dense cap of " + std::to_string(kMaxDimension));
  }
}

}  // namespace

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs_entry(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const auto id = ComplexMatrix::Identity(u.rows(), u.cols());
  return max_abs_entry(u.adjoint() * u - id) <= tol;
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m)
    : cache_(std::make_shared<Cache>()) {
  check_square(m, "HermitianOperator");
  require_finite(m, "HermitianOperator");
  const double asym = max_abs_entry(m - m.adjoint());
  if (asym > kHermitianTolerance) {
    throw ValidationError("HermitianOperator: matrix deviates from its adjoint by " +
                          std::to_string(asym));
  }
  m_ = (m + m.adjoint()) / 2.0;
}

HermitianOperator::HermitianOperator(const RealMatrix& m)
    : HermitianOperator(ComplexMatrix(m.cast<Complex>())) {}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(ComplexMatrix(ComplexMatrix::Zero(dim, dim)));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  return HermitianOperator(ComplexMatrix(d.cast<Complex>().asDiagonal()));
}

const Eigensystem& HermitianOperator::eigensystem() const {
  std::call_once(cache_->once, [this] {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_);
    if (solver.info() != Eigen::Success) {
      throw InternalError("HermitianOperator: eigensolver did not converge");
    }
    cache_->eig.values = solver.eigenvalues();
    cache_->eig.vectors = solver.eigenvectors();
  });
  return cache_->eig;
}

double HermitianOperator::norm() const {
  const auto& v = eigensystem().values;
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

StateVector::StateVector(ComplexVector amplitudes) : a_(std::move(amplitudes)) {
  if (a_.size() == 0) throw DimensionError("StateVector: empty");
  if (!a_.allFinite()) throw ValidationError("StateVector: non-finite amplitude");
  if (std::abs(a_.norm() - 1.0) > kNormTolerance) {
    throw ValidationError("StateVector: norm " + std::to_string(a_.norm()) + " != 1");
  }
}

StateVector StateVector::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n >= 1e-14)) {
    throw AnnihilationError("StateVector: cannot normalize a vector of norm " +
                            std::to_string(n));
  }
  return StateVector(v / n);
}

StateVector StateVector::basis(Index dim, Index k) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  check_square(m, "DensityMatrix");
  HermitianOperator h(m);
  if (std::abs(h.matrix().trace().real() - 1.0) > 1e-12) {
    throw ValidationError("DensityMatrix: trace " +
                          std::to_string(h.matrix().trace().real()) + " != 1");
  }
  if (h.min_eigenvalue() < -1e-12) {
    throw ValidationError("DensityMatrix: negative eigenvalue " +
                          std::to_string(h.min_eigenvalue()));
  }
  m_ = h.matrix();
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const auto& a = psi.amplitudes();
  return DensityMatrix(a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

Eigensystem eig(const HermitianOperator& h) { return h.eigensystem(); }

ComplexMatrix matrix_function(const Eigensystem& es,
                              const std::function<Complex(double)>& f) {
  const Index n = es.values.size();
  ComplexVector fv(n);
  for (Index i = 0; i < n; ++i) {
    const Complex z = f(es.values(i));
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw SingularityError("matrix_function: f is not finite at eigenvalue " +
                             std::to_string(es.values(i)));
    }
    fv(i) = z;
  }
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix matrix_function(const HermitianOperator& h,
                              const std::function<Complex(double)>& f) {
  return matrix_function(h.eigensystem(), f);
}

ComplexMatrix inverse(const HermitianOperator& h) {
  const double floor = 1e-12 * std::max(1.0, h.norm());
  for (Index i = 0; i < h.dim(); ++i) {
    if (std::abs(h.eigensystem().values(i)) < floor) {
      throw SingularityError("inverse: eigenvalue " +
                             std::to_string(h.eigensystem().values(i)) + " is numerically zero");
    }
  }
  return matrix_function(h, [](double x) { return Complex(1.0 / x); });
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("trace_distance: dimension mismatch " + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix() - b.matrix(),
                                                      Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace_right(const ComplexMatrix& m, Index dim_left, Index dim_right) {
  if (m.rows() != dim_left * dim_right || m.cols() != m.rows()) {
    throw DimensionError("partial_trace_right: shape mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_left, dim_left);
  for (Index i = 0; i < dim_left; ++i) {
    for (Index j = 0; j < dim_left; ++j) {
      Complex s = 0.0;
      for (Index k = 0; k < dim_right; ++k) s += m(i * dim_right + k, j * dim_right + k);
      out(i, j) = s;
    }
  }
  return out;
}

ComplexMatrix partial_trace_left(const ComplexMatrix& m, Index dim_left, Index dim_right) {
  if (m.rows() != dim_left * dim_right || m.cols() != m.rows()) {
    throw DimensionError("partial_trace_left: shape mismatch");
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_right, dim_right);
  for (Index k = 0; k < dim_left; ++k) {
    out += m.block(k * dim_right, k * dim_right, dim_right, dim_right);
  }
  return out;
}

}  // namespace lculab
