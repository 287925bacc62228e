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

// Dense complex linear algebra and the exact spectral computations used as
// ground truth throughout the library.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>

namespace lculab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;
/// Largest operator dimension the dense routines accept.
inline constexpr Index kMaxDimension = 4096;

struct Eigensystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are orthonormal eigenvectors
};

/// Dense Hermitian matrix. Construction rejects inputs whose deviation from
/// Hermiticity exceeds kHermitianTolerance (max-entry) and symmetrizes the
/// rest. The eigendecomposition is computed once on first use and shared
/// between copies.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m);
  explicit HermitianOperator(const RealMatrix& m);

  static HermitianOperator zero(Index dim);
  static HermitianOperator diagonal(const RealVector& d);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  const Eigensystem& eigensystem() const;
  /// Spectral norm, max |E_j|.
  double norm() const;
  double min_eigenvalue() const { return eigensystem().values(0); }
  double max_eigenvalue() const {
    return eigensystem().values(eigensystem().values.size() - 1);
  }

 private:
  struct Cache {
    std::once_flag once;
    Eigensystem eig;
  };
  ComplexMatrix m_;
  std::shared_ptr<Cache> cache_;
};

/// Unit-norm state vector.
class StateVector {
 public:
  explicit StateVector(ComplexVector amplitudes);
  /// Normalizes v; throws AnnihilationError when ||v|| < 1e-14.
  static StateVector normalized(const ComplexVector& v);
  static StateVector basis(Index dim, Index k);

  Index dim() const { return a_.size(); }
  const ComplexVector& amplitudes() const { return a_; }

 private:
  ComplexVector a_;
};

/// Hermitian, unit trace, positive semidefinite (to -1e-12).
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Returns (E, V) with h = V diag(E) V^dagger, E ascending.
Eigensystem eig(const HermitianOperator& h);

/// V diag(f(E)) V^dagger. Throws SingularityError if f is not finite at
/// some eigenvalue.
ComplexMatrix matrix_function(const HermitianOperator& h,
                              const std::function<Complex(double)>& f);
ComplexMatrix matrix_function(const Eigensystem& es,
                              const std::function<Complex(double)>& f);

/// h^{-1}; throws SingularityError when an eigenvalue is within
/// 1e-12 * max(1, ||h||) of zero.
ComplexMatrix inverse(const HermitianOperator& h);

/// (1/2) * sum of |eigenvalues of a - b|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Helpers shared by the other modules.

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
/// Traces out the right factor of a (dim_left * dim_right) square matrix.
ComplexMatrix partial_trace_right(const ComplexMatrix& m, Index dim_left,
                                  Index dim_right);
ComplexMatrix partial_trace_left(const ComplexMatrix& m, Index dim_left,
                                 Index dim_right);
double max_abs_entry(const ComplexMatrix& m);
double spectral_norm(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance);
void require_finite(const ComplexMatrix& m, const char* what);

}  // namespace lculab
