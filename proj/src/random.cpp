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

#include "lculab/random.hpp"

#include <cmath>
#include <numbers>

namespace lculab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Rng make_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(derive_seed(master, index));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  // Box-Muller; u1 in (0, 1].
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ComplexMatrix random_ginibre(Index dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

ComplexMatrix random_unitary(Index dim, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_ginibre(dim, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

HermitianOperator random_hermitian(Index dim, Rng& rng) {
  const ComplexMatrix g = random_ginibre(dim, rng);
  return HermitianOperator(ComplexMatrix((g + g.adjoint()) / 2.0));
}

HermitianOperator random_with_spectrum(const RealVector& eigenvalues, Rng& rng) {
  const ComplexMatrix v = random_unitary(eigenvalues.size(), rng);
  ComplexMatrix m = v * eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
  m = (m + m.adjoint()) / 2.0;
  return HermitianOperator(m);
}

StateVector random_state(Index dim, Rng& rng) {
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = standard_normal(rng);
    const double im = standard_normal(rng);
    v(i) = Complex(re, im);
  }
  return StateVector::normalized(v);
}

ComplexMatrix random_reflection(Index dim, Rng& rng) {
  const ComplexVector v = random_state(dim, rng).amplitudes();
  return ComplexMatrix::Identity(dim, dim) - 2.0 * v * v.adjoint();
}

}  // namespace lculab
