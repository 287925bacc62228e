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

// Seeded generators for random test instances. Every stream is derived from a
// 64-bit master seed and a stream index with splitmix64, so results never
// depend on scheduling order.

#include <cstdint>
#include <random>

#include "lculab/operators.hpp"

namespace lculab {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
/// Seed for stream `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);
Rng make_rng(std::uint64_t master, std::uint64_t index = 0);

/// Uniform double in [0, 1) built from the top 53 bits (portable across
/// standard libraries, unlike std::uniform_real_distribution).
double uniform01(Rng& rng);
double standard_normal(Rng& rng);

ComplexMatrix random_ginibre(Index dim, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(Index dim, Rng& rng);
HermitianOperator random_hermitian(Index dim, Rng& rng);
/// V diag(eigenvalues) V^dagger for a Haar-random V.
HermitianOperator random_with_spectrum(const RealVector& eigenvalues, Rng& rng);
StateVector random_state(Index dim, Rng& rng);
/// Householder reflection 1 - 2|v><v| for a random unit v.
ComplexMatrix random_reflection(Index dim, Rng& rng);

}  // namespace lculab
