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

#include <gtest/gtest.h>

#include "lculab/error.hpp"
#include "lculab/io.hpp"
#include "lculab/random.hpp"

namespace lculab {
namespace {

using io::Json;

TEST(Io, MatrixRoundTrip) {
  Rng rng = make_rng(81);
  const ComplexMatrix m = random_ginibre(3, rng);
  EXPECT_EQ(max_abs_entry(io::matrix_from_json(io::matrix_to_json(m)) - m), 0.0);
  const Json real = {{"dim", 2}, {"re", {1, 2, 3, 4}}};
  EXPECT_EQ(io::matrix_from_json(real)(0, 1), Complex(2, 0));
  EXPECT_THROW(io::matrix_from_json(Json{{"dim", 2}, {"re", {1, 2, 3}}}), ValidationError);
  EXPECT_THROW(io::matrix_from_json(Json{{"dim", 1}, {"re", {1}}, {"extra", 1}}), ValidationError);
}

TEST(Io, DecompositionRoundTrip) {
  Rng rng = make_rng(82);
  RealVector spec(3);
  spec << 0.0, 0.5, 1.0;
  const ProjectorDecomposition p = ProjectorDecomposition::from_psd(random_with_spectrum(spec, rng));
  const ProjectorDecomposition q = io::decomposition_from_json(io::decomposition_to_json(p));
  EXPECT_EQ(q.size(), p.size());
  EXPECT_LT(max_abs_entry(q.reconstruct() - p.reconstruct()), 1e-15);
}

TEST(Io, LcuRoundTrip) {
  Rng rng = make_rng(83);
  const LcuOperator x(2, {{0.3, random_unitary(2, rng)}, {0.7, random_unitary(2, rng)}});
  const LcuOperator y = io::lcu_from_json(io::lcu_to_json(x));
  EXPECT_EQ(y.size(), 2u);
  EXPECT_LT(max_abs_entry(y.matrix() - x.matrix()), 1e-15);
}

TEST(Io, ChainRoundTripAndErrors) {
  const RealMatrix p = lazy_cycle(5, 0.5);
  const io::ChainSpec c = io::chain_from_json(io::chain_to_json(p, {0, 3}));
  EXPECT_EQ((c.transition - p).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(c.marked, (std::vector<Index>{0, 3}));
  Json bad = {{"n_states", 2}, {"entries", {{0, 5, 1.0}}}, {"marked", {0}}};
  EXPECT_THROW(io::chain_from_json(bad), ValidationError);
  Json nomark = {{"n_states", 2}, {"entries", {{0, 0, 1.0}}}};
  EXPECT_THROW(io::chain_from_json(nomark), ValidationError);
}

TEST(Io, PauliParsing) {
  ComplexMatrix zx = ComplexMatrix::Zero(4, 4);
  // Z on qubit 0 (most significant), X on qubit 1.
  zx(0, 1) = zx(1, 0) = 1;
  zx(2, 3) = zx(3, 2) = -1;
  EXPECT_EQ(max_abs_entry(io::pauli_matrix("ZX") - zx), 0.0);
  const UnitaryDecomposition u = io::parse_pauli_lines({"0.5 ZX", "-0.25 YI", "", "# comment"});
  EXPECT_EQ(u.size(), 2u);
  const ComplexMatrix expected = 0.5 * io::pauli_matrix("ZX") - 0.25 * io::pauli_matrix("YI");
  EXPECT_LT(max_abs_entry(u.reconstruct() - expected), 1e-15);
  const ProjectorDecomposition p = io::pauli_decomposition({"0.5 ZX", "-0.25 YI", "0.1 II"});
  EXPECT_LT(max_abs_entry(p.reconstruct() -
                          p.identity_offset() * ComplexMatrix::Identity(4, 4) -
                          (expected + 0.1 * ComplexMatrix::Identity(4, 4))),
            1e-14);
  EXPECT_THROW(io::parse_pauli_lines({"1.0 ZQ"}), ValidationError);
  EXPECT_THROW(io::parse_pauli_lines({"1.0 Z", "1.0 ZZ"}), ValidationError);
  EXPECT_THROW(io::parse_pauli_lines({"abc Z"}), ValidationError);
}

TEST(Io, DecompositionFromMatrixShiftsNegativeSpectrum) {
  RealVector d(2);
  d << -1.0, 2.0;
  const ProjectorDecomposition p = io::decomposition_from_matrix(HermitianOperator::diagonal(d));
  EXPECT_NEAR(p.identity_offset(), 1.0, 1e-15);
  EXPECT_NEAR(p.hamiltonian().min_eigenvalue(), 0.0, 1e-15);
  EXPECT_NEAR(p.hamiltonian().max_eigenvalue(), 3.0, 1e-15);
}

TEST(Io, RejectUnknownKeys) {
  EXPECT_NO_THROW(io::reject_unknown_keys(Json{{"a", 1}}, {"a", "b"}, "ctx"));
  EXPECT_THROW(io::reject_unknown_keys(Json{{"c", 1}}, {"a", "b"}, "ctx"), ValidationError);
}

}  // namespace
}  // namespace lculab
