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

#include <cmath>
#include <numbers>

#include "lculab/error.hpp"
#include "lculab/gibbs.hpp"
#include "lculab/lcu.hpp"
#include "lculab/random.hpp"

namespace lculab {
namespace {

TEST(BState, Examples) {
  const StateVector u = b_state({1, 1, 1, 1});
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(u.amplitudes()(i).real(), 0.5, 1e-15);
  const StateVector t = b_state({3, 1});
  EXPECT_NEAR(t.amplitudes()(0).real(), std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(t.amplitudes()(1).real(), 0.5, 1e-15);
  EXPECT_THROW(b_state({}), ValidationError);
  EXPECT_THROW(b_state({1, 0}), ValidationError);
}

TEST(BState, GaussianWeights) {
  const HsGrid grid = make_hs_grid(0.2, 15, 4.0, 1e-3, 1.0);
  const StateVector b = b_state(grid.weights);
  EXPECT_NEAR(b.amplitudes().norm(), 1.0, 1e-12);
  for (std::size_t j = 1; j < grid.weights.size(); ++j) {
    const double ratio = b.amplitudes()(static_cast<Index>(j)).real() /
                         b.amplitudes()(static_cast<Index>(j - 1)).real();
    EXPECT_NEAR(ratio, std::sqrt(grid.weights[j] / grid.weights[j - 1]), 1e-12);
  }
}

TEST(ApplyLcu, Identity) {
  Rng rng = make_rng(31);
  const StateVector phi = random_state(4, rng);
  const LcuOperator x(4, {{1.0, ComplexMatrix::Identity(4, 4)}});
  const LcuRunResult r = apply_lcu(x, phi);
  EXPECT_LT((r.output_state.amplitudes() - phi.amplitudes()).norm(), 1e-15);
  EXPECT_NEAR(r.success_amplitude, 1.0, 1e-15);
  EXPECT_EQ(r.amplification_rounds, 1);
  EXPECT_EQ(r.rounds_inverse_form, 1);
  EXPECT_EQ(r.effective_queries, 3);
}

TEST(ApplyLcu, ExactCancellation) {
  Rng rng = make_rng(32);
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const LcuOperator x(3, {{0.5, id}, {0.5, -id}});
  EXPECT_THROW(apply_lcu(x, random_state(3, rng)), AnnihilationError);
}

TEST(ApplyLcu, CosineCombination) {
  Rng rng = make_rng(33);
  const ComplexMatrix u = random_unitary(5, rng);
  const StateVector phi = random_state(5, rng);
  const LcuOperator x(5, {{0.5, u}, {0.5, u.adjoint()}});
  const LcuRunResult r = apply_lcu(x, phi);
  const ComplexVector v = 0.5 * (u + u.adjoint()) * phi.amplitudes();
  EXPECT_LT((r.output_state.amplitudes() - v / v.norm()).norm(), 1e-10);
  EXPECT_NEAR(r.success_amplitude, v.norm(), 1e-12);
  EXPECT_LE(r.success_amplitude, 1.0 + 1e-12);
}

TEST(ApplyLcu, RoundFormulas) {
  EXPECT_EQ(amplification_rounds(1.0), 1);
  EXPECT_EQ(amplification_rounds(0.5), static_cast<std::int64_t>(std::ceil((std::numbers::pi / 4) / std::asin(0.5))));
  EXPECT_EQ(rounds_inverse_form(0.25), 4);
  EXPECT_EQ(rounds_inverse_form(0.25, 2.0), 8);
  // Padding X with a canceling pair doubles gamma at fixed X.
  Rng rng = make_rng(34);
  const ComplexMatrix u = random_unitary(4, rng), w = random_unitary(4, rng);
  const StateVector phi = random_state(4, rng);
  const LcuOperator x(4, {{0.1, u}});
  const LcuOperator padded(4, {{0.1, u}, {0.05, w}, {0.05, -w}});
  const LcuRunResult a = apply_lcu(x, phi), b = apply_lcu(padded, phi);
  EXPECT_NEAR(b.success_amplitude, a.success_amplitude / 2, 1e-12);
  EXPECT_EQ(b.rounds_inverse_form, 2 * a.rounds_inverse_form);
  EXPECT_EQ(b.effective_queries, b.amplification_rounds * 7);
}

TEST(ApplyLcu, EqualityOnlyWhenTermsAgree) {
  Rng rng = make_rng(35);
  const StateVector phi = random_state(4, rng);
  const ComplexMatrix u = random_unitary(4, rng);
  const Complex phase = std::polar(1.0, 0.3);
  // V2 = phase * V1 on every state: a = 1 only if the phases agree.
  const LcuOperator same(4, {{0.3, u}, {0.7, u}});
  EXPECT_NEAR(apply_lcu(same, phi).success_amplitude, 1.0, 1e-12);
  const LcuOperator shifted(4, {{0.3, u}, {0.7, ComplexMatrix(phase * u)}});
  EXPECT_LT(apply_lcu(shifted, phi).success_amplitude, 1.0 - 1e-3);
}

TEST(ExtendedLcuState, SingleUnitary) {
  Rng rng = make_rng(36);
  const ComplexMatrix u = random_unitary(3, rng);
  const StateVector phi = random_state(3, rng);
  const StateVector ext = extended_lcu_state(LcuOperator(3, {{2.0, u}}), phi);
  const ComplexVector block = ancilla_zero_block(ext.amplitudes(), 1);
  EXPECT_LT((block - u * phi.amplitudes()).norm(), 1e-12);
}

TEST(ExtendedLcuState, CancellationGivesEmptyBlock) {
  Rng rng = make_rng(37);
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  const StateVector ext = extended_lcu_state(LcuOperator(3, {{0.5, id}, {0.5, -id}}),
                                             random_state(3, rng));
  EXPECT_LT(ancilla_zero_block(ext.amplitudes(), 2).norm(), 1e-14);
}

TEST(ExtendedLcuState, DilationConsistency) {
  Rng rng = make_rng(38);
  for (int trial = 0; trial < 30; ++trial) {
    const Index dim = 2 + static_cast<Index>(rng() % 15);
    const std::size_t l = 1 + rng() % 16;
    std::vector<LcuTerm> terms;
    for (std::size_t i = 0; i < l; ++i) terms.push_back({0.1 + uniform01(rng), random_unitary(dim, rng)});
    const LcuOperator x(dim, terms);
    const StateVector phi = random_state(dim, rng);
    const ComplexVector block =
        ancilla_zero_block(extended_lcu_state(x, phi).amplitudes(), static_cast<Index>(l));
    const ComplexVector expected = x.apply(phi.amplitudes()) / x.gamma_total();
    EXPECT_LT((block - expected).norm(), 1e-10);
    const LcuRunResult r = apply_lcu(x, phi);
    EXPECT_NEAR(block.norm(), r.success_amplitude, 1e-10);
  }
}

TEST(LcuOperator, FamilyMatchesDenseTerms) {
  Rng rng = make_rng(39);
  const HermitianOperator g = random_hermitian(4, rng);
  auto es = std::make_shared<Eigensystem>(eig(g));
  EvolutionFamily f;
  f.generator = es;
  f.times = {-1.0, 0.0, 0.5, 2.0};
  f.gammas = {0.1, 0.4, 0.3, 0.2};
  const LcuOperator fam(f);
  std::vector<LcuTerm> terms;
  for (std::size_t l = 0; l < 4; ++l) {
    terms.push_back({f.gammas[l],
                     matrix_function(*es, [t = f.times[l]](double e) { return std::exp(Complex(0, -t * e)); })});
  }
  const LcuOperator dense(4, terms);
  EXPECT_EQ(fam.size(), 4u);
  EXPECT_NEAR(fam.gamma_total(), 1.0, 1e-15);
  EXPECT_LT(max_abs_entry(fam.matrix() - dense.matrix()), 1e-12);
  const ComplexMatrix m = random_ginibre(4, rng);
  EXPECT_LT(max_abs_entry(fam.apply(m) - dense.apply(m)), 1e-12);
}

TEST(LcuOperator, RejectsNonUnitaryAndNonPositiveWeights) {
  EXPECT_THROW(LcuOperator(2, {{1.0, ComplexMatrix::Identity(2, 2) * 2.0}}), ValidationError);
  EXPECT_THROW(LcuOperator(2, {{0.0, ComplexMatrix::Identity(2, 2)}}), ValidationError);
  EXPECT_THROW(LcuOperator(2, {}), ValidationError);
}

}  // namespace
}  // namespace lculab
