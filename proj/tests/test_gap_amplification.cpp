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
#include "lculab/gap_amplification.hpp"
#include "lculab/random.hpp"
#include "oracles.hpp"

namespace lculab {
namespace {

ComplexMatrix pauli_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  return z;
}

/// Random decomposition with K terms of random rank on dimension n.
ProjectorDecomposition random_decomposition(Index n, int k, Rng& rng) {
  std::vector<ProjectorTerm> terms;
  for (int t = 0; t < k; ++t) {
    const ComplexMatrix u = random_unitary(n, rng);
    const Index rank = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    const ComplexMatrix v = u.leftCols(rank);
    terms.push_back({0.05 + uniform01(rng), v * v.adjoint()});
  }
  return ProjectorDecomposition(n, std::move(terms));
}

/// ||Ht^2 |phi>|0> - (H|phi>)|0>|| using plain dense products.
double square_root_defect(const ProjectorDecomposition& p, const GapAmplifiedHamiltonian& g,
                          const ComplexVector& phi) {
  const ComplexMatrix& ht = g.matrix();
  const ComplexVector lhs = ht * (ht * g.embed(phi));
  return (lhs - g.embed(p.reconstruct() * phi)).norm();
}

TEST(ProjectorsFromUnitaries, PauliZ) {
  const UnitaryDecomposition u(2, {{1.0, pauli_z()}});
  const ProjectorDecomposition p = projectors_from_unitaries(u);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p.terms()[0].alpha, 1.0, 1e-15);
  EXPECT_LT(max_abs_entry(p.terms()[0].projector - ComplexMatrix(Eigen::Vector2cd(1, 0).asDiagonal())),
            1e-15);
  EXPECT_NEAR(p.identity_offset(), 0.5, 1e-15);
}

TEST(ProjectorsFromUnitaries, Identity) {
  const UnitaryDecomposition u(3, {{2.0, ComplexMatrix::Identity(3, 3)}});
  const ProjectorDecomposition p = projectors_from_unitaries(u);
  EXPECT_LT(max_abs_entry(p.terms()[0].projector - ComplexMatrix::Identity(3, 3)), 1e-15);
  EXPECT_NEAR(p.identity_offset(), 1.0, 1e-15);
  EXPECT_LT(max_abs_entry(p.reconstruct() - p.identity_offset() * ComplexMatrix::Identity(3, 3) -
                          u.reconstruct()),
            1e-14);
}

TEST(ProjectorsFromUnitaries, HouseholderIsIdempotent) {
  Rng rng = make_rng(21);
  const UnitaryDecomposition u(6, {{0.7, random_reflection(6, rng)}});
  const ComplexMatrix pi = projectors_from_unitaries(u).terms()[0].projector;
  EXPECT_LT(max_abs_entry(pi * pi - pi), 1e-12);
}

TEST(ProjectorDecomposition, RejectsBadTerms) {
  ComplexMatrix notproj = ComplexMatrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(ProjectorDecomposition(2, {{1.0, notproj}}), ValidationError);
  EXPECT_THROW(ProjectorDecomposition(2, {{-1.0, ComplexMatrix::Identity(2, 2)}}), ValidationError);
  EXPECT_THROW(ProjectorDecomposition(2, {{1.0, ComplexMatrix::Identity(3, 3)}}), DimensionError);
}

TEST(BuildTildeH, ScalarProjector) {
  const ProjectorDecomposition p(1, {{1.0, ComplexMatrix::Identity(1, 1)}});
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  EXPECT_LT(max_abs_entry(g.matrix() - x), 1e-15);
  const ComplexVector phi = ComplexVector::Ones(1);
  EXPECT_LT(square_root_defect(p, g, phi), 1e-15);
}

TEST(BuildTildeH, DiagonalCase) {
  ComplexMatrix pi = ComplexMatrix::Zero(2, 2);
  pi(1, 1) = 1;
  const ProjectorDecomposition p(2, {{1.0, pi}});
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  const ComplexMatrix sector = g.ancilla_zero_sector(g.matrix() * g.matrix());
  EXPECT_LT(max_abs_entry(sector - pi), 1e-15);
}

TEST(BuildTildeH, RandomRankOneSplit) {
  Rng rng = make_rng(22);
  RealVector spec(4);
  spec << 0.0, 0.3, 0.6, 1.0;
  const ProjectorDecomposition p = ProjectorDecomposition::from_psd(random_with_spectrum(spec, rng));
  ASSERT_EQ(p.size(), 3u);
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  for (int i = 0; i < 10; ++i) {
    EXPECT_LT(square_root_defect(p, g, random_state(4, rng).amplitudes()), 1e-10);
  }
}

TEST(BuildTildeH, NormBounds) {
  Rng rng = make_rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 7);
    const ProjectorDecomposition p = random_decomposition(n, 1 + static_cast<int>(rng() % 5), rng);
    const GapAmplifiedHamiltonian g = build_tilde_h(p);
    const double nt = g.hamiltonian().norm();
    EXPECT_LE(nt, p.sum_sqrt_alpha() + 1e-9);
    EXPECT_GE(nt * nt, p.hamiltonian().norm() - 1e-9);
  }
}

TEST(TildeHUnitaryTerms, ScalarCase) {
  const ProjectorDecomposition p(1, {{1.0, ComplexMatrix::Identity(1, 1)}});
  const UnitaryDecomposition u = tilde_h_unitary_terms(build_tilde_h(p));
  EXPECT_EQ(u.size(), 2u);
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  EXPECT_LT(max_abs_entry(u.reconstruct() - x), 1e-15);
}

TEST(TildeHUnitaryTerms, Empty) {
  const ProjectorDecomposition p(3, {});
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  EXPECT_EQ(g.dim(), 3);
  EXPECT_LT(max_abs_entry(g.matrix()), 1e-300);
  EXPECT_EQ(tilde_h_unitary_terms(g).size(), 0u);
}

TEST(TildeHUnitaryTerms, RandomUnitaryAndExact) {
  Rng rng = make_rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const ProjectorDecomposition p = random_decomposition(4, 3, rng);
    const GapAmplifiedHamiltonian g = build_tilde_h(p);
    const UnitaryDecomposition u = tilde_h_unitary_terms(g);
    EXPECT_EQ(u.size(), 6u);
    for (const auto& t : u.terms()) EXPECT_TRUE(is_unitary(t.unitary, 1e-10));
    EXPECT_LT(max_abs_entry(u.reconstruct() - g.matrix()), 1e-10);
  }
}

TEST(AncillaRotation, ClosedFormMatchesTaylor) {
  for (int sign : {-1, 1}) {
    const ComplexMatrix a = ancilla_coupling(4, 2);
    const ComplexMatrix expected = oracle::expm(Complex(0.0, -sign * std::numbers::pi / 2) * a);
    EXPECT_LT(max_abs_entry(ancilla_rotation(4, 2, sign) - expected), 1e-12);
  }
}

TEST(ExactEvolution, Examples) {
  const ProjectorDecomposition p(1, {{1.0, ComplexMatrix::Identity(1, 1)}});
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  EXPECT_LT(max_abs_entry(exact_evolution(g, 0.0) - ComplexMatrix::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs_entry(exact_evolution(g, std::numbers::pi) + ComplexMatrix::Identity(2, 2)),
            1e-12);
}

TEST(ExactEvolution, GroupLawUnitarityCommutation) {
  Rng rng = make_rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const GapAmplifiedHamiltonian g = build_tilde_h(random_decomposition(3, 2, rng));
    const double t1 = 3.0 * uniform01(rng), t2 = 3.0 * uniform01(rng);
    const ComplexMatrix u1 = exact_evolution(g, t1), u2 = exact_evolution(g, t2);
    EXPECT_LT(max_abs_entry(u1 * u2 - exact_evolution(g, t1 + t2)), 1e-10);
    EXPECT_LT(max_abs_entry(u1 - oracle::evolve(g.matrix(), t1)), 1e-10);
    EXPECT_TRUE(is_unitary(u1, 1e-10));
    EXPECT_LT(max_abs_entry(u1 * g.matrix() - g.matrix() * u1), 1e-9);
  }
}

TEST(SimulationCost, FormulaValues) {
  SimulationCostModel m;
  m.tau = 10.0;
  m.epsilon = 1e-3;
  const SimulationCost c = simulation_query_cost(m);
  const double l = std::log(1e4);
  EXPECT_NEAR(c.queries, 10.0 * l / std::log(l), 1e-10);
  EXPECT_NEAR(c.queries, 41.48, 0.01);
  EXPECT_FALSE(c.clamped);

  m.tau = 1.0;
  m.epsilon = 0.5;  // ratio 2 < e^e
  const SimulationCost s = simulation_query_cost(m);
  EXPECT_TRUE(s.clamped);
  EXPECT_NEAR(s.queries, std::max(std::log(2.0), 1.0), 1e-12);

  m.epsilon = 1e-6;
  for (double tau = 1.0; tau < 1e4; tau *= 2.0) {
    m.tau = tau;
    const double q1 = simulation_query_cost(m).queries;
    m.tau = 2 * tau;
    const double q2 = simulation_query_cost(m).queries;
    EXPECT_GT(q2 / q1, 2.0);
    EXPECT_LT(q2 / q1, 2.0 * std::log(2 * tau / 1e-6) / std::log(tau / 1e-6));
  }
  m.epsilon = 0.0;
  EXPECT_THROW(simulation_query_cost(m), ValidationError);
}

TEST(SimulationCost, TauSources) {
  Rng rng = make_rng(26);
  const ProjectorDecomposition p = random_decomposition(3, 2, rng);
  const GapAmplifiedHamiltonian g = build_tilde_h(p);
  const UnitaryDecomposition u = tilde_h_unitary_terms(g);
  EXPECT_NEAR(tau_from_sqrt_alpha(2.0, p), 2.0 * p.sum_sqrt_alpha(), 1e-12);
  EXPECT_NEAR(tau_from_unitary_terms(-2.0, u), 2.0 * u.weight(), 1e-12);
  EXPECT_NE(to_string(TauSource::kSumAlphaTilde), to_string(TauSource::kSumSqrtAlpha));
}

}  // namespace
}  // namespace lculab
