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
#include "lculab/inverse_estimator.hpp"
#include "lculab/random.hpp"
#include "oracles.hpp"

namespace lculab {
namespace {

RealMatrix two_state() { return RealMatrix::Constant(2, 2, 0.5); }

ProjectorDecomposition scalar(double h) {
  return ProjectorDecomposition(1, {{h, ComplexMatrix::Identity(1, 1)}});
}

/// The full double sum by explicit loops.
double double_sum(const InverseGrid& g, double x) {
  double s = 0.0;
  for (std::int64_t k = 0; k < g.K; ++k) {
    const double z = static_cast<double>(k) * g.delta_z;
    s += g.delta_z * oracle::hs_scalar(x, 2.0 * z, g.hs.delta_y, static_cast<long>(g.hs.J));
  }
  return s;
}

TEST(InverseGrid, ExponentialSumStage) {
  const InverseGrid g = calibrate_inverse_grid(0.25, 0.01);
  double direct = 0.0;
  for (std::int64_t k = 0; k < g.K; ++k) direct += g.delta_z * std::exp(-g.z(k) * 0.25);
  EXPECT_NEAR(g.exp_sum(0.25), direct, 1e-10);
  EXPECT_LE(std::abs(4.0 - direct), 0.01 / 4);
  EXPECT_NEAR(g.z_K, static_cast<double>(g.K) * g.delta_z, 1e-9);
}

TEST(InverseGrid, TopOfSpectrum) {
  const InverseGrid g = calibrate_inverse_grid(0.25, 0.05);
  EXPECT_LE(std::abs(1.0 - double_sum(g, 1.0)), 0.05 / 2);
  EXPECT_NEAR(g.response(1.0), double_sum(g, 1.0), 1e-9);
  EXPECT_LE(std::abs(4.0 - double_sum(g, 0.25)), 0.05 / 2);
}

TEST(InverseGrid, GammaCloseToZK) {
  for (double delta : {0.25, 0.125}) {
    const InverseGrid g = calibrate_inverse_grid(delta, 0.05);
    EXPECT_LE(std::abs(g.gamma - g.z_K), g.z_K * 0.05 / 4);
  }
  EXPECT_THROW(calibrate_inverse_grid(0.0, 0.05), ValidationError);
  EXPECT_THROW(calibrate_inverse_grid(0.5, 0.0), ValidationError);
}

TEST(InverseLcu, ScalarCase) {
  const ProjectorDecomposition p = scalar(0.5);
  const InverseGrid g = calibrate_inverse_grid(0.5, 0.02);
  const GapAmplifiedHamiltonian tilde = build_tilde_h(p);
  const LcuOperator x = inverse_lcu(g, tilde);
  const ComplexVector out = x.apply(tilde.embed(ComplexVector::Ones(1)));
  EXPECT_NEAR(std::abs(tilde.ancilla_zero_block(out)(0) - 2.0), 0.0, 0.02);
  EXPECT_LE(inverse_residual(g, p, ComplexMatrix::Ones(1, 1)), 0.01);
}

TEST(InverseLcu, TwoStateChainHamiltonian) {
  const MarkedPartition mp(validate_chain(two_state()), {1});
  const DiscriminantPair dp = discriminant(mp);
  const ProjectorDecomposition p = ProjectorDecomposition::from_psd(dp.h);
  const InverseGrid g = calibrate_inverse_grid(dp.delta, 0.05);
  const GapAmplifiedHamiltonian tilde = build_tilde_h(p);
  const ComplexVector out = inverse_lcu(g, tilde).apply(tilde.embed(ComplexVector::Ones(1)));
  EXPECT_NEAR(tilde.ancilla_zero_block(out)(0).real(), 2.0, 0.05);
}

TEST(InverseLcu, RandomSpectrumResidualAndMatrix) {
  Rng rng = make_rng(71);
  RealVector spec(4);
  spec << 0.25, 0.4, 0.8, 1.0;
  const ProjectorDecomposition p = ProjectorDecomposition::from_psd(random_with_spectrum(spec, rng));
  const InverseGrid g = calibrate_inverse_grid(0.25, 0.05);
  ComplexMatrix states(4, 10);
  for (int c = 0; c < 10; ++c) states.col(c) = random_state(4, rng).amplitudes();
  EXPECT_LE(inverse_residual(g, p, states), 0.025);
  const GapAmplifiedHamiltonian tilde = build_tilde_h(p);
  const ComplexMatrix x = inverse_lcu(g, tilde).matrix();
  const ComplexMatrix block = tilde.ancilla_zero_sector(x);
  EXPECT_LT(spectral_norm(block - oracle::inverse(p.reconstruct())), 0.025);
}

TEST(InverseLcu, SpectrumOutsideRangeIsRejected) {
  const InverseGrid g = calibrate_inverse_grid(0.5, 0.05);
  EXPECT_THROW(inverse_lcu(g, build_tilde_h(scalar(0.25))), PreconditionError);
  EXPECT_THROW(inverse_lcu(g, build_tilde_h(scalar(1.5))), PreconditionError);
}

TEST(InverseLcu, ScalingVariants) {
  // The sqrt(z) variant represents e^{-z x / 2}, so it sums to about 2/x.
  const InverseGrid g = calibrate_inverse_grid(0.5, 0.02);
  EXPECT_NEAR(g.response(std::sqrt(0.5), TimeScaling::kSqrtTwoZ), 2.0, 0.02);
  const double half = g.response(std::sqrt(0.5), TimeScaling::kSqrtZ);
  double expected = 0.0;
  for (std::int64_t k = 0; k < g.K; ++k) expected += g.delta_z * std::exp(-g.z(k) * 0.25);
  EXPECT_NEAR(half, expected, 0.02);
  EXPECT_GT(std::abs(half - 2.0), 1.0);
}

TEST(InverseLcu, PerturbedEvolutions) {
  // Each evolution replaced by a unitary at distance eps/(4 z_K); the total
  // error then stays within eps.
  const double eps = 0.05;
  const ProjectorDecomposition p = scalar(0.5);
  const InverseGrid g = calibrate_inverse_grid(0.5, eps);
  const GapAmplifiedHamiltonian tilde = build_tilde_h(p);
  const double noise = eps / (4.0 * g.z_K);
  Rng rng = make_rng(72);
  const ComplexVector e0 = tilde.embed(ComplexVector::Ones(1));
  ComplexVector sum = ComplexVector::Zero(tilde.dim());
  for (std::int64_t k = 0; k < g.K; ++k) {
    HsGrid inner = g.hs;
    inner.beta = 2.0 * g.z(k);
    const LcuOperator w = hs_lcu_perturbed(inner, tilde, noise, rng);
    sum += g.delta_z * w.apply(e0);
  }
  EXPECT_LE(std::abs(tilde.ancilla_zero_block(sum)(0) - 2.0), eps);
}

TEST(TCircuit, TwoStateAndSingleton) {
  const MarkedPartition two(validate_chain(two_state()), {1});
  const DiscriminantPair dp = discriminant(two);
  const InverseGrid g = calibrate_inverse_grid(dp.delta, 0.02);
  const GapAmplifiedHamiltonian tilde = build_tilde_h(ProjectorDecomposition::from_psd(dp.h));
  const double a = t_circuit_expectation(g, tilde, two);
  EXPECT_NEAR(a, 1.0 / g.gamma, 0.02 / g.gamma);
  // Swapping gamma for z_K changes the value by at most eps/4 relative.
  EXPECT_LE(std::abs(a * g.gamma / g.z_K - a), a * 0.02 / 4);

  // U = {0} with stay probability 1/2: H = [1/2], t_h = pi_U / (1/2).
  RealMatrix p(2, 2);
  p << 0.5, 0.25, 0.5, 0.75;
  const MarkedPartition one(validate_chain(p), {1});
  const DiscriminantPair d1 = discriminant(one);
  const InverseGrid g1 = calibrate_inverse_grid(d1.delta, 0.02);
  const GapAmplifiedHamiltonian t1 = build_tilde_h(ProjectorDecomposition::from_psd(d1.h));
  EXPECT_NEAR(t_circuit_expectation(g1, t1, one) * g1.gamma, one.pi_u() / 0.5, 0.02);
}

TEST(AmplitudeEstimation, GroverCount) {
  EXPECT_EQ(ae_grover_count(0.1), 40);
  EXPECT_EQ(ae_grover_count(0.3), 14);
  EXPECT_EQ(ae_grover_count(10.0), 2);
  EXPECT_THROW(ae_grover_count(0.0), ValidationError);
}

TEST(AmplitudeEstimation, Boundaries) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(amplitude_estimation(0.0, 0.05, 0.81, seed).estimate, 0.0);
    EXPECT_EQ(amplitude_estimation(1.0, 0.05, 0.81, seed).estimate, 1.0);
  }
  EXPECT_THROW(amplitude_estimation(0.5, 0.05, 0.9, 1), ValidationError);
  EXPECT_THROW(amplitude_estimation(1.5, 0.05, 0.8, 1), ValidationError);
}

TEST(AmplitudeEstimation, DistributionMatchesPhaseEstimationSum) {
  // Pr(y) = |(1/M) sum_x e^{2 pi i x (theta - y/M)}|^2.
  const std::int64_t m = 20;
  const double a = 0.3;
  const double theta = std::asin(std::sqrt(a)) / std::numbers::pi;
  const auto pr = ae_outcome_distribution(a, m);
  double total = 0.0;
  for (std::int64_t y = 0; y < m; ++y) {
    Complex s = 0.0;
    for (std::int64_t x = 0; x < m; ++x) {
      s += std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(x) *
                               (theta - static_cast<double>(y) / static_cast<double>(m)));
    }
    EXPECT_NEAR(pr[static_cast<std::size_t>(y)], std::norm(s) / static_cast<double>(m * m), 1e-12);
    total += pr[static_cast<std::size_t>(y)];
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(AmplitudeEstimation, Coverage) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    hits += std::abs(amplitude_estimation(0.3, 0.02, 0.81, seed).estimate - 0.3) <= 0.02;
  }
  EXPECT_GE(hits, 8100);
}

TEST(HittingEstimate, TwoStateCoverage) {
  HittingTimeTask task{MarkedPartition(validate_chain(two_state()), {1})};
  task.epsilon = 0.1;
  const HittingTimeResult r = estimate_hitting_time(task, 0);
  EXPECT_NEAR(r.exact, 1.0, 1e-14);
  EXPECT_NEAR(r.noiseless_estimate, 1.0, 0.1);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    hits += std::abs(resample_hitting_estimate(r, task, seed) - 1.0) <= 4 * 0.1;
  }
  EXPECT_GE(hits, 162);
  EXPECT_DOUBLE_EQ(r.cost.total(), r.cost.recompute_total());
  ASSERT_TRUE(r.classical_cost_comparison.has_value());
}

TEST(HittingEstimate, SparseRouteAgreesWithDense) {
  HittingTimeTask dense{MarkedPartition(validate_chain(lazy_cycle(6, 0.5)), {0})};
  dense.epsilon = 0.2;
  HittingTimeTask sparse = dense;
  sparse.route = ChainRoute::kSparse;
  const HittingTimeResult a = estimate_hitting_time(dense, 5);
  const HittingTimeResult b = estimate_hitting_time(sparse, 5);
  EXPECT_NEAR(a.exact_amplitude, b.exact_amplitude, 1e-9);
  EXPECT_NEAR(b.noiseless_estimate, b.exact, 0.2);
}

TEST(HittingEstimate, OracleFreeMode) {
  HittingTimeTask task{MarkedPartition(validate_chain(two_state()), {1})};
  task.epsilon = 0.1;
  task.mode = HittingMode::kOracleFree;
  EXPECT_THROW(estimate_hitting_time(task, 0), ValidationError);
  task.delta_lower_bound = 0.9;
  EXPECT_THROW(estimate_hitting_time(task, 0), PreconditionError);
  task.delta_lower_bound = 0.25;
  const HittingTimeResult r = estimate_hitting_time(task, 0);
  EXPECT_DOUBLE_EQ(r.delta, 0.25);
  EXPECT_NEAR(r.noiseless_estimate, 1.0, 0.1);
}

}  // namespace
}  // namespace lculab
