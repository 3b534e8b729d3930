// Copyright 2026 The mpsqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "mpsqc/analytic.hpp"
#include "mpsqc/targets.hpp"
#include "oracles.hpp"

namespace mpsqc {
namespace {

Mps ghz(int n) {
  Vector v = Vector::Zero(Index{1} << n);
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return from_statevector(v, 2);
}

StaircaseCircuit one_layer(int n, LinearLayer l) {
  StaircaseCircuit c;
  c.num_sites = n;
  c.layers.push_back(std::move(l));
  return c;
}

TEST(Chi2ToLayer, ZeroStateGivesLayerFixingZero) {
  const auto c = one_layer(5, chi2_mps_to_layer(Mps::zero_state(5)));
  EXPECT_NEAR(circuit_fidelity(c, Mps::zero_state(5)), 1.0, 1e-12);
}

TEST(Chi2ToLayer, GhzAgainstDenseOracle) {
  const auto psi = ghz(4);
  const auto c = one_layer(4, chi2_mps_to_layer(psi));
  EXPECT_NEAR(std::abs(oracle::circuit_vector(c).dot(to_statevector(psi))), 1.0, 1e-10);
}

TEST(Chi2ToLayer, RandomChi2Reconstruction) {
  for (auto entries : {RandomEntries::real_gaussian, RandomEntries::complex_gaussian}) {
    const auto psi = random_mps(6, 2, 9, entries).state;
    const auto c = one_layer(6, chi2_mps_to_layer(psi));
    EXPECT_NEAR(circuit_fidelity(c, psi), 1.0, 1e-10);
    for (const auto& g : c.layers[0].gates()) EXPECT_LT(isometry_error(g.matrix), 1e-10);
  }
}

TEST(Chi2ToLayer, TwoSites) {
  const auto psi = random_mps(2, 2, 3, RandomEntries::complex_gaussian).state;
  EXPECT_NEAR(circuit_fidelity(one_layer(2, chi2_mps_to_layer(psi)), psi), 1.0, 1e-12);
}

TEST(Chi2ToLayer, RejectsLargeBondsAndUnnormalized) {
  EXPECT_THROW(chi2_mps_to_layer(random_mps(6, 4, 1).state), std::invalid_argument);
  auto psi = random_mps(4, 2, 1).state;
  psi.scale(2.0);
  EXPECT_THROW(chi2_mps_to_layer(psi), std::invalid_argument);
}

TEST(DisentangleStep, Chi2TargetBecomesZero) {
  const auto psi = random_mps(8, 2, 4).state;
  const auto step = disentangle_step(psi);
  EXPECT_NEAR(fidelity(step.residual, Mps::zero_state(8)), 1.0, 1e-10);
  EXPECT_NEAR(step.truncation_fidelity, 1.0, 1e-12);
}

TEST(DisentangleStep, ZeroStateStaysZero) {
  const auto step = disentangle_step(Mps::zero_state(5));
  EXPECT_NEAR(fidelity(step.residual, Mps::zero_state(5)), 1.0, 1e-12);
}

TEST(DisentangleStep, HeisenbergImprovesOverlapWithZero) {
  const auto psi = heisenberg_ground_state(GridSpec{4, 3}, 64).state;
  const auto step = disentangle_step(psi);
  EXPECT_GT(fidelity(step.residual, Mps::zero_state(12)), fidelity(psi, Mps::zero_state(12)));
}

TEST(DisentangleStep, BondGrowthIsBounded) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto psi = random_mps(10, 16, seed).state;
    const auto step = disentangle_step(psi);
    const auto before = psi.bond_dims();
    const auto after = step.residual.bond_dims();
    ASSERT_EQ(after.size(), before.size());
    for (std::size_t b = 0; b < before.size(); ++b) {
      const Index cap = Index{1} << std::min<std::size_t>(b + 1, before.size() - b);
      EXPECT_LE(after[b], std::min(4 * before[b], cap));
    }
  }
}

TEST(AnalyticDecompose, Chi2TargetExactInOneLayer) {
  for (int n : {4, 8, 12}) {
    const auto psi = random_mps(n, 2, 77 + n).state;
    AnalyticOptions opts;
    opts.max_layers = 1;
    const auto res = analytic_decompose(psi, opts);
    ASSERT_EQ(res.circuit.depth(), 1);
    EXPECT_LE(1.0 - circuit_fidelity(res.circuit, psi), 1e-10);
  }
}

TEST(AnalyticDecompose, ZeroTargetStopsAfterOneIteration) {
  AnalyticOptions opts;
  opts.max_layers = 5;
  const auto res = analytic_decompose(Mps::zero_state(6), opts);
  EXPECT_EQ(res.trace.records.size(), 1u);
  EXPECT_NEAR(res.trace.records[0].fidelity_to_zero, 1.0, 1e-12);
}

TEST(AnalyticDecompose, SecondLayerDoesNotHurtRandomTarget) {
  const auto psi = random_mps(12, 64, 3).state;
  AnalyticOptions one;
  one.max_layers = 1;
  one.stop = StopRule::layers_only;
  AnalyticOptions two = one;
  two.max_layers = 2;
  const double f1 = circuit_fidelity(analytic_decompose(psi, one).circuit, psi);
  const double f2 = circuit_fidelity(analytic_decompose(psi, two).circuit, psi);
  EXPECT_GE(f2, f1 - 1e-12);
}

TEST(AnalyticDecompose, TraceAgreesWithCircuitFidelity) {
  const auto psi = random_mps(8, 16, 5).state;
  AnalyticOptions opts;
  opts.max_layers = 4;
  opts.stop = StopRule::layers_only;
  const auto res = analytic_decompose(psi, opts);
  ASSERT_EQ(res.trace.records.size(), 4u);
  for (int k = 1; k <= 4; ++k) {
    StaircaseCircuit prefix;
    prefix.num_sites = 8;
    prefix.layers.assign(res.circuit.layers.begin(), res.circuit.layers.begin() + k);
    const double f = circuit_fidelity(prefix, psi);
    EXPECT_NEAR(res.trace.records[k - 1].fidelity_to_zero, f, 1e-10);
    EXPECT_NEAR(circuit_fidelity_by_disentangling(prefix, psi), f, 1e-10);
  }
  EXPECT_NEAR(fidelity(res.residual, Mps::zero_state(8)), res.trace.records.back().fidelity_to_zero,
              1e-10);
  for (const auto& l : res.circuit.layers) {
    for (const auto& g : l.gates()) EXPECT_LT(isometry_error(g.matrix), 1e-10);
  }
}

TEST(AnalyticDecompose, StopRules) {
  const auto psi = random_mps(8, 16, 6).state;
  AnalyticOptions fid;
  fid.stop = StopRule::fidelity_only;
  fid.target_fidelity = 0.5;
  const auto a = analytic_decompose(psi, fid);
  EXPECT_GE(a.trace.records.back().fidelity_to_zero, 0.5);
  if (a.trace.records.size() > 1) {
    EXPECT_LT(a.trace.records[a.trace.records.size() - 2].fidelity_to_zero, 0.5);
  }

  AnalyticOptions both;
  both.stop = StopRule::layers_and_fidelity;
  both.max_layers = 1;
  both.target_fidelity = 0.999999;
  both.max_iterations = 3;
  EXPECT_EQ(analytic_decompose(psi, both).circuit.depth(), 3);

  AnalyticOptions either;
  either.stop = StopRule::layers_or_fidelity;
  either.max_layers = 3;
  either.target_fidelity = 0.0;
  EXPECT_EQ(analytic_decompose(psi, either).circuit.depth(), 1);
}

}  // namespace
}  // namespace mpsqc
