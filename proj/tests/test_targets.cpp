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
#include <filesystem>
#include <fstream>

#include "mpsqc/targets.hpp"
#include "oracles.hpp"

namespace mpsqc {
namespace {

TEST(Grid, Edges) {
  const GridSpec g{2, 3};
  const auto e = g.edges();
  EXPECT_EQ(e.size(), 7u);
  for (auto [i, j] : e) {
    EXPECT_LT(i, j);
    EXPECT_TRUE(j == i + 1 || j == i + 3);
  }
}

TEST(Heisenberg, ApplyMatchesPauliOracle) {
  for (GridSpec g : {GridSpec{1, 2}, GridSpec{2, 2}, GridSpec{2, 3}}) {
    const Matrix h = oracle::heisenberg_matrix(g);
    const Vector v = oracle::random_vector(g.num_sites(), 9);
    EXPECT_LT((apply_heisenberg(g, v) - h * v).norm(), 1e-12);
  }
}

TEST(Heisenberg, TwoSiteSinglet) {
  const auto gs = heisenberg_exact_ground_state(GridSpec{1, 2});
  EXPECT_NEAR(gs.energy, -0.75, 1e-12);
  EXPECT_FALSE(gs.degenerate);
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(singlet.dot(gs.vector)), 1.0, 1e-12);
  EXPECT_GT(gs.vector(1).real(), 0.0);
}

TEST(Heisenberg, TwoByTwoMatchesDenseDiagonalization) {
  const GridSpec g{2, 2};
  Eigen::SelfAdjointEigenSolver<Matrix> es(oracle::heisenberg_matrix(g));
  const auto t = heisenberg_ground_state(g, 64);
  const Vector v = to_statevector(t.state);
  EXPECT_NEAR(heisenberg_energy(g, v), es.eigenvalues()(0), 1e-10);
  EXPECT_NEAR(t.provenance.at("energy").get<double>(), es.eigenvalues()(0), 1e-10);
}

TEST(Heisenberg, FourByThreeExactAtChi64) {
  const GridSpec g{4, 3};
  const auto gs = heisenberg_exact_ground_state(g);
  const auto t = heisenberg_ground_state(g, 64);
  EXPECT_GE(std::abs(to_statevector(t.state).dot(gs.vector)), 1.0 - 1e-10);
  EXPECT_NEAR(heisenberg_energy(g, to_statevector(t.state)), gs.energy, 1e-8);
  EXPECT_LE(t.state.max_bond(), 64);
  EXPECT_NEAR(t.state.norm(), 1.0, 1e-12);
  EXPECT_GT(gs.gap, 1e-3);
}

TEST(Heisenberg, LanczosAgreesWithDense) {
  const GridSpec g{4, 3};
  const auto dense = heisenberg_exact_ground_state(g, EigenMethod::dense);
  const auto lanczos = heisenberg_exact_ground_state(g, EigenMethod::lanczos);
  EXPECT_NEAR(dense.energy, lanczos.energy, 1e-10);
  EXPECT_NEAR(std::abs(dense.vector.dot(lanczos.vector)), 1.0, 1e-9);
}

TEST(Heisenberg, OddChainFlagsDoublet) {
  const auto gs = heisenberg_exact_ground_state(GridSpec{1, 3});
  EXPECT_TRUE(gs.degenerate);
  EXPECT_NEAR(gs.energy, -1.0, 1e-12);
  EXPECT_NEAR(gs.vector.norm(), 1.0, 1e-12);
}

TEST(Heisenberg, RejectsOversizedGrid) {
  EXPECT_THROW(heisenberg_ground_state(GridSpec{3, 7}, 64), std::invalid_argument);
}

TEST(Bas, PatternCountsMatchEnumeration) {
  for (auto [r, c] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 6}, std::pair{6, 2}, std::pair{3, 3}}) {
    const auto p = bas_patterns(r, c);
    EXPECT_EQ(p, oracle::bas_by_enumeration(r, c));
    EXPECT_EQ(p.size(), (std::size_t{1} << r) + (std::size_t{1} << c) - 2);
  }
  EXPECT_EQ(bas_patterns(2, 2).size(), 6u);
}

TEST(Bas, UniformAmplitudes) {
  for (auto [r, c] : {std::pair{6, 2}, std::pair{2, 6}}) {
    const auto t = bas_superposition(r, c);
    const Vector v = to_statevector(t.state);
    int nonzero = 0;
    for (Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > 1e-12) {
        ++nonzero;
        EXPECT_NEAR(std::abs(v(i)), 1.0 / std::sqrt(66.0), 1e-12);
      }
    }
    EXPECT_EQ(nonzero, 66);
    EXPECT_NEAR(t.state.norm(), 1.0, 1e-12);
  }
}

// With the uniform images counted once, the middle-bond spectrum is not flat:
// for 2 x 6 it is one value 2/sqrt(66) and 62 values 1/sqrt(66).
TEST(Bas, MiddleBondSpectrumOfTwoBySix) {
  const auto t = bas_superposition(2, 6);
  const auto s = schmidt_spectrum(t.state, 5).support(1e-10);
  ASSERT_EQ(s.size(), 63);
  EXPECT_NEAR(s(0), 2.0 / std::sqrt(66.0), 1e-12);
  for (Index i = 1; i < s.size(); ++i) EXPECT_NEAR(s(i), 1.0 / std::sqrt(66.0), 1e-12);
  EXPECT_EQ(t.state.max_bond(), 63);
}

TEST(RandomMps, ProfileNormAndDeterminism) {
  const auto a = random_mps(12, 64, 7);
  const std::vector<Index> expect = {2, 4, 8, 16, 32, 64, 32, 16, 8, 4, 2};
  EXPECT_EQ(a.state.bond_dims(), expect);
  EXPECT_NEAR(a.state.norm(), 1.0, 1e-12);
  const auto b = random_mps(12, 64, 7);
  for (int i = 0; i < 12; ++i) {
    for (int s = 0; s < 2; ++s) {
      EXPECT_TRUE((a.state.core(i)[s].array() == b.state.core(i)[s].array()).all());
    }
  }
}

TEST(RandomMps, SignedEntriesDecaySlowerThanPositive) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto signed_state = random_mps(12, 64, seed, RandomEntries::real_gaussian).state;
    const auto positive = random_mps(12, 64, seed, RandomEntries::positive_gaussian).state;
    EXPECT_GT(schmidt_spectrum(signed_state, 5).entropy(), schmidt_spectrum(positive, 5).entropy());
  }
}

TEST(Descriptors, IdsAndJsonRoundTrip) {
  const auto targets = benchmark_targets(3);
  ASSERT_EQ(targets.size(), 3u);
  EXPECT_EQ(targets[0].id(), "heisenberg_4x3");
  EXPECT_EQ(targets[1].id(), "bas_2x6");
  EXPECT_EQ(targets[2].id(), "random_n12_chi64_s3");
  for (const auto& d : targets) {
    const auto back = descriptor_from_json(to_json(d));
    EXPECT_EQ(back.id(), d.id());
    EXPECT_EQ(back.kind, d.kind);
  }
  EXPECT_THROW(descriptor_from_json(nlohmann::json{{"kind", "nope"}}), std::invalid_argument);
}

TEST(Descriptors, BenchmarkTargetsAreUnitNormTwelveQubits) {
  for (const auto& d : benchmark_targets(0)) {
    const auto t = build_target(d);
    EXPECT_EQ(t.state.num_sites(), 12);
    EXPECT_LE(t.state.max_bond(), 64);
    EXPECT_NEAR(t.state.norm(), 1.0, 1e-12);
  }
}

TEST(Descriptors, SaveWritesStateAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "mpsqc_targets_test";
  std::filesystem::remove_all(dir);
  const auto t = build_target(benchmark_targets(0)[1]);
  const auto path = save_target(t, dir);
  EXPECT_NEAR(fidelity(load_mps(path), t.state), 1.0, 1e-14);
  std::ifstream side(dir / "bas_2x6.json");
  const auto j = nlohmann::json::parse(side);
  EXPECT_EQ(j.at("provenance").at("pattern_count").get<int>(), 66);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mpsqc
