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

#include <array>
#include <cmath>
#include <sstream>

#include "mpsqc/mps.hpp"
#include "mpsqc/targets.hpp"
#include "oracles.hpp"

namespace mpsqc {
namespace {

Mps bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return from_statevector(v, 2);
}

Mps ghz(int n) {
  Vector v = Vector::Zero(Index{1} << n);
  v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
  return from_statevector(v, 2);
}

Mps random_state(int n, Index chi, std::uint64_t seed) {
  return random_mps(n, chi, seed, RandomEntries::complex_gaussian).state;
}

Matrix4 random_gate(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_unitary(4, rng);
}

TEST(Mps, ConstructorValidatesBonds) {
  Core a{Matrix::Ones(1, 2), Matrix::Ones(1, 2)};
  Core b{Matrix::Ones(3, 1), Matrix::Ones(3, 1)};
  EXPECT_THROW(Mps({a, b}), std::invalid_argument);
  Core c{Matrix::Ones(2, 2), Matrix::Ones(2, 2)};
  EXPECT_THROW(Mps({c}), std::invalid_argument);
}

TEST(Mps, ZeroStateIsNormalizedProduct) {
  const auto psi = Mps::zero_state(3);
  EXPECT_EQ(psi.max_bond(), 1);
  EXPECT_NEAR(psi.norm(), 1.0, 1e-15);
  const Vector v = to_statevector(psi);
  EXPECT_EQ(v, oracle::zero_vector(3));
}

TEST(Mps, ProductStateBigEndian) {
  const std::array<int, 3> bits = {1, 0, 1};
  const Vector v = to_statevector(Mps::product_state(bits));
  EXPECT_EQ(v(5), Scalar(1.0));
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
}

TEST(Canonical, ProductStateUnchanged) {
  const auto psi = Mps::zero_state(3);
  const auto l = left_canonicalize(psi);
  EXPECT_NEAR(fidelity(l, psi), 1.0, 1e-14);
  EXPECT_EQ(l.bond_dims(), psi.bond_dims());
}

TEST(Canonical, RandomMpsIsometries) {
  const auto psi = random_state(8, 4, 5);
  const auto l = left_canonicalize(psi);
  for (int i = 0; i + 1 < l.num_sites(); ++i) EXPECT_TRUE(is_left_isometry(l.core(i)));
  const auto r = right_canonicalize(psi);
  for (int i = 1; i < r.num_sites(); ++i) EXPECT_TRUE(is_right_isometry(r.core(i)));
  EXPECT_NEAR(fidelity(l, psi), 1.0, 1e-10);
  EXPECT_NEAR(fidelity(r, psi), 1.0, 1e-10);
}

TEST(Canonical, BellPairExact) {
  const auto psi = bell();
  EXPECT_NEAR(fidelity(left_canonicalize(psi), psi), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(right_canonicalize(psi), psi), 1.0, 1e-12);
}

TEST(Canonical, MoveCenterKeepsState) {
  auto psi = random_state(6, 4, 21);
  const Vector before = to_statevector(psi);
  for (int s : {0, 5, 2, 3}) {
    psi.move_center(s);
    EXPECT_EQ(psi.center(), s);
    EXPECT_LT((to_statevector(psi) - before).norm(), 1e-12);
  }
}

TEST(Normalize, UnitNorm) {
  auto psi = random_state(5, 4, 6);
  psi.scale(3.5);
  EXPECT_NEAR(normalize(psi).norm(), 1.0, 1e-12);
}

TEST(Truncate, ProductUnchanged) {
  const auto psi = Mps::zero_state(4);
  EXPECT_NEAR(fidelity(truncate(psi, 2), psi), 1.0, 1e-14);
}

TEST(Truncate, GhzUnchangedAtChi2) {
  const auto psi = ghz(5);
  const auto t = truncate(psi, 2);
  EXPECT_NEAR(fidelity(t, psi), 1.0, 1e-12);
  EXPECT_LE(t.max_bond(), 2);
}

TEST(Truncate, LargeCapIsExact) {
  const auto psi = random_state(8, 8, 13);
  const auto t = truncate(psi, 16, 0.0);
  EXPECT_NEAR(fidelity(t, psi), 1.0, 1e-12);
  EXPECT_EQ(t.center(), 0);
}

TEST(Truncate, HeisenbergMatchesDenseSchmidtOracle) {
  const GridSpec grid{4, 3};
  const auto gs = heisenberg_exact_ground_state(grid);
  const auto psi = from_statevector(gs.vector, 64);
  const auto t = truncate(psi, 2);
  const Vector dense = oracle::schmidt_truncate(gs.vector, 12, 2);
  EXPECT_NEAR(fidelity(t, psi), std::abs(dense.dot(gs.vector)), 1e-8);
  EXPECT_LE(t.max_bond(), 2);
}

TEST(Truncate, NotWorseThanSingleBondTruncation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto psi = random_state(8, 8, 40 + seed);
    const Vector v = to_statevector(psi);
    const double f = fidelity(truncate(psi, 2), psi);
    // Keeping rank 2 on one bond only is an upper bound for any chi=2 state.
    for (int b = 1; b < 8; ++b) {
      Eigen::Map<const Matrix> m(v.data(), Index{1} << (8 - b), Index{1} << b);
      Eigen::JacobiSVD<Matrix> svd(m);
      const auto& s = svd.singularValues();
      const double one_bond = std::sqrt(s(0) * s(0) + s(1) * s(1));
      EXPECT_LE(f, one_bond + 1e-12);
    }
    EXPECT_GT(f, 0.0);
  }
}

TEST(InnerProduct, Basics) {
  const auto psi = random_state(6, 4, 1);
  EXPECT_NEAR(std::abs(inner_product(psi, psi)), 1.0, 1e-12);
  const std::array<int, 3> zeros = {0, 0, 0};
  const std::array<int, 3> ones = {1, 1, 1};
  EXPECT_EQ(std::abs(inner_product(Mps::product_state(zeros), Mps::product_state(ones))), 0.0);
}

TEST(InnerProduct, MatchesDenseOracle) {
  for (int n = 2; n <= 10; ++n) {
    const auto psi = random_state(n, 4, 100 + n);
    const auto phi = random_state(n, 3, 200 + n);
    const Scalar dense = to_statevector(psi).dot(to_statevector(phi));
    EXPECT_LT(std::abs(inner_product(psi, phi) - dense), 1e-10);
  }
}

TEST(ApplyGate, IdentityIsNoOp) {
  const auto psi = random_state(5, 4, 3);
  for (int q = 0; q < 4; ++q) {
    const auto out = apply_two_qubit_gate(psi, Matrix4::Identity(), q);
    EXPECT_LT((to_statevector(out) - to_statevector(psi)).norm(), 1e-12);
  }
}

TEST(ApplyGate, GateThenAdjoint) {
  const auto psi = random_state(6, 4, 9);
  const Matrix4 u = random_gate(10);
  GateOptions adj;
  adj.adjoint = true;
  const auto out = apply_two_qubit_gate(apply_two_qubit_gate(psi, u, 2), u, 2, adj);
  EXPECT_NEAR(fidelity(out, psi), 1.0, 1e-10);
}

TEST(ApplyGate, CnotMakesBell) {
  Vector v = Vector::Zero(4);
  v(0) = v(2) = 1.0 / std::sqrt(2.0);
  const auto plus = from_statevector(v, 2);
  Matrix4 cnot = Matrix4::Zero();
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  const Vector out = to_statevector(apply_two_qubit_gate(plus, cnot, 0));
  Vector expect = Vector::Zero(4);
  expect(0) = expect(3) = 1.0 / std::sqrt(2.0);
  EXPECT_LT((out - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ApplyGate, MatchesDenseOperator) {
  const auto psi = random_state(6, 4, 31);
  const Matrix4 u = random_gate(32);
  for (int q = 0; q < 5; ++q) {
    const Vector out = to_statevector(apply_two_qubit_gate(psi, u, q));
    const Vector expect = oracle::embed(u, q, 6) * to_statevector(psi);
    EXPECT_LT((out - expect).norm(), 1e-12);
  }
}

TEST(ApplyGate, CapReportsDiscardedWeight) {
  auto psi = random_state(6, 8, 33);
  GateOptions opts;
  opts.max_chi = 1;
  const double discarded = psi.apply_gate(random_gate(34), 2, opts);
  EXPECT_GT(discarded, 0.0);
  EXPECT_EQ(psi.bond_dims()[2], 1);
}

TEST(Statevector, Basics) {
  EXPECT_EQ(to_statevector(Mps::zero_state(3)), oracle::zero_vector(3));
  Vector expect = Vector::Zero(4);
  expect(0) = expect(3) = 1.0 / std::sqrt(2.0);
  EXPECT_LT((to_statevector(bell()) - expect).norm(), 1e-15);
}

TEST(Statevector, RoundTrip) {
  const auto psi = random_state(6, 4, 2);
  const auto back = from_statevector(to_statevector(psi), 64);
  EXPECT_NEAR(fidelity(back, psi), 1.0, 1e-10);
}

TEST(Statevector, ProductInputs) {
  const auto zero = from_statevector(oracle::zero_vector(3), 4);
  EXPECT_EQ(zero.max_bond(), 1);
  const Vector plus = Vector::Constant(4, 0.5);
  const auto pp = from_statevector(plus, 4);
  EXPECT_EQ(pp.max_bond(), 1);
  EXPECT_LT((to_statevector(pp) - plus).norm(), 1e-14);
}

TEST(Statevector, HeisenbergChi64IsExact) {
  const auto gs = heisenberg_exact_ground_state(GridSpec{4, 3});
  const auto psi = from_statevector(gs.vector, 64);
  EXPECT_GE(std::abs(to_statevector(psi).dot(gs.vector)), 1.0 - 1e-10);
}

TEST(Statevector, RejectsBadInput) {
  EXPECT_THROW(from_statevector(Vector::Ones(3), 2), std::invalid_argument);
  EXPECT_THROW(from_statevector(Vector::Ones(4), 2), std::invalid_argument);
  EXPECT_THROW(to_statevector(Mps::zero_state(21)), std::length_error);
}

TEST(Schmidt, ProductAndBell) {
  const auto p = schmidt_spectrum(Mps::zero_state(3), 1);
  ASSERT_EQ(p.values.size(), 1);
  EXPECT_NEAR(p.values(0), 1.0, 1e-15);
  EXPECT_NEAR(p.entropy(), 0.0, 1e-15);
  const auto b = schmidt_spectrum(bell(), 0);
  ASSERT_EQ(b.values.size(), 2);
  EXPECT_NEAR(b.values(0), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(b.values(1), 1.0 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(b.entropy(), std::log(2.0), 1e-14);
}

TEST(Schmidt, MatchesDenseSvd) {
  const auto psi = random_state(8, 8, 17);
  const Vector v = to_statevector(psi);
  for (int b = 0; b < 7; ++b) {
    const Index left = Index{1} << (b + 1);
    Eigen::Map<const Matrix> colmajor(v.data(), Index{1} << (7 - b), left);
    Eigen::JacobiSVD<Matrix> svd(colmajor);
    const auto spec = schmidt_spectrum(psi, b);
    for (Index i = 0; i < spec.values.size(); ++i) {
      EXPECT_NEAR(spec.values(i), svd.singularValues()(i), 1e-12);
    }
    EXPECT_GE(spec.entropy(), 0.0);
  }
}

TEST(Serialization, BitExactRoundTrip) {
  auto psi = random_state(7, 8, 44);
  psi.move_center(3);
  std::stringstream ss;
  save_mps(psi, ss);
  const auto back = load_mps(ss);
  ASSERT_EQ(back.num_sites(), psi.num_sites());
  EXPECT_EQ(back.center(), psi.center());
  for (int i = 0; i < psi.num_sites(); ++i) {
    for (int s = 0; s < 2; ++s) {
      EXPECT_TRUE((back.core(i)[s].array() == psi.core(i)[s].array()).all());
    }
  }
}

TEST(Serialization, RejectsForeignHeader) {
  std::stringstream ss("{\"format\":\"something-else\",\"version\":1}\n");
  EXPECT_THROW(load_mps(ss), std::runtime_error);
}

}  // namespace
}  // namespace mpsqc
