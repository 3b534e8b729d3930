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

#include "mpsqc/statevector.hpp"

#include <stdexcept>
#include <string>

namespace mpsqc {
namespace {

// Strides of the two bits of pair (q, q+1) in a big-endian index.
struct PairStrides {
  Index lo;     // bit of qubit q+1
  Index hi;     // bit of qubit q
  Index outer;  // period of the upper bits
};

PairStrides pair_strides(int num_sites, int q) {
  if (q < 0 || q + 1 >= num_sites) {
    throw std::out_of_range("pair (" + std::to_string(q) + ", " + std::to_string(q + 1) +
                            ") outside a " + std::to_string(num_sites) + "-qubit register");
  }
  const Index lo = Index{1} << (num_sites - 2 - q);
  return {lo, 2 * lo, 4 * lo};
}

}  // namespace

DenseState::DenseState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  const Index dim = amps_.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("DenseState: length is not a power of two >= 2");
  }
  while ((Index{1} << num_sites_) < dim) ++num_sites_;
}

DenseState DenseState::zero_state(int num_sites) {
  if (num_sites < 1 || num_sites > 30) throw std::invalid_argument("DenseState: bad qubit count");
  Vector v = Vector::Zero(Index{1} << num_sites);
  v(0) = 1.0;
  return DenseState(std::move(v));
}

void DenseState::apply_gate(const Matrix4& gate, int q, bool adjoint) {
  const auto st = pair_strides(num_sites_, q);
  const Matrix4 g = adjoint ? Matrix4(gate.adjoint()) : gate;
  const Index dim = amps_.size();
  Scalar* a = amps_.data();
  for (Index base = 0; base < dim; base += st.outer) {
    for (Index j = 0; j < st.lo; ++j) {
      const Index i0 = base + j;
      const Index i1 = i0 + st.lo;
      const Index i2 = i0 + st.hi;
      const Index i3 = i2 + st.lo;
      const Scalar v0 = a[i0], v1 = a[i1], v2 = a[i2], v3 = a[i3];
      a[i0] = g(0, 0) * v0 + g(0, 1) * v1 + g(0, 2) * v2 + g(0, 3) * v3;
      a[i1] = g(1, 0) * v0 + g(1, 1) * v1 + g(1, 2) * v2 + g(1, 3) * v3;
      a[i2] = g(2, 0) * v0 + g(2, 1) * v1 + g(2, 2) * v2 + g(2, 3) * v3;
      a[i3] = g(3, 0) * v0 + g(3, 1) * v1 + g(3, 2) * v2 + g(3, 3) * v3;
    }
  }
}

Matrix4 pair_environment(const DenseState& ket, const DenseState& bra, int q) {
  if (ket.num_sites() != bra.num_sites()) {
    throw std::invalid_argument("pair_environment: register sizes differ");
  }
  const auto st = pair_strides(ket.num_sites(), q);
  const Index dim = ket.amplitudes().size();
  const Scalar* k = ket.amplitudes().data();
  const Scalar* b = bra.amplitudes().data();
  Matrix4 f = Matrix4::Zero();
  for (Index base = 0; base < dim; base += st.outer) {
    for (Index j = 0; j < st.lo; ++j) {
      const Index i0 = base + j;
      const Index idx[4] = {i0, i0 + st.lo, i0 + st.hi, i0 + st.hi + st.lo};
      Eigen::Vector4cd kv, bv;
      for (int r = 0; r < 4; ++r) {
        kv(r) = k[idx[r]];
        bv(r) = b[idx[r]];
      }
      f.noalias() += kv * bv.adjoint();
    }
  }
  return f;
}

Matrix4 pair_environment(const Mps& ket, const Mps& bra, int q) {
  const int n = ket.num_sites();
  if (bra.num_sites() != n) throw std::invalid_argument("pair_environment: register sizes differ");
  if (q < 0 || q + 1 >= n) throw std::out_of_range("pair_environment: pair outside register");

  // left[beta, alpha] over sites < q, right[alpha, beta] over sites > q + 1
  Matrix left = Matrix::Ones(1, 1);
  for (int i = 0; i < q; ++i) {
    const Core& a = ket.core(i);
    const Core& b = bra.core(i);
    Matrix next = b[0].adjoint() * left * a[0];
    next.noalias() += b[1].adjoint() * left * a[1];
    left = std::move(next);
  }
  Matrix right = Matrix::Ones(1, 1);
  for (int i = n - 1; i > q + 1; --i) {
    const Core& a = ket.core(i);
    const Core& b = bra.core(i);
    Matrix next = a[0] * right * b[0].adjoint();
    next.noalias() += a[1] * right * b[1].adjoint();
    right = std::move(next);
  }

  Matrix ket_pair[4];
  Matrix bra_pair[4];
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      ket_pair[2 * s + t] = left * ket.core(q)[s] * ket.core(q + 1)[t] * right;
      bra_pair[2 * s + t] = bra.core(q)[s] * bra.core(q + 1)[t];
    }
  }
  Matrix4 f;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) f(x, y) = ket_pair[x].cwiseProduct(bra_pair[y].conjugate()).sum();
  }
  return f;
}

}  // namespace mpsqc
