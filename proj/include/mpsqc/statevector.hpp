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

#pragma once

#include "mpsqc/mps.hpp"

namespace mpsqc {

/// Dense 2^N amplitude vector, big-endian (qubit 0 is the most significant
/// bit). Used for exact contraction when N is small enough.
class DenseState {
 public:
  DenseState() = default;
  explicit DenseState(Vector amplitudes);

  static DenseState zero_state(int num_sites);
  static DenseState from_mps(const Mps& psi) { return DenseState(to_statevector(psi)); }

  int num_sites() const { return num_sites_; }
  const Vector& amplitudes() const { return amps_; }

  /// Applies `gate` (or its adjoint) to qubits (q, q+1).
  void apply_gate(const Matrix4& gate, int q, bool adjoint = false);

 private:
  Vector amps_;
  int num_sites_ = 0;
};

/// F(a, b) = sum over all qubits other than (q, q+1) of ket[a, rest] *
/// conj(bra[b, rest]), with a, b the 2-qubit basis index of the pair. For any
/// two-qubit W on the pair, <bra| W^dag |ket> = tr(F W^dag).
Matrix4 pair_environment(const DenseState& ket, const DenseState& bra, int q);
Matrix4 pair_environment(const Mps& ket, const Mps& bra, int q);

}  // namespace mpsqc
