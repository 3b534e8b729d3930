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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mpsqc/mps.hpp"

namespace mpsqc {

/// A U(4) gate on the adjacent pair (first_qubit, first_qubit + 1). Basis
/// index of the matrix is 2 * b_first + b_second.
struct TwoQubitUnitary {
  Matrix4 matrix = Matrix4::Identity();
  int first_qubit = 0;

  int second_qubit() const { return first_qubit + 1; }
};

/// Staircase of N-1 gates on pairs (0,1), (1,2), ..., (N-2,N-1). Applied to a
/// ket, gate (0,1) acts first.
class LinearLayer {
 public:
  LinearLayer() = default;
  /// Takes one matrix per pair in ascending order.
  explicit LinearLayer(std::vector<Matrix4> gates);

  int num_sites() const { return static_cast<int>(gates_.size()) + 1; }
  int num_gates() const { return static_cast<int>(gates_.size()); }
  const TwoQubitUnitary& gate(int i) const { return gates_.at(i); }
  const std::vector<TwoQubitUnitary>& gates() const { return gates_; }
  void set_gate(int i, const Matrix4& matrix) { gates_.at(i).matrix = matrix; }

 private:
  std::vector<TwoQubitUnitary> gates_;
};

/// Layers L_1 ... L_K stored in index order. The prepared state is
/// L_1 L_2 ... L_K |0...0>, so layer K acts first.
struct StaircaseCircuit {
  int num_sites = 0;
  std::vector<LinearLayer> layers;

  int depth() const { return static_cast<int>(layers.size()); }
  int num_gates() const { return depth() * (num_sites - 1); }
};

/// Position of a gate in a circuit.
struct GateRef {
  int layer = 0;  // 0-based index into StaircaseCircuit::layers
  int gate = 0;   // index inside the layer, equal to the first qubit
};

/// Gates in the order they act on |0...0>: layer K ascending, ..., layer 1
/// ascending. Entry m - 1 is the gate U_m.
std::vector<GateRef> application_order(const StaircaseCircuit& c);

Mps apply_layer(Mps psi, const LinearLayer& layer, bool adjoint = false,
                std::optional<Index> max_chi = std::nullopt);

/// L_1 ... L_K |0...0>, contracted exactly unless `max_chi` is set.
Mps circuit_state(const StaircaseCircuit& c, std::optional<Index> max_chi = std::nullopt);

/// L_K^dag ... L_1^dag |target>.
Mps disentangle(const StaircaseCircuit& c, Mps target, std::optional<Index> max_chi = std::nullopt);

/// |<circuit state|target>| computed by building the circuit state.
double circuit_fidelity(const StaircaseCircuit& c, const Mps& target);

/// Same quantity computed by disentangling the target and overlapping with
/// |0...0>.
double circuit_fidelity_by_disentangling(const StaircaseCircuit& c, const Mps& target);

LinearLayer random_layer(int num_sites, std::uint64_t seed);
LinearLayer identity_layer(int num_sites);

void save_circuit(const StaircaseCircuit& c, std::ostream& os);
StaircaseCircuit load_circuit(std::istream& is);
void save_circuit(const StaircaseCircuit& c, const std::filesystem::path& path);
StaircaseCircuit load_circuit(const std::filesystem::path& path);

/// Text gate list, one gate per line:
/// `layer q0 q1 re(u00) im(u00) ... re(u33) im(u33)` (row-major).
void export_gate_list(const StaircaseCircuit& c, std::ostream& os);

}  // namespace mpsqc
