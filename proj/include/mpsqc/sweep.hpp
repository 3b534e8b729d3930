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
#include <iosfwd>
#include <optional>
#include <vector>

#include "mpsqc/circuit.hpp"
#include "mpsqc/statevector.hpp"

namespace mpsqc {

/// How the two cached sides of the fidelity network are stored.
enum class CacheBackend {
  automatic,  // dense up to SweepConfig::dense_site_limit qubits, MPS beyond
  dense,
  mps,
};

struct SweepConfig {
  int max_sweeps = 100;                  // T
  double target_fidelity = 1.0 - 1e-12;  // checked after every full sweep
  double learning_rate = 0.6;            // r
  CacheBackend backend = CacheBackend::automatic;
  int dense_site_limit = 16;
  std::optional<Index> max_chi;  // MPS backend only; absent keeps the contraction exact
  int coherence_probes = 5;      // (sweep, gate) pairs re-checked against a fresh contraction
  std::uint64_t probe_seed = 0;
  bool record_updates = true;
};

/// Gates eligible for updates: either every gate or those of chosen layers.
class GateScope {
 public:
  static GateScope all() { return GateScope(); }
  /// `layers` are 0-based indices into StaircaseCircuit::layers.
  static GateScope only_layers(std::vector<int> layers);

  bool contains(const GateRef& g) const;

 private:
  std::optional<std::vector<int>> layers_;
};

struct UpdateRecord {
  int sweep = 0;                 // 1-based
  int gate_index = 0;            // m, 1-based position in application order
  double fidelity_before = 0.0;
  double fidelity = 0.0;         // after the update
  double wall_time = 0.0;        // seconds since the optimization started
};

struct FidelityTrace {
  double initial_fidelity = 0.0;
  std::vector<UpdateRecord> updates;
  std::vector<double> sweep_fidelity;  // after each completed sweep
  std::vector<double> sweep_seconds;
  long long num_updates = 0;
  int decreases = 0;         // updates that lowered the fidelity by more than 1e-12
  int reunitarizations = 0;  // gates projected back after drift beyond kTol.drift
  int probes = 0;
  double max_cache_deviation = 0.0;
  bool truncation_engaged = false;
  CacheBackend backend = CacheBackend::automatic;
  Diagnostics diagnostics;

  double final_fidelity() const {
    return sweep_fidelity.empty() ? initial_fidelity : sweep_fidelity.back();
  }
};

struct SweepResult {
  StaircaseCircuit circuit;
  FidelityTrace trace;
};

/// Incrementally maintained halves of the fidelity network
///   <0| U_1^dag ... U_{m-1}^dag  [U_m^dag]  U_{m+1}^dag ... U_M^dag |target>
/// around the cursor gate m (0-based here): `left` holds
/// U_{m-1} ... U_1 |0> and `right` holds U_{m+1}^dag ... U_M^dag |target>.
///
/// The cache reads gates from `circuit`, which must outlive it. Between
/// advance() calls only the gate under the cursor may change.
template <typename State>
class EnvironmentCache {
 public:
  EnvironmentCache(const StaircaseCircuit& circuit, const Mps& target,
                   std::optional<Index> max_chi = std::nullopt);

  /// Cursor back to the first gate; both sides rebuilt from the current gates.
  void reset();
  /// Moves the cursor one gate forward, applying the (possibly updated)
  /// cursor gate to the left side and undoing the next gate on the right.
  void advance();

  int cursor() const { return cursor_; }
  int num_gates() const { return static_cast<int>(order_.size()); }
  const std::vector<GateRef>& order() const { return order_; }

  /// 4x4 environment of gate m; requires m == cursor().
  Matrix4 environment(int m) const;

  bool truncated() const { return truncated_; }

 private:
  const TwoQubitUnitary& gate(int m) const;
  void apply(State& s, int m, bool adjoint);

  const StaircaseCircuit* circuit_;
  std::vector<GateRef> order_;
  State target_;
  State left_;
  State right_;
  std::optional<Index> max_chi_;
  int cursor_ = 0;
  bool truncated_ = false;
};

extern template class EnvironmentCache<DenseState>;
extern template class EnvironmentCache<Mps>;

/// Environment of gate m (0-based) contracted from scratch, without caching.
Matrix4 environment_tensor(const StaircaseCircuit& c, const Mps& target, int m,
                           CacheBackend backend = CacheBackend::automatic);

/// U (U^dag W)^r with W the closest unitary to F.
Matrix4 local_update(const Matrix4& u, const Matrix4& f, double r, Diagnostics* diag = nullptr);

/// Forward sweeps over the gates in `scope`, in application order, each gate
/// replaced by local_update against its environment. Stops after
/// cfg.max_sweeps sweeps or once a sweep ends at or above cfg.target_fidelity.
SweepResult sweep_optimize(StaircaseCircuit c, const Mps& target, const SweepConfig& cfg,
                           const GateScope& scope = GateScope::all());

/// CSV rows `sweep,gate_index,fidelity,wall_time` with a header row.
void write_trace_csv(const FidelityTrace& trace, std::ostream& os);

CacheBackend resolve_backend(CacheBackend requested, int num_sites, int dense_site_limit = 16);

}  // namespace mpsqc
