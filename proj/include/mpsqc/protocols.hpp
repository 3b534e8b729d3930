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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpsqc/analytic.hpp"
#include "mpsqc/sweep.hpp"

namespace mpsqc {

/// The six ways of combining analytic disentangling (D), identity growth (I)
/// and sweep optimization (O).
enum class ProtocolKind {
  d_all,         // analytic layers only
  iter_di_oi,    // grow by one analytic layer, optimize that layer, disentangle
  o_all,         // random layers, optimize everything
  dall_oall,     // all analytic layers, then optimize everything
  iter_ii_oall,  // grow by an identity layer, optimize everything
  iter_di_oall,  // grow by one analytic layer, optimize everything
};

inline constexpr std::array<ProtocolKind, 6> kAllProtocols = {
    ProtocolKind::d_all,     ProtocolKind::iter_di_oi,   ProtocolKind::o_all,
    ProtocolKind::dall_oall, ProtocolKind::iter_ii_oall, ProtocolKind::iter_di_oall};

/// "D_all", "Iter_Di_Oi", "O_all", "Dall_Oall", "Iter_Ii_Oall", "Iter_Di_Oall".
std::string_view protocol_name(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view name);

bool is_iterative(ProtocolKind kind);
bool optimizes(ProtocolKind kind);

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::iter_di_oall;
  int num_layers = 1;         // K
  int sweeps_per_stage = 100; // T
  double learning_rate = 0.6;
  std::uint64_t seed = 0;
  bool budget_matching = false;  // flat optimizing kinds run matched_budget(k, T, N) sweeps
  bool retain_circuits = false;
  CacheBackend backend = CacheBackend::automatic;
  double target_fidelity = 1.0 - 1e-12;
};

struct DepthRecord {
  int k = 0;
  double infidelity = 1.0;
  long long updates = 0;  // gate updates spent to produce this depth's circuit
  int sweeps = 0;         // sweeps run at this depth
  double seconds = 0.0;
  std::vector<double> trace;  // infidelity after each sweep of this depth
};

struct DecompositionReport {
  std::string target_id;
  ProtocolKind kind = ProtocolKind::d_all;
  int num_layers = 0;
  int sweeps_per_stage = 0;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  bool budget_matching = false;
  std::vector<DepthRecord> rows;              // k = 1..K
  std::vector<StaircaseCircuit> circuits;     // circuits[k-1], when retained
};

/// Sweep count for a flat protocol at depth K that spends as many layer
/// sweeps as an iterative protocol reaching depth K with T sweeps per stage:
/// ceil(T (K + 1) / 2), independent of N.
int matched_budget(int num_layers, int sweeps, int num_sites);

DecompositionReport run_protocol(const Mps& target, const ProtocolSpec& spec,
                                 std::string target_id = "");

nlohmann::json to_json(const DecompositionReport& report);
DecompositionReport report_from_json(const nlohmann::json& j);

}  // namespace mpsqc
