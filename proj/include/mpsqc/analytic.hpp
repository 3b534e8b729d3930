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

#include <vector>

#include "mpsqc/circuit.hpp"

namespace mpsqc {

/// Maps a normalized MPS with every bond <= 2 onto one staircase layer L with
/// L|0...0> equal to the state (up to global phase). Bonds of dimension 1 are
/// treated as zero-padded to 2.
LinearLayer chi2_mps_to_layer(const Mps& phi);

struct DisentangleStep {
  LinearLayer layer;
  Mps residual;                      // L^dag psi, normalized
  double truncation_fidelity = 0.0;  // |<psi_chi2|psi>|
};

/// One round of truncate-to-chi-2, convert, and disentangle. Singular values
/// of the residual below `cleanup_threshold` (relative) are dropped; pass 0 to
/// keep the exact contraction.
DisentangleStep disentangle_step(const Mps& psi, double cleanup_threshold = kDefaultSvThreshold);

/// When analytic_decompose stops. `layers_or_fidelity` stops as soon as K
/// layers exist or the fidelity target is met; `layers_and_fidelity` keeps
/// going until both hold (the loop guard "k < K or f < f_hat" read literally),
/// bounded by `max_iterations`.
enum class StopRule { layers_only, fidelity_only, layers_or_fidelity, layers_and_fidelity };

struct AnalyticOptions {
  int max_layers = 1;
  double target_fidelity = 1.0 - 1e-12;
  StopRule stop = StopRule::layers_or_fidelity;
  int max_iterations = 1000;
  double cleanup_threshold = kDefaultSvThreshold;
};

struct DisentangleRecord {
  int iteration = 0;                 // k, number of layers extracted so far
  double fidelity_to_zero = 0.0;     // |<0...0|psi^(k)>|
  std::vector<Index> bond_dims;      // of psi^(k)
  double truncation_fidelity = 0.0;  // of the step that produced psi^(k)
  bool bond_growth = false;          // some bond of psi^(k) exceeds that of psi^(k-1)
};

struct DisentangleTrace {
  std::vector<DisentangleRecord> records;
};

struct AnalyticResult {
  StaircaseCircuit circuit;  // layers[k-1] was extracted at iteration k
  DisentangleTrace trace;
  Mps residual;              // psi^(K)
};

AnalyticResult analytic_decompose(const Mps& psi, const AnalyticOptions& opts);

}  // namespace mpsqc
