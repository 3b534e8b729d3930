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
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpsqc/mps.hpp"

namespace mpsqc {

/// Open-boundary rows x cols lattice; site (r, c) maps to chain site r*cols + c.
struct GridSpec {
  int rows = 1;
  int cols = 1;

  int num_sites() const { return rows * cols; }
  /// Horizontal and vertical nearest-neighbour pairs (i < j).
  std::vector<std::pair<int, int>> edges() const;
};

/// H v for the spin-1/2 Heisenberg model sum_<ij> S_i . S_j, S = sigma / 2.
Vector apply_heisenberg(const GridSpec& grid, const Vector& v);
double heisenberg_energy(const GridSpec& grid, const Vector& v);

enum class EigenMethod { automatic, dense, lanczos };

struct GroundState {
  Vector vector;       // full 2^N amplitudes, unit norm
  double energy = 0.0;
  double gap = 0.0;    // to the next level found (same or neighbouring Sz sector)
  bool degenerate = false;
  int sector_up_spins = 0;
  std::string note;
};

/// Exact ground state. H conserves total S^z, so the lowest level is searched
/// in the sector with floor(N/2) up spins and compared with its neighbour
/// sector to detect degeneracy. Sectors up to `dense_limit` states are
/// diagonalized densely, larger ones by Lanczos with full reorthogonalization.
GroundState heisenberg_exact_ground_state(const GridSpec& grid,
                                          EigenMethod method = EigenMethod::automatic,
                                          Index dense_limit = 2500);

/// Statevector indices of all bars-and-stripes images, ascending. Pixel
/// (r, c) is qubit r*cols + c.
std::vector<std::uint64_t> bas_patterns(int rows, int cols);

enum class RandomEntries { real_gaussian, positive_gaussian, complex_gaussian };

enum class TargetKind { zero_state, heisenberg_gs, bas_superposition, random_mps };

struct TargetDescriptor {
  TargetKind kind = TargetKind::zero_state;
  GridSpec grid;          // heisenberg_gs and bas_superposition
  int num_sites = 0;      // zero_state and random_mps
  Index max_chi = 64;
  std::uint64_t seed = 0; // random_mps
  RandomEntries entries = RandomEntries::real_gaussian;

  std::string id() const;
};

struct Target {
  Mps state;
  TargetDescriptor descriptor;
  nlohmann::json provenance;
};

Target heisenberg_ground_state(const GridSpec& grid, Index max_chi);
Target bas_superposition(int rows, int cols);
Target random_mps(int num_sites, Index max_chi, std::uint64_t seed,
                  RandomEntries entries = RandomEntries::real_gaussian);
Target build_target(const TargetDescriptor& d);

/// The three 12-qubit chi=64 benchmark targets: Heisenberg on 4 rows x 3
/// columns, bars and stripes on 2 rows x 6 columns (middle bond 63), and a
/// real Gaussian random MPS.
std::vector<TargetDescriptor> benchmark_targets(std::uint64_t random_seed = 0);

nlohmann::json to_json(const TargetDescriptor& d);
TargetDescriptor descriptor_from_json(const nlohmann::json& j);

/// Writes `<dir>/<id>.mps` and the provenance sidecar `<dir>/<id>.json`.
std::filesystem::path save_target(const Target& t, const std::filesystem::path& dir);

}  // namespace mpsqc
