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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mpsqc/linalg.hpp"

namespace mpsqc {

/// One MPS site: a chi_left x chi_right matrix per physical state |0>, |1>.
using Core = std::array<Matrix, 2>;

inline Index chi_left(const Core& c) { return c[0].rows(); }
inline Index chi_right(const Core& c) { return c[0].cols(); }

/// Default relative singular-value cutoff used by truncate().
inline constexpr double kDefaultSvThreshold = 1e-12;

/// Default cap on the number of sites for dense statevector conversion.
inline constexpr int kStatevectorSiteCap = 20;

enum class Absorb { left, right };

struct GateOptions {
  std::optional<Index> max_chi;  // absent: keep every nonzero singular value
  double sv_threshold = 0.0;     // relative to the largest singular value
  bool adjoint = false;          // apply U^dag instead of U
  Absorb absorb = Absorb::right; // which core receives the singular values
};

/// Open-boundary matrix product state of qubits.
///
/// Site 0 is the most significant bit of a statevector index. If `center()` is
/// set, every core left of it is a left isometry and every core right of it a
/// right isometry.
class Mps {
 public:
  Mps() = default;
  explicit Mps(std::vector<Core> cores, std::optional<int> center = std::nullopt);

  static Mps zero_state(int num_sites);
  static Mps product_state(std::span<const int> bits);

  int num_sites() const { return static_cast<int>(cores_.size()); }
  const Core& core(int site) const { return cores_.at(site); }
  const std::vector<Core>& cores() const { return cores_; }
  std::optional<int> center() const { return center_; }

  /// chi_1 ... chi_{N-1}; bond b sits between sites b and b+1.
  std::vector<Index> bond_dims() const;
  Index max_bond() const;
  double norm() const;

  // In-place kernels. The free functions below wrap these with value semantics.
  void move_center(int site);
  void canonicalize_left();
  void canonicalize_right();
  void scale(Scalar factor);
  /// Returns the discarded weight (sum of dropped squared singular values).
  double apply_gate(const Matrix4& gate, int site, const GateOptions& opts = {});

 private:
  void shift_center_right(int site);
  void shift_center_left(int site);

  std::vector<Core> cores_;
  std::optional<int> center_;
};

struct SchmidtSpectrum {
  int bond = 0;
  RealVector values;  // non-increasing, squares sum to one

  double entropy() const;
  /// Values above `rel_tol` times the largest value.
  RealVector support(double rel_tol = 1e-10) const;
};

Mps left_canonicalize(Mps psi);
Mps right_canonicalize(Mps psi);
Mps normalize(Mps psi);

/// Left-canonicalizes, then sweeps right to left truncating each bond to at
/// most `max_chi` values and dropping values below `sv_threshold` relative to
/// the largest. The result is unit norm with its center on site 0.
Mps truncate(Mps psi, Index max_chi, double sv_threshold = kDefaultSvThreshold);

/// <psi|phi>.
Scalar inner_product(const Mps& psi, const Mps& phi);
double fidelity(const Mps& psi, const Mps& phi);

Mps apply_two_qubit_gate(Mps psi, const Matrix4& gate, int site, const GateOptions& opts = {});

Vector to_statevector(const Mps& psi, int site_cap = kStatevectorSiteCap);
/// Sequential SVDs from site 0; each bond keeps at most `max_chi` values and
/// drops those below `sv_threshold` relative to the largest. The result is
/// renormalized only if weight was discarded.
Mps from_statevector(const Vector& amplitudes, Index max_chi,
                     double sv_threshold = kDefaultSvThreshold);

SchmidtSpectrum schmidt_spectrum(const Mps& psi, int bond);

bool is_left_isometry(const Core& c, double tol = kTol.unitarity);
bool is_right_isometry(const Core& c, double tol = kTol.unitarity);

void save_mps(const Mps& psi, std::ostream& os);
Mps load_mps(std::istream& is);
void save_mps(const Mps& psi, const std::filesystem::path& path);
Mps load_mps(const std::filesystem::path& path);

}  // namespace mpsqc
