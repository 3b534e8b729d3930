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

#include "mpsqc/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mpsqc {
namespace {

// Places the completed unitary so that column a of the isometry answers the
// input |a>|0>, i.e. basis index 2a. Remaining inputs take the kernel columns
// in ascending index order.
Matrix4 gate_from_isometry(const Matrix& q) {
  const Matrix u = complete_isometry(q);
  const Index used = q.cols();
  Matrix4 g;
  Index next_kernel = used;
  for (Index in = 0; in < 4; ++in) {
    if (in % 2 == 0 && in / 2 < used) {
      g.col(in) = u.col(in / 2);
    } else {
      g.col(in) = u.col(next_kernel++);
    }
  }
  return g;
}

double overlap_with_zero(const Mps& psi) {
  return fidelity(Mps::zero_state(psi.num_sites()), psi);
}

}  // namespace

LinearLayer chi2_mps_to_layer(const Mps& phi) {
  const int n = phi.num_sites();
  if (n < 2) throw std::invalid_argument("chi2_mps_to_layer: need at least two qubits");
  for (Index d : phi.bond_dims()) {
    if (d > 2) {
      throw std::invalid_argument("chi2_mps_to_layer: bond dimension " + std::to_string(d) +
                                  " exceeds 2");
    }
  }
  if (std::abs(phi.norm() - 1.0) > kTol.unitarity) {
    throw std::invalid_argument("chi2_mps_to_layer: state is not normalized");
  }
  // The staircase emits its gates from site 0 outward, which is the
  // right-canonical form with the norm on site 0.
  const Mps rc = right_canonicalize(phi);
  std::vector<Matrix4> gates;
  gates.reserve(static_cast<std::size_t>(n - 1));

  auto two_site = [&](int site) {
    const Core& a = rc.core(site);
    const Core& b = rc.core(site + 1);
    Matrix q = Matrix::Zero(4, chi_left(a));
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) q.row(2 * s + t) = (a[s] * b[t]).col(0).transpose();
    }
    return q;
  };

  for (int site = 0; site + 1 < n; ++site) {
    if (site == n - 2) {
      gates.push_back(gate_from_isometry(two_site(site)));
      continue;
    }
    const Core& a = rc.core(site);
    Matrix q = Matrix::Zero(4, chi_left(a));
    for (int s = 0; s < 2; ++s) {
      for (Index out = 0; out < chi_right(a); ++out) q.row(2 * s + out) = a[s].col(out).transpose();
    }
    gates.push_back(gate_from_isometry(q));
  }
  return LinearLayer(std::move(gates));
}

DisentangleStep disentangle_step(const Mps& psi, double cleanup_threshold) {
  const Mps chi2 = truncate(psi, 2);
  DisentangleStep step;
  step.truncation_fidelity = fidelity(chi2, psi) / psi.norm();
  step.layer = chi2_mps_to_layer(chi2);
  Mps res = apply_layer(psi, step.layer, true);
  if (cleanup_threshold > 0.0) {
    const Index cap = res.max_bond();
    res = truncate(std::move(res), cap, cleanup_threshold);
  } else {
    res = normalize(std::move(res));
  }
  step.residual = std::move(res);
  return step;
}

AnalyticResult analytic_decompose(const Mps& psi, const AnalyticOptions& opts) {
  const bool uses_layers = opts.stop != StopRule::fidelity_only;
  if (uses_layers && opts.max_layers < 1) {
    throw std::invalid_argument("analytic_decompose: max_layers must be at least 1");
  }
  if (!uses_layers && !(opts.target_fidelity > 0.0 && opts.target_fidelity <= 1.0)) {
    throw std::invalid_argument("analytic_decompose: target fidelity must lie in (0, 1]");
  }
  AnalyticResult out;
  out.circuit.num_sites = psi.num_sites();
  out.residual = psi;
  double f = overlap_with_zero(psi);

  auto keep_going = [&](int k) {
    if (k >= opts.max_iterations) return false;
    switch (opts.stop) {
      case StopRule::layers_only:
        return k < opts.max_layers;
      case StopRule::fidelity_only:
        return k == 0 || f < opts.target_fidelity;
      case StopRule::layers_or_fidelity:
        return k == 0 || (k < opts.max_layers && f < opts.target_fidelity);
      case StopRule::layers_and_fidelity:
        return k < opts.max_layers || f < opts.target_fidelity;
    }
    return false;
  };

  for (int k = 0; keep_going(k); ++k) {
    const auto before = out.residual.bond_dims();
    auto step = disentangle_step(out.residual, opts.cleanup_threshold);
    out.circuit.layers.push_back(std::move(step.layer));
    out.residual = std::move(step.residual);
    f = overlap_with_zero(out.residual);

    DisentangleRecord rec;
    rec.iteration = k + 1;
    rec.fidelity_to_zero = f;
    rec.bond_dims = out.residual.bond_dims();
    rec.truncation_fidelity = step.truncation_fidelity;
    for (std::size_t b = 0; b < before.size(); ++b) {
      if (rec.bond_dims[b] > before[b]) rec.bond_growth = true;
    }
    out.trace.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace mpsqc
