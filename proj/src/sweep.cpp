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

#include "mpsqc/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace mpsqc {
namespace {

template <typename State>
State make_state(const Mps& psi);

template <>
DenseState make_state<DenseState>(const Mps& psi) {
  return DenseState::from_mps(psi);
}

template <>
Mps make_state<Mps>(const Mps& psi) {
  return psi;
}

template <typename State>
State zero_state(int n) {
  return State::zero_state(n);
}

// Returns true when a truncation discarded weight.
bool apply_to(DenseState& s, const Matrix4& g, int q, bool adjoint, Absorb,
              std::optional<Index>) {
  s.apply_gate(g, q, adjoint);
  return false;
}

bool apply_to(Mps& s, const Matrix4& g, int q, bool adjoint, Absorb absorb,
              std::optional<Index> max_chi) {
  GateOptions opts;
  opts.adjoint = adjoint;
  opts.absorb = absorb;
  opts.max_chi = max_chi;
  return s.apply_gate(g, q, opts) > 0.0;
}

const TwoQubitUnitary& gate_at(const StaircaseCircuit& c, const GateRef& r) {
  return c.layers[r.layer].gate(r.gate);
}

template <typename State>
Matrix4 environment_from_scratch(const StaircaseCircuit& c, const Mps& target, int m) {
  const auto order = application_order(c);
  State left = zero_state<State>(c.num_sites);
  for (int j = 0; j < m; ++j) {
    const auto& g = gate_at(c, order[j]);
    apply_to(left, g.matrix, g.first_qubit, false, Absorb::right, std::nullopt);
  }
  State right = make_state<State>(target);
  for (int j = static_cast<int>(order.size()) - 1; j > m; --j) {
    const auto& g = gate_at(c, order[j]);
    apply_to(right, g.matrix, g.first_qubit, true, Absorb::left, std::nullopt);
  }
  return pair_environment(right, left, gate_at(c, order[m]).first_qubit);
}

double trace_fidelity(const Matrix4& f, const Matrix4& u) {
  return std::abs((f * u.adjoint()).trace());
}

}  // namespace

GateScope GateScope::only_layers(std::vector<int> layers) {
  GateScope s;
  s.layers_ = std::move(layers);
  return s;
}

bool GateScope::contains(const GateRef& g) const {
  if (!layers_) return true;
  return std::find(layers_->begin(), layers_->end(), g.layer) != layers_->end();
}

template <typename State>
EnvironmentCache<State>::EnvironmentCache(const StaircaseCircuit& circuit, const Mps& target,
                                          std::optional<Index> max_chi)
    : circuit_(&circuit),
      order_(application_order(circuit)),
      target_(make_state<State>(target)),
      max_chi_(max_chi) {
  if (target.num_sites() != circuit.num_sites) {
    throw std::invalid_argument("EnvironmentCache: circuit and target sizes differ");
  }
  if (order_.empty()) throw std::invalid_argument("EnvironmentCache: circuit has no gates");
  reset();
}

template <typename State>
const TwoQubitUnitary& EnvironmentCache<State>::gate(int m) const {
  return gate_at(*circuit_, order_[m]);
}

template <typename State>
void EnvironmentCache<State>::apply(State& s, int m, bool adjoint) {
  const auto& g = gate(m);
  const Absorb absorb = adjoint ? Absorb::left : Absorb::right;
  if (apply_to(s, g.matrix, g.first_qubit, adjoint, absorb, max_chi_)) truncated_ = true;
}

template <typename State>
void EnvironmentCache<State>::reset() {
  left_ = zero_state<State>(circuit_->num_sites);
  right_ = target_;
  for (int j = num_gates() - 1; j > 0; --j) apply(right_, j, true);
  cursor_ = 0;
}

template <typename State>
void EnvironmentCache<State>::advance() {
  if (cursor_ + 1 >= num_gates()) throw std::logic_error("EnvironmentCache: advanced past last gate");
  apply(left_, cursor_, false);
  apply(right_, cursor_ + 1, false);
  ++cursor_;
}

template <typename State>
Matrix4 EnvironmentCache<State>::environment(int m) const {
  if (m != cursor_) {
    throw std::logic_error("EnvironmentCache: environment of gate " + std::to_string(m) +
                           " requested with cursor at " + std::to_string(cursor_));
  }
  return pair_environment(right_, left_, gate(m).first_qubit);
}

template class EnvironmentCache<DenseState>;
template class EnvironmentCache<Mps>;

CacheBackend resolve_backend(CacheBackend requested, int num_sites, int dense_site_limit) {
  if (requested != CacheBackend::automatic) return requested;
  return num_sites <= dense_site_limit ? CacheBackend::dense : CacheBackend::mps;
}

Matrix4 environment_tensor(const StaircaseCircuit& c, const Mps& target, int m,
                           CacheBackend backend) {
  if (m < 0 || m >= c.num_gates()) throw std::out_of_range("environment_tensor: gate index out of range");
  if (target.num_sites() != c.num_sites) {
    throw std::invalid_argument("environment_tensor: circuit and target sizes differ");
  }
  if (resolve_backend(backend, c.num_sites) == CacheBackend::dense) {
    return environment_from_scratch<DenseState>(c, target, m);
  }
  return environment_from_scratch<Mps>(c, target, m);
}

Matrix4 local_update(const Matrix4& u, const Matrix4& f, double r, Diagnostics* diag) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("local_update: learning rate outside [0, 1]");
  if (r == 0.0) return u;
  const Matrix4 best = closest_unitary(f, diag);
  if (r == 1.0) return best;
  const Matrix4 step = fractional_unitary_power(u.adjoint() * best, r, diag);
  return u * step;
}

namespace {

template <typename State>
void run_sweeps(StaircaseCircuit& c, const Mps& target, const SweepConfig& cfg,
                const GateScope& scope, FidelityTrace& trace) {
  EnvironmentCache<State> cache(c, target, cfg.max_chi);
  const auto& order = cache.order();
  std::vector<char> in_scope(order.size());
  int last = -1;
  for (std::size_t m = 0; m < order.size(); ++m) {
    in_scope[m] = scope.contains(order[m]) ? 1 : 0;
    if (in_scope[m]) last = static_cast<int>(m);
  }
  {
    const auto& g = gate_at(c, order[0]);
    trace.initial_fidelity = trace_fidelity(cache.environment(0), g.matrix);
  }
  if (last < 0) return;

  std::set<std::pair<int, int>> probes;
  if (cfg.coherence_probes > 0 && cfg.max_sweeps > 0) {
    std::mt19937_64 rng(cfg.probe_seed);
    std::vector<int> scoped;
    for (int m = 0; m <= last; ++m) {
      if (in_scope[m]) scoped.push_back(m);
    }
    std::uniform_int_distribution<int> pick_sweep(0, cfg.max_sweeps - 1);
    std::uniform_int_distribution<std::size_t> pick_gate(0, scoped.size() - 1);
    for (int i = 0; i < cfg.coherence_probes; ++i) probes.emplace(pick_sweep(rng), scoped[pick_gate(rng)]);
  }

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  double f = trace.initial_fidelity;
  for (int t = 0; t < cfg.max_sweeps; ++t) {
    const auto sweep_start = clock::now();
    if (t > 0) cache.reset();
    for (int m = 0; m <= last; ++m) {
      if (in_scope[m]) {
        const GateRef ref = order[m];
        const Matrix4 env = cache.environment(m);
        const Matrix4 u = c.layers[ref.layer].gate(ref.gate).matrix;
        const double before = trace_fidelity(env, u);
        Matrix4 updated = local_update(u, env, cfg.learning_rate, &trace.diagnostics);
        if (isometry_error(updated) > kTol.drift) {
          updated = closest_unitary(updated);
          ++trace.reunitarizations;
        }
        c.layers[ref.layer].set_gate(ref.gate, updated);
        f = trace_fidelity(env, updated);
        ++trace.num_updates;
        if (f < before - 1e-12) ++trace.decreases;
        if (cfg.record_updates) {
          const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
          trace.updates.push_back({t + 1, m + 1, before, f, elapsed});
        }
        if (probes.count({t, m})) {
          const Matrix4 fresh = environment_tensor(
              c, target, m, std::is_same_v<State, DenseState> ? CacheBackend::dense : CacheBackend::mps);
          trace.max_cache_deviation =
              std::max(trace.max_cache_deviation, (fresh - env).cwiseAbs().maxCoeff());
          ++trace.probes;
        }
      }
      if (m < last) cache.advance();
    }
    trace.sweep_fidelity.push_back(f);
    trace.sweep_seconds.push_back(std::chrono::duration<double>(clock::now() - sweep_start).count());
    if (f >= cfg.target_fidelity) break;
  }
  trace.truncation_engaged = cache.truncated();
}

}  // namespace

SweepResult sweep_optimize(StaircaseCircuit c, const Mps& target, const SweepConfig& cfg,
                           const GateScope& scope) {
  if (cfg.max_sweeps < 0) throw std::invalid_argument("sweep_optimize: negative sweep count");
  if (!(cfg.learning_rate >= 0.0 && cfg.learning_rate <= 1.0)) {
    throw std::invalid_argument("sweep_optimize: learning rate outside [0, 1]");
  }
  if (target.num_sites() != c.num_sites) {
    throw std::invalid_argument("sweep_optimize: circuit and target sizes differ");
  }
  SweepResult out;
  out.trace.backend = resolve_backend(cfg.backend, c.num_sites, cfg.dense_site_limit);
  if (c.num_gates() == 0) {
    out.trace.initial_fidelity = fidelity(Mps::zero_state(target.num_sites()), target);
    out.circuit = std::move(c);
    return out;
  }
  if (out.trace.backend == CacheBackend::dense) {
    run_sweeps<DenseState>(c, target, cfg, scope, out.trace);
  } else {
    run_sweeps<Mps>(c, target, cfg, scope, out.trace);
  }
  out.circuit = std::move(c);
  return out;
}

void write_trace_csv(const FidelityTrace& trace, std::ostream& os) {
  os << "sweep,gate_index,fidelity,wall_time\n";
  const auto old_precision = os.precision(12);
  for (const auto& u : trace.updates) {
    os << u.sweep << ',' << u.gate_index << ',' << u.fidelity << ',' << u.wall_time << '\n';
  }
  os.precision(old_precision);
}

}  // namespace mpsqc
