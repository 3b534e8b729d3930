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

#include "mpsqc/protocols.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace mpsqc {
namespace {

constexpr std::array<std::string_view, 6> kNames = {"D_all",     "Iter_Di_Oi",   "O_all",
                                                    "Dall_Oall", "Iter_Ii_Oall", "Iter_Di_Oall"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

double clamp_infidelity(double f) { return std::clamp(1.0 - f, 0.0, 1.0); }

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

class Runner {
 public:
  Runner(const Mps& target, const ProtocolSpec& spec) : target_(target), spec_(spec) {}

  DecompositionReport run(std::string target_id) {
    report_.target_id = std::move(target_id);
    report_.kind = spec_.kind;
    report_.num_layers = spec_.num_layers;
    report_.sweeps_per_stage = spec_.sweeps_per_stage;
    report_.learning_rate = spec_.learning_rate;
    report_.seed = spec_.seed;
    report_.budget_matching = spec_.budget_matching;
    switch (spec_.kind) {
      case ProtocolKind::d_all: run_d_all(); break;
      case ProtocolKind::iter_di_oi: run_iter_di_oi(); break;
      case ProtocolKind::o_all: run_flat(false); break;
      case ProtocolKind::dall_oall: run_flat(true); break;
      case ProtocolKind::iter_ii_oall: run_iter_all(false); break;
      case ProtocolKind::iter_di_oall: run_iter_all(true); break;
    }
    return std::move(report_);
  }

 private:
  SweepConfig sweep_config(int sweeps, int k) const {
    SweepConfig cfg;
    cfg.max_sweeps = sweeps;
    cfg.learning_rate = spec_.learning_rate;
    cfg.backend = spec_.backend;
    cfg.target_fidelity = spec_.target_fidelity;
    cfg.probe_seed = derive_seed(spec_.seed, 0x70726f6265ULL, static_cast<std::uint64_t>(k));
    cfg.record_updates = false;
    return cfg;
  }

  void record(int k, double f, long long updates, double seconds, const FidelityTrace* trace,
              const StaircaseCircuit& circuit) {
    DepthRecord row;
    row.k = k;
    row.infidelity = clamp_infidelity(f);
    row.updates = updates;
    row.seconds = seconds;
    if (trace) {
      row.sweeps = static_cast<int>(trace->sweep_fidelity.size());
      row.trace.reserve(trace->sweep_fidelity.size());
      for (double x : trace->sweep_fidelity) row.trace.push_back(clamp_infidelity(x));
    }
    report_.rows.push_back(std::move(row));
    if (spec_.retain_circuits) report_.circuits.push_back(circuit);
  }

  static StaircaseCircuit prefix(const StaircaseCircuit& c, int k) {
    StaircaseCircuit p;
    p.num_sites = c.num_sites;
    p.layers.assign(c.layers.begin(), c.layers.begin() + k);
    return p;
  }

  AnalyticResult analytic(int layers) const {
    AnalyticOptions opts;
    opts.max_layers = layers;
    opts.stop = StopRule::layers_only;
    return analytic_decompose(target_, opts);
  }

  void run_d_all() {
    const auto t0 = clock::now();
    const auto res = analytic(spec_.num_layers);
    const double elapsed = seconds_since(t0);
    for (int k = 1; k <= spec_.num_layers; ++k) {
      record(k, res.trace.records[k - 1].fidelity_to_zero, 0, elapsed, nullptr,
             spec_.retain_circuits ? prefix(res.circuit, k) : StaircaseCircuit{});
    }
  }

  void run_iter_di_oi() {
    const auto t0 = clock::now();
    StaircaseCircuit circuit;
    circuit.num_sites = target_.num_sites();
    Mps residual = target_;
    long long updates = 0;
    for (int k = 1; k <= spec_.num_layers; ++k) {
      auto step = disentangle_step(residual);
      circuit.layers.push_back(std::move(step.layer));
      auto opt = sweep_optimize(std::move(circuit), target_, sweep_config(spec_.sweeps_per_stage, k),
                                GateScope::only_layers({k - 1}));
      circuit = std::move(opt.circuit);
      updates += opt.trace.num_updates;
      residual = apply_layer(std::move(residual), circuit.layers.back(), true);
      const Index cap = residual.max_bond();
      residual = truncate(std::move(residual), cap, kDefaultSvThreshold);
      record(k, opt.trace.final_fidelity(), updates, seconds_since(t0), &opt.trace, circuit);
    }
  }

  void run_flat(bool analytic_init) {
    const int n = target_.num_sites();
    AnalyticResult init;
    double analytic_seconds = 0.0;
    if (analytic_init) {
      const auto t0 = clock::now();
      init = analytic(spec_.num_layers);
      analytic_seconds = seconds_since(t0);
    }
    for (int k = 1; k <= spec_.num_layers; ++k) {
      const auto t0 = clock::now();
      StaircaseCircuit circuit;
      if (analytic_init) {
        circuit = prefix(init.circuit, k);
      } else {
        circuit.num_sites = n;
        for (int l = 0; l < k; ++l) {
          circuit.layers.push_back(random_layer(
              n, derive_seed(spec_.seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l))));
        }
      }
      const int sweeps = spec_.budget_matching
                             ? matched_budget(k, spec_.sweeps_per_stage, n)
                             : spec_.sweeps_per_stage;
      auto opt = sweep_optimize(std::move(circuit), target_, sweep_config(sweeps, k));
      record(k, opt.trace.final_fidelity(), opt.trace.num_updates,
             seconds_since(t0) + analytic_seconds, &opt.trace, opt.circuit);
    }
  }

  void run_iter_all(bool analytic_growth) {
    const auto t0 = clock::now();
    const int n = target_.num_sites();
    StaircaseCircuit circuit;
    circuit.num_sites = n;
    long long updates = 0;
    for (int k = 1; k <= spec_.num_layers; ++k) {
      if (analytic_growth) {
        auto step = disentangle_step(disentangle(circuit, target_));
        circuit.layers.push_back(std::move(step.layer));
      } else {
        circuit.layers.push_back(identity_layer(n));
      }
      auto opt = sweep_optimize(std::move(circuit), target_, sweep_config(spec_.sweeps_per_stage, k));
      circuit = std::move(opt.circuit);
      updates += opt.trace.num_updates;
      record(k, opt.trace.final_fidelity(), updates, seconds_since(t0), &opt.trace, circuit);
    }
  }

  const Mps& target_;
  ProtocolSpec spec_;
  DecompositionReport report_;
};

}  // namespace

std::string_view protocol_name(ProtocolKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

ProtocolKind parse_protocol(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kAllProtocols[i];
  }
  throw std::invalid_argument("unknown protocol '" + std::string(name) + "'");
}

bool is_iterative(ProtocolKind kind) {
  return kind == ProtocolKind::iter_di_oi || kind == ProtocolKind::iter_ii_oall ||
         kind == ProtocolKind::iter_di_oall;
}

bool optimizes(ProtocolKind kind) { return kind != ProtocolKind::d_all; }

int matched_budget(int num_layers, int sweeps, int num_sites) {
  if (num_layers < 1 || sweeps < 1) throw std::invalid_argument("matched_budget: K and T must be >= 1");
  (void)num_sites;
  return (sweeps * (num_layers + 1) + 1) / 2;
}

DecompositionReport run_protocol(const Mps& target, const ProtocolSpec& spec, std::string target_id) {
  if (spec.num_layers < 1) throw std::invalid_argument("run_protocol: K must be at least 1");
  if (spec.sweeps_per_stage < 0) throw std::invalid_argument("run_protocol: T must be non-negative");
  if (target.num_sites() < 2) throw std::invalid_argument("run_protocol: need at least two qubits");
  if (std::abs(target.norm() - 1.0) > kTol.unitarity) {
    throw std::invalid_argument("run_protocol: target is not normalized");
  }
  return Runner(target, spec).run(std::move(target_id));
}

nlohmann::json to_json(const DecompositionReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"k", r.k},
                    {"infidelity", r.infidelity},
                    {"updates", r.updates},
                    {"sweeps", r.sweeps},
                    {"seconds", r.seconds},
                    {"trace", r.trace}});
  }
  return {{"target_id", report.target_id},
          {"kind", protocol_name(report.kind)},
          {"K", report.num_layers},
          {"T", report.sweeps_per_stage},
          {"r", report.learning_rate},
          {"seed", report.seed},
          {"budget_matching", report.budget_matching},
          {"rows", rows}};
}

DecompositionReport report_from_json(const nlohmann::json& j) {
  DecompositionReport report;
  report.target_id = j.at("target_id").get<std::string>();
  report.kind = parse_protocol(j.at("kind").get<std::string>());
  report.num_layers = j.at("K").get<int>();
  report.sweeps_per_stage = j.at("T").get<int>();
  report.learning_rate = j.at("r").get<double>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.budget_matching = j.value("budget_matching", false);
  for (const auto& r : j.at("rows")) {
    DepthRecord row;
    row.k = r.at("k").get<int>();
    row.infidelity = r.at("infidelity").get<double>();
    row.updates = r.at("updates").get<long long>();
    row.sweeps = r.value("sweeps", 0);
    row.seconds = r.value("seconds", 0.0);
    row.trace = r.value("trace", std::vector<double>{});
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace mpsqc
