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

#include "mpsqc/circuit.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"

namespace mpsqc {

LinearLayer::LinearLayer(std::vector<Matrix4> gates) {
  if (gates.empty()) throw std::invalid_argument("LinearLayer: need at least one gate");
  gates_.reserve(gates.size());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (!is_unitary(gates[i], kTol.unitarity)) {
      throw std::invalid_argument("LinearLayer: gate " + std::to_string(i) + " is not unitary");
    }
    gates_.push_back({gates[i], static_cast<int>(i)});
  }
}

std::vector<GateRef> application_order(const StaircaseCircuit& c) {
  std::vector<GateRef> order;
  order.reserve(static_cast<std::size_t>(c.num_gates()));
  for (int k = c.depth() - 1; k >= 0; --k) {
    for (int g = 0; g < c.layers[k].num_gates(); ++g) order.push_back({k, g});
  }
  return order;
}

Mps apply_layer(Mps psi, const LinearLayer& layer, bool adjoint, std::optional<Index> max_chi) {
  if (layer.num_sites() != psi.num_sites()) {
    throw std::invalid_argument("apply_layer: layer spans " + std::to_string(layer.num_sites()) +
                                " qubits, state has " + std::to_string(psi.num_sites()));
  }
  GateOptions opts;
  opts.max_chi = max_chi;
  opts.adjoint = adjoint;
  if (!adjoint) {
    opts.absorb = Absorb::right;
    for (const auto& g : layer.gates()) psi.apply_gate(g.matrix, g.first_qubit, opts);
  } else {
    opts.absorb = Absorb::left;
    for (int i = layer.num_gates() - 1; i >= 0; --i) {
      psi.apply_gate(layer.gate(i).matrix, layer.gate(i).first_qubit, opts);
    }
  }
  return psi;
}

Mps circuit_state(const StaircaseCircuit& c, std::optional<Index> max_chi) {
  Mps psi = Mps::zero_state(c.num_sites);
  for (int k = c.depth() - 1; k >= 0; --k) psi = apply_layer(std::move(psi), c.layers[k], false, max_chi);
  return psi;
}

Mps disentangle(const StaircaseCircuit& c, Mps target, std::optional<Index> max_chi) {
  if (target.num_sites() != c.num_sites) {
    throw std::invalid_argument("disentangle: circuit and state sizes differ");
  }
  for (int k = 0; k < c.depth(); ++k) target = apply_layer(std::move(target), c.layers[k], true, max_chi);
  return target;
}

double circuit_fidelity(const StaircaseCircuit& c, const Mps& target) {
  if (target.num_sites() != c.num_sites) {
    throw std::invalid_argument("circuit_fidelity: circuit and state sizes differ");
  }
  return fidelity(circuit_state(c), target);
}

double circuit_fidelity_by_disentangling(const StaircaseCircuit& c, const Mps& target) {
  return fidelity(Mps::zero_state(c.num_sites), disentangle(c, target));
}

LinearLayer random_layer(int num_sites, std::uint64_t seed) {
  if (num_sites < 2) throw std::invalid_argument("random_layer: need at least two qubits");
  std::mt19937_64 rng(seed);
  std::vector<Matrix4> gates;
  gates.reserve(static_cast<std::size_t>(num_sites - 1));
  for (int i = 0; i + 1 < num_sites; ++i) gates.emplace_back(random_unitary(4, rng));
  return LinearLayer(std::move(gates));
}

LinearLayer identity_layer(int num_sites) {
  if (num_sites < 2) throw std::invalid_argument("identity_layer: need at least two qubits");
  return LinearLayer(std::vector<Matrix4>(static_cast<std::size_t>(num_sites - 1), Matrix4::Identity()));
}

namespace {

void write_i32(std::ostream& os, std::int32_t v) {
  const auto u = static_cast<std::uint32_t>(v);
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((u >> (8 * i)) & 0xffu);
  os.write(bytes, 4);
}

std::int32_t read_i32(std::istream& is) {
  unsigned char bytes[4];
  if (!is.read(reinterpret_cast<char*>(bytes), 4)) throw std::runtime_error("truncated payload");
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return static_cast<std::int32_t>(u);
}

}  // namespace

void save_circuit(const StaircaseCircuit& c, std::ostream& os) {
  const nlohmann::json header = {
      {"format", "mpsqc.circuit"},
      {"format_version", 1},
      {"num_sites", c.num_sites},
      {"num_layers", c.depth()},
      {"byte_order", "little"},
      {"layer_order", "index order k = 1..K; state is L_1 ... L_K |0...0>, layer K acts first"},
      {"gate_layout", "per gate: i32 first qubit, i32 second qubit, 16 complex (re, im) f64 row-major"},
  };
  binio::write_header(os, header);
  for (const auto& layer : c.layers) {
    for (const auto& g : layer.gates()) {
      write_i32(os, g.first_qubit);
      write_i32(os, g.second_qubit());
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) binio::write_complex(os, g.matrix(i, j));
      }
    }
  }
  if (!os) throw std::runtime_error("save_circuit: write failed");
}

StaircaseCircuit load_circuit(std::istream& is) {
  const auto header = binio::read_header(is, "mpsqc.circuit");
  if (header.at("format_version").get<int>() != 1) {
    throw std::runtime_error("load_circuit: unsupported format version");
  }
  StaircaseCircuit c;
  c.num_sites = header.at("num_sites").get<int>();
  const int depth = header.at("num_layers").get<int>();
  if (c.num_sites < 2 || depth < 0) throw std::runtime_error("load_circuit: bad dimensions");
  for (int k = 0; k < depth; ++k) {
    std::vector<Matrix4> gates;
    for (int g = 0; g + 1 < c.num_sites; ++g) {
      const int q0 = read_i32(is);
      const int q1 = read_i32(is);
      if (q0 != g || q1 != g + 1) throw std::runtime_error("load_circuit: gate out of staircase order");
      Matrix4 m;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m(i, j) = binio::read_complex(is);
      }
      gates.push_back(m);
    }
    c.layers.emplace_back(std::move(gates));
  }
  return c;
}

void save_circuit(const StaircaseCircuit& c, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_circuit: cannot open " + path.string());
  save_circuit(c, os);
}

StaircaseCircuit load_circuit(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_circuit: cannot open " + path.string());
  return load_circuit(is);
}

void export_gate_list(const StaircaseCircuit& c, std::ostream& os) {
  os << "# mpsqc gate list: num_sites=" << c.num_sites << " num_layers=" << c.depth() << "\n"
     << "# columns: layer q0 q1 then 16 row-major entries as re im pairs\n"
     << "# state = L_1 ... L_K |0...0>: apply layer K first, gates in listed order\n";
  char buf[32];
  for (int k = 0; k < c.depth(); ++k) {
    for (const auto& g : c.layers[k].gates()) {
      os << (k + 1) << ' ' << g.first_qubit << ' ' << g.second_qubit();
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          std::snprintf(buf, sizeof buf, " %.17g", g.matrix(i, j).real());
          os << buf;
          std::snprintf(buf, sizeof buf, " %.17g", g.matrix(i, j).imag());
          os << buf;
        }
      }
      os << '\n';
    }
  }
}

}  // namespace mpsqc
