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

// Little-endian f64 payload helpers shared by the MPS and circuit file formats.
// Each file is one line of JSON header followed by raw payload bytes.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mpsqc/linalg.hpp"

namespace mpsqc::binio {

inline void write_f64(std::ostream& os, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  os.write(bytes, 8);
}

inline double read_f64(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) {
    throw std::runtime_error("truncated payload");
  }
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

inline void write_complex(std::ostream& os, Scalar z) {
  write_f64(os, z.real());
  write_f64(os, z.imag());
}

inline Scalar read_complex(std::istream& is) {
  const double re = read_f64(is);
  const double im = read_f64(is);
  return {re, im};
}

inline void write_header(std::ostream& os, const nlohmann::json& header) {
  os << header.dump() << '\n';
}

inline nlohmann::json read_header(std::istream& is, const std::string& expected_format) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("malformed header: ") + e.what());
  }
  if (header.value("format", "") != expected_format) {
    throw std::runtime_error("expected a " + expected_format + " file");
  }
  if (header.value("byte_order", "") != "little") {
    throw std::runtime_error("unsupported byte order");
  }
  return header;
}

}  // namespace mpsqc::binio
