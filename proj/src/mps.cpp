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

#include "mpsqc/mps.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"

namespace mpsqc {
namespace {

// Rows s*chi_l + a, columns b.
Matrix left_matrix(const Core& c) {
  const Index l = chi_left(c);
  Matrix m(2 * l, chi_right(c));
  m.topRows(l) = c[0];
  m.bottomRows(l) = c[1];
  return m;
}

// Rows a, columns s*chi_r + b.
Matrix right_matrix(const Core& c) {
  const Index r = chi_right(c);
  Matrix m(chi_left(c), 2 * r);
  m.leftCols(r) = c[0];
  m.rightCols(r) = c[1];
  return m;
}

Core core_from_left_matrix(const Matrix& m, Index l) {
  return {m.topRows(l), m.bottomRows(l)};
}

Core core_from_right_matrix(const Matrix& m, Index r) {
  return {m.leftCols(r), m.rightCols(r)};
}

// Number of singular values kept under a cap and a relative cutoff. Exact
// zeros are always dropped; at least one value survives.
Index kept_count(const RealVector& s, std::optional<Index> max_chi, double rel_threshold) {
  if (s.size() == 0) return 0;
  const double cutoff = rel_threshold * s(0);
  Index k = 0;
  while (k < s.size() && s(k) > 0.0 && s(k) >= cutoff) ++k;
  if (max_chi) k = std::min(k, *max_chi);
  return std::max<Index>(k, 1);
}

void check_site(const Mps& psi, int site, const char* what) {
  if (site < 0 || site >= psi.num_sites()) {
    throw std::out_of_range(std::string(what) + ": site " + std::to_string(site) +
                            " outside [0, " + std::to_string(psi.num_sites()) + ")");
  }
}

}  // namespace

Mps::Mps(std::vector<Core> cores, std::optional<int> center)
    : cores_(std::move(cores)), center_(center) {
  if (cores_.empty()) throw std::invalid_argument("Mps: no sites");
  for (std::size_t i = 0; i < cores_.size(); ++i) {
    const Core& c = cores_[i];
    if (c[0].rows() != c[1].rows() || c[0].cols() != c[1].cols()) {
      throw std::invalid_argument("Mps: physical slices of site " + std::to_string(i) +
                                  " differ in shape");
    }
    if (chi_left(c) < 1 || chi_right(c) < 1) {
      throw std::invalid_argument("Mps: empty bond at site " + std::to_string(i));
    }
    if (!c[0].allFinite() || !c[1].allFinite()) {
      throw std::invalid_argument("Mps: non-finite entries at site " + std::to_string(i));
    }
    if (i > 0 && chi_right(cores_[i - 1]) != chi_left(c)) {
      throw std::invalid_argument("Mps: bond mismatch between sites " + std::to_string(i - 1) +
                                  " and " + std::to_string(i));
    }
  }
  if (chi_left(cores_.front()) != 1 || chi_right(cores_.back()) != 1) {
    throw std::invalid_argument("Mps: boundary bonds must have dimension 1");
  }
  if (center_ && (*center_ < 0 || *center_ >= num_sites())) {
    throw std::invalid_argument("Mps: orthogonality center out of range");
  }
}

Mps Mps::zero_state(int num_sites) {
  std::vector<int> bits(static_cast<std::size_t>(std::max(num_sites, 0)), 0);
  return product_state(bits);
}

Mps Mps::product_state(std::span<const int> bits) {
  std::vector<Core> cores;
  cores.reserve(bits.size());
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("product_state: bits must be 0 or 1");
    Core c{Matrix::Zero(1, 1), Matrix::Zero(1, 1)};
    c[b](0, 0) = 1.0;
    cores.push_back(std::move(c));
  }
  return Mps(std::move(cores), 0);
}

std::vector<Index> Mps::bond_dims() const {
  std::vector<Index> dims;
  for (int i = 0; i + 1 < num_sites(); ++i) dims.push_back(chi_right(cores_[i]));
  return dims;
}

Index Mps::max_bond() const {
  Index m = 1;
  for (Index d : bond_dims()) m = std::max(m, d);
  return m;
}

double Mps::norm() const {
  if (center_) {
    const Core& c = cores_[*center_];
    return std::sqrt(c[0].squaredNorm() + c[1].squaredNorm());
  }
  return std::sqrt(std::max(0.0, inner_product(*this, *this).real()));
}

void Mps::shift_center_right(int site) {
  Core& here = cores_[site];
  Core& next = cores_[site + 1];
  const Index l = chi_left(here);
  auto dec = qr(left_matrix(here));
  here = core_from_left_matrix(dec.q, l);
  next[0] = dec.r * next[0];
  next[1] = dec.r * next[1];
  center_ = site + 1;
}

void Mps::shift_center_left(int site) {
  Core& here = cores_[site];
  Core& prev = cores_[site - 1];
  const Index r = chi_right(here);
  auto dec = qr(right_matrix(here).adjoint());
  const Matrix qh = dec.q.adjoint();
  here = core_from_right_matrix(qh, r);
  const Matrix rh = dec.r.adjoint();
  prev[0] = prev[0] * rh;
  prev[1] = prev[1] * rh;
  center_ = site - 1;
}

void Mps::move_center(int site) {
  check_site(*this, site, "move_center");
  if (!center_) {
    for (int i = 0; i + 1 < num_sites(); ++i) shift_center_right(i);
    center_ = num_sites() - 1;
  }
  while (*center_ < site) shift_center_right(*center_);
  while (*center_ > site) shift_center_left(*center_);
}

void Mps::canonicalize_left() {
  center_.reset();
  move_center(num_sites() - 1);
}

void Mps::canonicalize_right() {
  center_.reset();
  for (int i = num_sites() - 1; i > 0; --i) shift_center_left(i);
  center_ = 0;
}

void Mps::scale(Scalar factor) {
  const int target = center_.value_or(0);
  cores_[target][0] *= factor;
  cores_[target][1] *= factor;
}

double Mps::apply_gate(const Matrix4& gate, int site, const GateOptions& opts) {
  if (site < 0 || site + 1 >= num_sites()) {
    throw std::out_of_range("apply_gate: pair (" + std::to_string(site) + ", " +
                            std::to_string(site + 1) + ") outside a " +
                            std::to_string(num_sites()) + "-site state");
  }
  if (!center_ || *center_ < site) {
    move_center(site);
  } else if (*center_ > site + 1) {
    move_center(site + 1);
  }
  const Matrix4 g = opts.adjoint ? Matrix4(gate.adjoint()) : gate;
  Core& a = cores_[site];
  Core& b = cores_[site + 1];
  const Index l = chi_left(a);
  const Index r = chi_right(b);

  Matrix theta[2][2];
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) theta[s][t] = a[s] * b[t];
  }
  Matrix joint = Matrix::Zero(2 * l, 2 * r);
  for (int so = 0; so < 2; ++so) {
    for (int to = 0; to < 2; ++to) {
      auto block = joint.block(so * l, to * r, l, r);
      for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 2; ++t) {
          const Scalar w = g(2 * so + to, 2 * s + t);
          if (w != Scalar(0)) block += w * theta[s][t];
        }
      }
    }
  }

  auto dec = svd(joint);
  const Index k = kept_count(dec.s, opts.max_chi, opts.sv_threshold);
  double discarded = 0.0;
  for (Index i = k; i < dec.s.size(); ++i) discarded += dec.s(i) * dec.s(i);

  const Matrix u = dec.u.leftCols(k);
  const Matrix vh = dec.vh.topRows(k);
  const auto s = dec.s.head(k).cast<Scalar>().asDiagonal();
  if (opts.absorb == Absorb::right) {
    a = core_from_left_matrix(u, l);
    b = core_from_right_matrix(s * vh, r);
    center_ = site + 1;
  } else {
    a = core_from_left_matrix(u * s, l);
    b = core_from_right_matrix(vh, r);
    center_ = site;
  }
  return discarded;
}

double SchmidtSpectrum::entropy() const {
  double h = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    const double p = values(i) * values(i);
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}

RealVector SchmidtSpectrum::support(double rel_tol) const {
  if (values.size() == 0) return values;
  Index k = 0;
  while (k < values.size() && values(k) > rel_tol * values(0)) ++k;
  return values.head(k);
}

Mps left_canonicalize(Mps psi) {
  psi.canonicalize_left();
  return psi;
}

Mps right_canonicalize(Mps psi) {
  psi.canonicalize_right();
  return psi;
}

Mps normalize(Mps psi) {
  const double n = psi.norm();
  if (n == 0.0) throw std::invalid_argument("normalize: zero state");
  if (!psi.center()) psi.move_center(0);
  psi.scale(1.0 / n);
  return psi;
}

Mps truncate(Mps psi, Index max_chi, double sv_threshold) {
  if (max_chi < 1) throw std::invalid_argument("truncate: max_chi must be at least 1");
  psi.canonicalize_left();
  std::vector<Core> cores = psi.cores();
  for (int i = psi.num_sites() - 1; i > 0; --i) {
    Core& here = cores[i];
    Core& prev = cores[i - 1];
    const Index r = chi_right(here);
    auto dec = svd(right_matrix(here));
    const Index k = kept_count(dec.s, max_chi, sv_threshold);
    here = core_from_right_matrix(dec.vh.topRows(k), r);
    const Matrix us = dec.u.leftCols(k) * dec.s.head(k).cast<Scalar>().asDiagonal();
    prev[0] = prev[0] * us;
    prev[1] = prev[1] * us;
  }
  return normalize(Mps(std::move(cores), 0));
}

Scalar inner_product(const Mps& psi, const Mps& phi) {
  if (psi.num_sites() != phi.num_sites()) {
    throw std::invalid_argument("inner_product: states have " + std::to_string(psi.num_sites()) +
                                " and " + std::to_string(phi.num_sites()) + " sites");
  }
  Matrix env = Matrix::Ones(1, 1);
  for (int i = 0; i < psi.num_sites(); ++i) {
    const Core& a = psi.core(i);
    const Core& b = phi.core(i);
    Matrix next = a[0].adjoint() * env * b[0];
    next.noalias() += a[1].adjoint() * env * b[1];
    env = std::move(next);
  }
  return env(0, 0);
}

double fidelity(const Mps& psi, const Mps& phi) { return std::abs(inner_product(psi, phi)); }

Mps apply_two_qubit_gate(Mps psi, const Matrix4& gate, int site, const GateOptions& opts) {
  psi.apply_gate(gate, site, opts);
  return psi;
}

Vector to_statevector(const Mps& psi, int site_cap) {
  const int n = psi.num_sites();
  if (n > site_cap) {
    throw std::length_error("to_statevector: " + std::to_string(n) + " sites exceeds the cap of " +
                            std::to_string(site_cap) + " (2^" + std::to_string(n) +
                            " amplitudes)");
  }
  Matrix acc = Matrix::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    const Core& c = psi.core(i);
    const Matrix w0 = acc * c[0];
    const Matrix w1 = acc * c[1];
    Matrix next(2 * acc.rows(), chi_right(c));
    for (Index p = 0; p < acc.rows(); ++p) {
      next.row(2 * p) = w0.row(p);
      next.row(2 * p + 1) = w1.row(p);
    }
    acc = std::move(next);
  }
  return acc.col(0);
}

Mps from_statevector(const Vector& amplitudes, Index max_chi, double sv_threshold) {
  const Index dim = amplitudes.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("from_statevector: length " + std::to_string(dim) +
                                " is not a power of two >= 2");
  }
  if (max_chi < 1) throw std::invalid_argument("from_statevector: max_chi must be at least 1");
  if (std::abs(amplitudes.norm() - 1.0) > kTol.unitarity) {
    throw std::invalid_argument("from_statevector: vector is not normalized");
  }
  int n = 0;
  while ((Index{1} << n) < dim) ++n;

  std::vector<Core> cores;
  cores.reserve(static_cast<std::size_t>(n));
  Matrix rest = amplitudes.transpose();  // chi_left x remaining
  bool truncated = false;
  for (int i = 0; i + 1 < n; ++i) {
    const Index l = rest.rows();
    const Index remaining = rest.cols() / 2;
    Matrix m(2 * l, remaining);
    m.topRows(l) = rest.leftCols(remaining);
    m.bottomRows(l) = rest.rightCols(remaining);
    auto dec = svd(m);
    const Index k = kept_count(dec.s, max_chi, sv_threshold);
    if (k < dec.s.size() && dec.s(k) > 0.0) truncated = true;
    cores.push_back(core_from_left_matrix(dec.u.leftCols(k), l));
    rest = dec.s.head(k).cast<Scalar>().asDiagonal() * dec.vh.topRows(k);
  }
  cores.push_back(Core{rest.col(0), rest.col(1)});
  Mps psi(std::move(cores), n - 1);
  return truncated ? normalize(std::move(psi)) : psi;
}

SchmidtSpectrum schmidt_spectrum(const Mps& psi, int bond) {
  if (bond < 0 || bond + 1 >= psi.num_sites()) {
    throw std::out_of_range("schmidt_spectrum: bond " + std::to_string(bond) + " outside [0, " +
                            std::to_string(psi.num_sites() - 1) + ")");
  }
  Mps work = psi;
  work.move_center(bond);
  auto dec = svd(left_matrix(work.core(bond)));
  SchmidtSpectrum out;
  out.bond = bond;
  const double n = dec.s.norm();
  out.values = n > 0.0 ? RealVector(dec.s / n) : dec.s;
  return out;
}

bool is_left_isometry(const Core& c, double tol) { return isometry_error(left_matrix(c)) <= tol; }

bool is_right_isometry(const Core& c, double tol) {
  return isometry_error(right_matrix(c).adjoint()) <= tol;
}

void save_mps(const Mps& psi, std::ostream& os) {
  nlohmann::json header = {
      {"format", "mpsqc.mps"},
      {"format_version", 1},
      {"num_sites", psi.num_sites()},
      {"bond_dims", psi.bond_dims()},
      {"byte_order", "little"},
      {"site_order", "big-endian: site 0 is the most significant bit"},
      {"core_layout", "row-major (chi_left, physical, chi_right); complex as (re, im) f64"},
  };
  header["center"] = psi.center() ? nlohmann::json(*psi.center()) : nlohmann::json(nullptr);
  binio::write_header(os, header);
  for (const Core& c : psi.cores()) {
    for (Index a = 0; a < chi_left(c); ++a) {
      for (int s = 0; s < 2; ++s) {
        for (Index b = 0; b < chi_right(c); ++b) binio::write_complex(os, c[s](a, b));
      }
    }
  }
  if (!os) throw std::runtime_error("save_mps: write failed");
}

Mps load_mps(std::istream& is) {
  const auto header = binio::read_header(is, "mpsqc.mps");
  if (header.at("format_version").get<int>() != 1) {
    throw std::runtime_error("load_mps: unsupported format version");
  }
  const int n = header.at("num_sites").get<int>();
  const auto bonds = header.at("bond_dims").get<std::vector<Index>>();
  if (n < 1 || static_cast<int>(bonds.size()) != n - 1) {
    throw std::runtime_error("load_mps: inconsistent bond list");
  }
  std::vector<Core> cores;
  for (int i = 0; i < n; ++i) {
    const Index l = i == 0 ? 1 : bonds[i - 1];
    const Index r = i == n - 1 ? 1 : bonds[i];
    Core c{Matrix(l, r), Matrix(l, r)};
    for (Index a = 0; a < l; ++a) {
      for (int s = 0; s < 2; ++s) {
        for (Index b = 0; b < r; ++b) c[s](a, b) = binio::read_complex(is);
      }
    }
    cores.push_back(std::move(c));
  }
  std::optional<int> center;
  if (header.contains("center") && !header["center"].is_null()) center = header["center"].get<int>();
  return Mps(std::move(cores), center);
}

void save_mps(const Mps& psi, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_mps: cannot open " + path.string());
  save_mps(psi, os);
}

Mps load_mps(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_mps: cannot open " + path.string());
  return load_mps(is);
}

}  // namespace mpsqc
