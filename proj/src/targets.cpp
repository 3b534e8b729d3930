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

#include "mpsqc/targets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

namespace mpsqc {
namespace {

constexpr int kMaxTargetSites = 20;

void check_grid(const GridSpec& g) {
  if (g.rows < 1 || g.cols < 1) throw std::invalid_argument("grid dimensions must be positive");
  if (g.num_sites() > kMaxTargetSites) {
    throw std::invalid_argument("grid with " + std::to_string(g.num_sites()) +
                                " sites exceeds the exact-construction limit of " +
                                std::to_string(kMaxTargetSites));
  }
}

// Basis of one S^z sector: indices with a fixed number of set bits.
struct Sector {
  std::vector<std::uint64_t> states;
  std::vector<std::int32_t> position;  // full index -> sector index, -1 outside
};

Sector make_sector(int n, int up) {
  Sector s;
  const std::uint64_t dim = std::uint64_t{1} << n;
  s.position.assign(dim, -1);
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (std::popcount(i) == up) {
      s.position[i] = static_cast<std::int32_t>(s.states.size());
      s.states.push_back(i);
    }
  }
  return s;
}

struct BitEdge {
  std::uint64_t a;
  std::uint64_t b;
};

std::vector<BitEdge> bit_edges(const GridSpec& g) {
  const int n = g.num_sites();
  std::vector<BitEdge> out;
  for (auto [i, j] : g.edges()) {
    out.push_back({std::uint64_t{1} << (n - 1 - i), std::uint64_t{1} << (n - 1 - j)});
  }
  return out;
}

Eigen::VectorXd sector_apply(const Sector& s, const std::vector<BitEdge>& edges,
                             const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (std::size_t k = 0; k < s.states.size(); ++k) {
    const std::uint64_t st = s.states[k];
    const double x = v(static_cast<Index>(k));
    double diag = 0.0;
    for (const auto& e : edges) {
      const bool ba = st & e.a;
      const bool bb = st & e.b;
      if (ba == bb) {
        diag += 0.25;
      } else {
        diag -= 0.25;
        out(s.position[st ^ e.a ^ e.b]) += 0.5 * x;
      }
    }
    out(static_cast<Index>(k)) += diag * x;
  }
  return out;
}

Eigen::MatrixXd sector_matrix(const Sector& s, const std::vector<BitEdge>& edges) {
  const auto dim = static_cast<Index>(s.states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    const std::uint64_t st = s.states[static_cast<std::size_t>(k)];
    for (const auto& e : edges) {
      const bool ba = st & e.a;
      const bool bb = st & e.b;
      if (ba == bb) {
        h(k, k) += 0.25;
      } else {
        h(k, k) -= 0.25;
        h(s.position[st ^ e.a ^ e.b], k) += 0.5;
      }
    }
  }
  return h;
}

struct SectorSpectrum {
  std::vector<double> values;             // lowest levels found, ascending
  std::vector<Eigen::VectorXd> ground;    // orthonormal basis of the lowest level
  std::string method;
};

// Lanczos with full reorthogonalization and explicit restarts from the best
// Ritz vector. Returns the two lowest Ritz values and the lowest Ritz vector.
SectorSpectrum lanczos_lowest(const Sector& s, const std::vector<BitEdge>& edges) {
  const auto dim = static_cast<Index>(s.states.size());
  const Index krylov = std::min<Index>(dim, 120);
  std::mt19937_64 rng(0x6c616e637a6f73ULL);
  std::normal_distribution<double> normal;
  Eigen::VectorXd start(dim);
  for (Index i = 0; i < dim; ++i) start(i) = normal(rng);
  start.normalize();

  SectorSpectrum out;
  out.method = "lanczos";
  for (int restart = 0; restart < 60; ++restart) {
    Eigen::MatrixXd basis(dim, krylov);
    std::vector<double> alpha, beta;
    basis.col(0) = start;
    Index used = 0;
    bool converged = false;
    Eigen::VectorXd ritz_values;
    Eigen::MatrixXd ritz_vectors;
    for (Index j = 0; j < krylov; ++j) {
      Eigen::VectorXd w = sector_apply(s, edges, basis.col(j));
      alpha.push_back(basis.col(j).dot(w));
      for (int pass = 0; pass < 2; ++pass) {
        w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
      }
      const double b = w.norm();
      used = j + 1;
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(used, used);
      for (Index i = 0; i < used; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < used) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
      ritz_values = tri.eigenvalues();
      ritz_vectors = tri.eigenvectors();
      const double residual = b * std::abs(ritz_vectors(used - 1, 0));
      if (residual < 1e-12 * std::max(1.0, std::abs(ritz_values(0))) || b < 1e-14 || used == dim) {
        converged = true;
        break;
      }
      if (j + 1 < krylov) {
        beta.push_back(b);
        basis.col(j + 1) = w / b;
      }
    }
    start = (basis.leftCols(used) * ritz_vectors.col(0)).normalized();
    out.values.assign(1, ritz_values(0));
    if (used > 1) out.values.push_back(ritz_values(1));
    if (converged) break;
    if (restart == 59) throw NumericalError("Lanczos did not converge in sector of dimension " + std::to_string(dim));
  }
  out.ground.push_back(start);
  return out;
}

SectorSpectrum dense_lowest(const Sector& s, const std::vector<BitEdge>& edges) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sector_matrix(s, edges));
  if (solver.info() != Eigen::Success) throw NumericalError("sector diagonalization failed");
  SectorSpectrum out;
  out.method = "dense";
  const auto& ev = solver.eigenvalues();
  for (Index i = 0; i < std::min<Index>(ev.size(), 4); ++i) out.values.push_back(ev(i));
  for (Index i = 0; i < ev.size() && ev(i) - ev(0) < 1e-10; ++i) {
    out.ground.push_back(solver.eigenvectors().col(i));
  }
  return out;
}

SectorSpectrum sector_lowest(const Sector& s, const std::vector<BitEdge>& edges, EigenMethod method,
                             Index dense_limit) {
  const bool dense = method == EigenMethod::dense ||
                     (method == EigenMethod::automatic &&
                      static_cast<Index>(s.states.size()) <= dense_limit);
  return dense ? dense_lowest(s, edges) : lanczos_lowest(s, edges);
}

Vector embed(const Sector& s, const Eigen::VectorXd& v, int n) {
  Vector full = Vector::Zero(Index{1} << n);
  for (std::size_t k = 0; k < s.states.size(); ++k) full(static_cast<Index>(s.states[k])) = v(static_cast<Index>(k));
  return full;
}

// First amplitude of non-negligible modulus.
Index first_nonzero(const Vector& v) {
  const double cut = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cut) return i;
  }
  return 0;
}

Vector fix_phase(Vector v) {
  const Index i = first_nonzero(v);
  const double m = std::abs(v(i));
  if (m > 0.0) v *= std::conj(v(i)) / m;
  return v;
}

}  // namespace

std::vector<std::pair<int, int>> GridSpec::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i = r * cols + c;
      if (c + 1 < cols) out.emplace_back(i, i + 1);
      if (r + 1 < rows) out.emplace_back(i, i + cols);
    }
  }
  return out;
}

Vector apply_heisenberg(const GridSpec& grid, const Vector& v) {
  const int n = grid.num_sites();
  if (v.size() != (Index{1} << n)) throw std::invalid_argument("apply_heisenberg: size mismatch");
  Vector out = Vector::Zero(v.size());
  for (const auto& e : bit_edges(grid)) {
    for (Index i = 0; i < v.size(); ++i) {
      const auto st = static_cast<std::uint64_t>(i);
      const bool ba = st & e.a;
      const bool bb = st & e.b;
      if (ba == bb) {
        out(i) += 0.25 * v(i);
      } else {
        out(i) -= 0.25 * v(i);
        out(static_cast<Index>(st ^ e.a ^ e.b)) += 0.5 * v(i);
      }
    }
  }
  return out;
}

double heisenberg_energy(const GridSpec& grid, const Vector& v) {
  return v.dot(apply_heisenberg(grid, v)).real() / v.squaredNorm();
}

GroundState heisenberg_exact_ground_state(const GridSpec& grid, EigenMethod method, Index dense_limit) {
  check_grid(grid);
  const int n = grid.num_sites();
  const auto edges = bit_edges(grid);
  const int up = n / 2;
  const Sector main = make_sector(n, up);
  const auto spec = sector_lowest(main, edges, method, dense_limit);

  GroundState gs;
  gs.energy = spec.values.front();
  gs.sector_up_spins = up;
  double next = spec.values.size() > 1 && spec.ground.size() == 1 ? spec.values[1]
                                                                   : spec.values.front();
  std::vector<Vector> candidates;
  for (const auto& g : spec.ground) candidates.push_back(embed(main, g, n));

  if (up + 1 <= n) {
    const Sector neighbour = make_sector(n, up + 1);
    const auto other = sector_lowest(neighbour, edges, method, dense_limit);
    next = std::min(next, other.values.front());
    if (std::abs(other.values.front() - gs.energy) < 1e-10) {
      for (const auto& g : other.ground) candidates.push_back(embed(neighbour, g, n));
    }
  }
  gs.gap = next - gs.energy;
  gs.degenerate = candidates.size() > 1;
  gs.note = spec.method + " diagonalization in the " + std::to_string(up) + "-up-spin sector";

  std::size_t pick = 0;
  if (gs.degenerate) {
    double best = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double m = std::abs(candidates[c](first_nonzero(candidates[c])));
      if (m > best + 1e-12) {
        best = m;
        pick = c;
      }
    }
    gs.note += "; degenerate ground level, tie broken by largest first nonzero amplitude";
  }
  gs.vector = fix_phase(candidates[pick].normalized());
  return gs;
}

std::vector<std::uint64_t> bas_patterns(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("bas_patterns: dimensions must be positive");
  if (rows * cols > kMaxTargetSites) throw std::invalid_argument("bas_patterns: image too large");
  const int n = rows * cols;
  auto pixel_bit = [n](int q) { return std::uint64_t{1} << (n - 1 - q); };
  std::set<std::uint64_t> images;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows); ++mask) {
    std::uint64_t img = 0;
    for (int r = 0; r < rows; ++r) {
      if (mask >> r & 1u) {
        for (int c = 0; c < cols; ++c) img |= pixel_bit(r * cols + c);
      }
    }
    images.insert(img);
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cols); ++mask) {
    std::uint64_t img = 0;
    for (int c = 0; c < cols; ++c) {
      if (mask >> c & 1u) {
        for (int r = 0; r < rows; ++r) img |= pixel_bit(r * cols + c);
      }
    }
    images.insert(img);
  }
  return {images.begin(), images.end()};
}

std::string TargetDescriptor::id() const {
  switch (kind) {
    case TargetKind::zero_state:
      return "zero_n" + std::to_string(num_sites);
    case TargetKind::heisenberg_gs:
      return "heisenberg_" + std::to_string(grid.rows) + "x" + std::to_string(grid.cols);
    case TargetKind::bas_superposition:
      return "bas_" + std::to_string(grid.rows) + "x" + std::to_string(grid.cols);
    case TargetKind::random_mps: {
      std::string s = "random_n" + std::to_string(num_sites) + "_chi" + std::to_string(max_chi) +
                      "_s" + std::to_string(seed);
      if (entries == RandomEntries::positive_gaussian) s += "_pos";
      if (entries == RandomEntries::complex_gaussian) s += "_cplx";
      return s;
    }
  }
  return "unknown";
}

Target heisenberg_ground_state(const GridSpec& grid, Index max_chi) {
  const auto gs = heisenberg_exact_ground_state(grid);
  Target t;
  t.descriptor.kind = TargetKind::heisenberg_gs;
  t.descriptor.grid = grid;
  t.descriptor.num_sites = grid.num_sites();
  t.descriptor.max_chi = max_chi;
  t.state = from_statevector(gs.vector, max_chi);
  const double f = std::abs(to_statevector(t.state).dot(gs.vector));
  t.provenance = {{"energy", gs.energy},         {"gap", gs.gap},
                  {"degenerate", gs.degenerate}, {"note", gs.note},
                  {"fidelity_to_exact", f},      {"sector_up_spins", gs.sector_up_spins}};
  return t;
}

Target bas_superposition(int rows, int cols) {
  const auto patterns = bas_patterns(rows, cols);
  const int n = rows * cols;
  Vector v = Vector::Zero(Index{1} << n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(patterns.size()));
  for (auto p : patterns) v(static_cast<Index>(p)) = amp;
  Target t;
  t.descriptor.kind = TargetKind::bas_superposition;
  t.descriptor.grid = {rows, cols};
  t.descriptor.num_sites = n;
  t.descriptor.max_chi = Index{1} << (n / 2);
  t.state = from_statevector(v, t.descriptor.max_chi);
  t.provenance = {{"pattern_count", patterns.size()}, {"amplitude", amp},
                  {"pixel_order", "row-major, pixel (r, c) is qubit r*cols + c"}};
  return t;
}

Target random_mps(int num_sites, Index max_chi, std::uint64_t seed, RandomEntries entries) {
  if (num_sites < 2) throw std::invalid_argument("random_mps: need at least two sites");
  if (max_chi < 1) throw std::invalid_argument("random_mps: max_chi must be at least 1");
  std::vector<Index> bonds(static_cast<std::size_t>(num_sites + 1), 1);
  for (int i = 1; i < num_sites; ++i) {
    const int e = std::min(i, num_sites - i);
    bonds[static_cast<std::size_t>(i)] = e >= 62 ? max_chi : std::min<Index>(max_chi, Index{1} << e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Core> cores;
  for (int i = 0; i < num_sites; ++i) {
    const Index l = bonds[static_cast<std::size_t>(i)];
    const Index r = bonds[static_cast<std::size_t>(i + 1)];
    Core c{Matrix(l, r), Matrix(l, r)};
    for (Index a = 0; a < l; ++a) {
      for (int s = 0; s < 2; ++s) {
        for (Index b = 0; b < r; ++b) {
          const double re = normal(rng);
          switch (entries) {
            case RandomEntries::real_gaussian: c[s](a, b) = re; break;
            case RandomEntries::positive_gaussian: c[s](a, b) = std::abs(re); break;
            case RandomEntries::complex_gaussian: c[s](a, b) = Scalar(re, normal(rng)); break;
          }
        }
      }
    }
    cores.push_back(std::move(c));
  }
  Target t;
  t.descriptor.kind = TargetKind::random_mps;
  t.descriptor.num_sites = num_sites;
  t.descriptor.max_chi = max_chi;
  t.descriptor.seed = seed;
  t.descriptor.entries = entries;
  t.state = normalize(left_canonicalize(Mps(std::move(cores))));
  t.provenance = {{"bond_dims", t.state.bond_dims()}};
  return t;
}

Target build_target(const TargetDescriptor& d) {
  switch (d.kind) {
    case TargetKind::zero_state: {
      if (d.num_sites < 2) throw std::invalid_argument("zero_state target needs at least two sites");
      Target t;
      t.descriptor = d;
      t.state = Mps::zero_state(d.num_sites);
      t.provenance = nlohmann::json::object();
      return t;
    }
    case TargetKind::heisenberg_gs:
      return heisenberg_ground_state(d.grid, d.max_chi);
    case TargetKind::bas_superposition:
      return bas_superposition(d.grid.rows, d.grid.cols);
    case TargetKind::random_mps:
      return random_mps(d.num_sites, d.max_chi, d.seed, d.entries);
  }
  throw std::invalid_argument("build_target: unknown kind");
}

std::vector<TargetDescriptor> benchmark_targets(std::uint64_t random_seed) {
  TargetDescriptor heis;
  heis.kind = TargetKind::heisenberg_gs;
  heis.grid = {4, 3};
  heis.num_sites = 12;
  TargetDescriptor bas;
  bas.kind = TargetKind::bas_superposition;
  bas.grid = {2, 6};
  bas.num_sites = 12;
  TargetDescriptor rnd;
  rnd.kind = TargetKind::random_mps;
  rnd.num_sites = 12;
  rnd.seed = random_seed;
  return {heis, bas, rnd};
}

namespace {

constexpr std::array<std::string_view, 4> kKindNames = {"zero_state", "heisenberg_gs",
                                                        "bas_superposition", "random_mps"};
constexpr std::array<std::string_view, 3> kEntryNames = {"real_gaussian", "positive_gaussian",
                                                         "complex_gaussian"};

}  // namespace

nlohmann::json to_json(const TargetDescriptor& d) {
  return {{"kind", kKindNames[static_cast<std::size_t>(d.kind)]},
          {"rows", d.grid.rows},
          {"cols", d.grid.cols},
          {"num_sites", d.num_sites},
          {"max_chi", d.max_chi},
          {"seed", d.seed},
          {"entries", kEntryNames[static_cast<std::size_t>(d.entries)]}};
}

TargetDescriptor descriptor_from_json(const nlohmann::json& j) {
  TargetDescriptor d;
  const auto kind = j.at("kind").get<std::string>();
  auto it = std::find(kKindNames.begin(), kKindNames.end(), kind);
  if (it == kKindNames.end()) throw std::invalid_argument("unknown target kind '" + kind + "'");
  d.kind = static_cast<TargetKind>(it - kKindNames.begin());
  d.grid.rows = j.value("rows", 1);
  d.grid.cols = j.value("cols", 1);
  d.num_sites = j.value("num_sites", d.grid.rows * d.grid.cols);
  if (d.kind == TargetKind::heisenberg_gs || d.kind == TargetKind::bas_superposition) {
    d.num_sites = d.grid.num_sites();
  }
  d.max_chi = j.value("max_chi", Index{64});
  d.seed = j.value("seed", std::uint64_t{0});
  const auto entries = j.value("entries", std::string("real_gaussian"));
  auto e = std::find(kEntryNames.begin(), kEntryNames.end(), entries);
  if (e == kEntryNames.end()) throw std::invalid_argument("unknown entry distribution '" + entries + "'");
  d.entries = static_cast<RandomEntries>(e - kEntryNames.begin());
  return d;
}

std::filesystem::path save_target(const Target& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto base = dir / t.descriptor.id();
  auto mps_path = base;
  mps_path += ".mps";
  save_mps(t.state, mps_path);
  auto side = base;
  side += ".json";
  std::ofstream os(side);
  if (!os) throw std::runtime_error("save_target: cannot open " + side.string());
  os << nlohmann::json{{"descriptor", to_json(t.descriptor)},
                       {"id", t.descriptor.id()},
                       {"provenance", t.provenance},
                       {"bond_dims", t.state.bond_dims()}}
            .dump(2)
     << '\n';
  return mps_path;
}

}  // namespace mpsqc
