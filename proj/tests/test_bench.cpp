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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mpsqc/bench.hpp"

namespace mpsqc {
namespace {

namespace fs = std::filesystem;

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class BenchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mpsqc_bench_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  BenchmarkPlan small_plan() const {
    BenchmarkPlan p;
    TargetDescriptor rnd;
    rnd.kind = TargetKind::random_mps;
    rnd.num_sites = 6;
    rnd.max_chi = 8;
    rnd.seed = 4;
    TargetDescriptor bas;
    bas.kind = TargetKind::bas_superposition;
    bas.grid = {2, 3};
    p.targets = {rnd, bas};
    p.kinds.assign(kAllProtocols.begin(), kAllProtocols.end());
    p.k_min = 1;
    p.k_max = 3;
    p.sweeps = {3};
    p.output_dir = dir_;
    return p;
  }

  fs::path dir_;
};

TEST_F(BenchTest, PlanValidation) {
  auto p = small_plan();
  EXPECT_NO_THROW(p.validate());
  p.k_max = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = small_plan();
  p.kinds.clear();
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = small_plan();
  p.targets.clear();
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST_F(BenchTest, PlanJsonRoundTrip) {
  auto p = small_plan();
  p.seeds = {1, 2};
  p.threads = 3;
  const auto back = plan_from_json(to_json(p));
  EXPECT_EQ(back.targets.size(), 2u);
  EXPECT_EQ(back.kinds, p.kinds);
  EXPECT_EQ(back.sweeps, p.sweeps);
  EXPECT_EQ(back.seeds, p.seeds);
  EXPECT_EQ(back.threads, 3);
  EXPECT_EQ(back.output_dir, p.output_dir);
  const auto defaults = plan_from_json(nlohmann::json::parse(R"({"targets":[{"kind":"zero_state","num_sites":4}]})"));
  EXPECT_EQ(defaults.kinds.size(), 6u);
  EXPECT_EQ(defaults.sweeps, (std::vector<int>{10, 100, 1000}));
  EXPECT_DOUBLE_EQ(defaults.learning_rate, 0.6);
}

TEST_F(BenchTest, TrivialZeroStatePlan) {
  BenchmarkPlan p;
  TargetDescriptor zero;
  zero.kind = TargetKind::zero_state;
  zero.num_sites = 5;
  p.targets = {zero};
  p.kinds = {ProtocolKind::d_all};
  p.k_min = p.k_max = 1;
  p.sweeps = {10};
  p.output_dir = dir_;
  const auto r = run_benchmark(p);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_LE(r.rows[0].infidelity, 1e-12);
  const auto csv = read_csv(r.summary_csv);
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], (std::vector<std::string>{"target", "kind", "K", "T", "seed", "infidelity", "updates", "seconds"}));
  EXPECT_EQ(csv[1][0], "zero_n5");
}

TEST_F(BenchTest, CsvMatchesPersistedCircuits) {
  const auto p = small_plan();
  const auto r = run_benchmark(p);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.rows.size(), 2u * 6u * 3u);
  const auto csv = read_csv(r.summary_csv);
  ASSERT_EQ(csv.size(), r.rows.size() + 1);
  for (std::size_t i = 1; i < csv.size(); ++i) {
    const auto& row = csv[i];
    const auto target = load_mps(dir_ / "targets" / (row[0] + ".mps"));
    const auto name = cell_name(row[0], parse_protocol(row[1]), std::stoi(row[3]), std::stoull(row[4]));
    const auto circuit = load_circuit(dir_ / "circuits" / (name + "_K" + row[2] + ".circuit"));
    EXPECT_NEAR(std::stod(row[5]), 1.0 - circuit_fidelity(circuit, target), 1e-10) << name;
    EXPECT_TRUE(fs::exists(dir_ / "reports" / (name + ".json")));
  }
}

TEST_F(BenchTest, ThreadCountDoesNotChangeNumbers) {
  auto p = small_plan();
  p.save_circuits = false;
  const auto a = run_benchmark(p);
  p.threads = 3;
  p.output_dir = dir_ / "threaded";
  const auto b = run_benchmark(p);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].target, b.rows[i].target);
    EXPECT_EQ(a.rows[i].kind, b.rows[i].kind);
    EXPECT_EQ(a.rows[i].k, b.rows[i].k);
    EXPECT_EQ(a.rows[i].infidelity, b.rows[i].infidelity);
    EXPECT_EQ(a.rows[i].updates, b.rows[i].updates);
  }
}

TEST_F(BenchTest, UnconstructibleTargetIsRecordedAndRunContinues) {
  auto p = small_plan();
  TargetDescriptor big;
  big.kind = TargetKind::heisenberg_gs;
  big.grid = {5, 5};
  p.targets.push_back(big);
  p.kinds = {ProtocolKind::d_all};
  const auto r = run_benchmark(p);
  EXPECT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].target, "heisenberg_5x5");
  EXPECT_EQ(r.rows.size(), 2u * 3u);
  std::ifstream is(dir_ / "failures.json");
  EXPECT_EQ(nlohmann::json::parse(is).size(), 1u);
}

TEST_F(BenchTest, PlotDataPerTargetAndSweepSetting) {
  auto p = small_plan();
  p.sweeps = {2, 3};
  p.save_circuits = false;
  const auto r = run_benchmark(p);
  const auto files = emit_plot_data(r.reports, dir_ / "plots");
  EXPECT_EQ(files.size(), 4u);
  for (const auto& f : files) {
    std::ifstream is(f);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line[0], '#');
    bool saw_log = false;
    std::set<std::string> series;
    int last_k = 0;
    std::string last_kind;
    while (std::getline(is, line)) {
      if (line[0] == '#') {
        saw_log |= line.find("logarithmic") != std::string::npos;
        continue;
      }
      if (line.rfind("kind,", 0) == 0) continue;
      std::stringstream ss(line);
      std::string kind, seed, k, pos;
      std::getline(ss, kind, ',');
      std::getline(ss, seed, ',');
      std::getline(ss, k, ',');
      std::getline(ss, pos, ',');
      if (kind != last_kind) last_k = 0;
      EXPECT_GE(std::stoi(k), last_k);
      last_k = std::stoi(k);
      last_kind = kind;
      series.insert(kind);
      EXPECT_EQ(pos == "0", kind == "D_all") << line;
    }
    EXPECT_TRUE(saw_log);
    EXPECT_EQ(series.size(), 6u);
  }
}

TEST(EstimateCost, ScalingsAndRatios) {
  const auto one = estimate_cost(12, 64, 1, 100, ProtocolKind::iter_di_oall);
  EXPECT_EQ(one.optimization_cost, one.sequential_optimization_cost);
  EXPECT_EQ(one.k_min, 6);
  for (int k = 1; k <= 8; ++k) {
    const auto c = estimate_cost(12, 64, k, 10, ProtocolKind::o_all);
    EXPECT_EQ(c.sequential_optimization_cost / c.optimization_cost, (k + 1) / 2.0);
    EXPECT_GE(c.sequential_optimization_cost, c.optimization_cost);
    const auto d = estimate_cost(12, 128, k, 10, ProtocolKind::o_all);
    EXPECT_EQ(d.decomposition_cost, 8 * c.decomposition_cost);
    EXPECT_EQ(d.optimization_cost, 8 * c.optimization_cost);
    EXPECT_EQ(d.sequential_optimization_cost, 8 * c.sequential_optimization_cost);
  }
  const auto matched = estimate_cost(12, 64, 5, 10, ProtocolKind::o_all, true);
  EXPECT_EQ(matched.effective_sweeps, 30);
  EXPECT_EQ(matched.optimization_cost, matched.sequential_optimization_cost);
  EXPECT_THROW(estimate_cost(0, 64, 1, 1, ProtocolKind::d_all), std::invalid_argument);
}

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.123456789012345), "0.123456789012");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1.5e-13), "1.5e-13");
}

}  // namespace
}  // namespace mpsqc
