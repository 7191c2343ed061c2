// Copyright 2026 The mcsi Authors. All Rights Reserved.
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

#include "mcsi/experiment.h"

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "gtest/gtest.h"
#include "mcsi/trace.h"

namespace mcsi {
namespace {

Table1Config SmallConfig() {
  Table1Config c;
  c.ns = {12};
  c.betas = {0.0, 0.25};
  c.replicates = 8;
  c.seed = 5;
  c.workers = 1;
  return c;
}

TEST(FullSweepTest, CoversEveryEntryOnce) {
  Instance inst = GenBiclustered(7, 9, 2, 3, 4);
  ApplyLabelNoise(inst, 0.3, 2);
  Rng rng(3);
  const std::vector<Trial> trials = FullSweep(inst, rng);
  ASSERT_EQ(trials.size(), 63u);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Trial& t : trials) {
    EXPECT_TRUE(seen.insert({t.i, t.j}).second);
    EXPECT_EQ(t.y, inst.labels(t.i, t.j));
  }
  EXPECT_EQ(seen.size(), 63u);
}

TEST(Table1ConfigTest, Validate) {
  EXPECT_NO_THROW(Table1Config().Validate());
  Table1Config c;
  c.betas = {0.75};
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = Table1Config();
  c.ns = {};
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = Table1Config();
  c.p = 1.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = Table1Config();
  c.replicates = 0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = Table1Config();
  c.eta = -1.0;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
}

TEST(Table1Test, ReplicateSeedsAreDistinct) {
  std::set<std::uint64_t> seeds;
  for (int n : {20, 40}) {
    for (double b : {0.0, 0.5}) {
      for (int r = 0; r < 10; ++r) seeds.insert(ReplicateSeed(1, n, b, r));
    }
  }
  EXPECT_EQ(seeds.size(), 40u);
  EXPECT_EQ(ReplicateSeed(1, 20, 0.5, 3), ReplicateSeed(1, 20, 0.5, 3));
  EXPECT_NE(ReplicateSeed(1, 20, 0.5, 3), ReplicateSeed(2, 20, 0.5, 3));
}

TEST(Table1Test, ReplicateRerunsAlone) {
  const Table1Config config = SmallConfig();
  const std::vector<Table1Cell> cells = RunTable1(config);
  ASSERT_EQ(cells.size(), 2u);
  const ReplicateResult alone = RunTable1Replicate(config, 12, 0.25, 7);
  const ReplicateResult& grid = cells[1].runs[7];
  EXPECT_EQ(alone.seed, grid.seed);
  EXPECT_EQ(alone.mistakes, grid.mistakes);
  EXPECT_EQ(alone.updates, grid.updates);
  EXPECT_EQ(alone.d_hat, grid.d_hat);
}

TEST(Table1Test, CellStatistics) {
  const std::vector<Table1Cell> cells = RunTable1(SmallConfig());
  for (const Table1Cell& cell : cells) {
    ASSERT_EQ(cell.runs.size(), 8u);
    double sum = 0.0;
    for (const ReplicateResult& r : cell.runs) {
      sum += r.error;
      EXPECT_EQ(r.error, static_cast<double>(r.mistakes) / 144.0);
      EXPECT_NEAR(r.gamma, 1.0 / 3.0, 1e-15);
      EXPECT_NEAR(r.eta, std::sqrt(r.d_hat * std::log(24.0) / (2.0 * 144.0)), 1e-12);
    }
    const double mean = sum / 8.0;
    double ss = 0.0;
    for (const ReplicateResult& r : cell.runs) ss += (r.error - mean) * (r.error - mean);
    EXPECT_NEAR(cell.mean, mean, 1e-15);
    EXPECT_NEAR(cell.std, std::sqrt(ss / 7.0), 1e-15);
  }
}

TEST(Table1Test, WorkerCountDoesNotChangeResults) {
  Table1Config config = SmallConfig();
  config.replicates = 3;
  const std::vector<Table1Cell> a = RunTable1(config);
  config.workers = 3;
  const std::vector<Table1Cell> b = RunTable1(config);
  for (std::size_t c = 0; c < a.size(); ++c) {
    for (std::size_t r = 0; r < a[c].runs.size(); ++r) {
      EXPECT_EQ(a[c].runs[r].mistakes, b[c].runs[r].mistakes);
    }
  }
}

TEST(Table1Test, Outputs) {
  Table1Config config = SmallConfig();
  config.replicates = 2;
  const std::vector<Table1Cell> cells = RunTable1(config);
  std::ostringstream csv;
  WriteTable1Csv(cells, csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "n,beta,mean_error,std_error,replicates,mean_update_rate,mean_d_hat");
  std::ostringstream reps;
  WriteReplicatesCsv(cells, reps);
  int lines = 0;
  for (char ch : reps.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 1 + 4);
  const std::string table = FormatTable1(cells);
  EXPECT_NE(table.find("12"), std::string::npos);
  EXPECT_NE(table.find("+-"), std::string::npos);
}

TEST(RunSingleTest, RealizableConservativeWithinBound) {
  SingleConfig config;
  config.m = 15;
  config.n = 12;
  config.k = 3;
  config.l = 2;
  config.seed = 4;
  const SingleRun run = RunSingle(config);
  EXPECT_EQ(run.trace.size(), 180u);
  EXPECT_TRUE(run.summary.at("satisfied").get<bool>());
  const double d_hat = run.summary.at("d_hat").get<double>();
  const double gamma = run.summary.at("gamma").get<double>();
  EXPECT_NEAR(gamma, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(run.summary.at("eta").get<double>(), gamma);
  EXPECT_NEAR(run.summary.at("realizable_bound").get<double>(),
              3.6 * d_hat / (gamma * gamma) * std::log(27.0), 1e-9);
}

TEST(RunSingleTest, SummaryRegeneratesFromTraceFile) {
  SingleConfig config;
  config.m = 10;
  config.n = 8;
  config.p = 0.1;
  config.conservative = false;
  config.seed = 9;
  const SingleRun run = RunSingle(config);
  std::stringstream ss;
  WriteTraceCsv(run.trace, ss);
  const Trace back = ReadTraceCsv(ss);
  nlohmann::json base = run.summary;
  for (const char* key : {"T", "mistakes", "updates", "mistake_rate", "realizable_bound",
                          "satisfied", "regret_bound"}) {
    base.erase(key);
  }
  EXPECT_EQ(SummarizeTrace(back, base), run.summary);
}

TEST(RunSingleTest, InductiveModeRecordsRegistry) {
  SingleConfig config;
  config.mode = RunMode::kInductive;
  config.m = 6;
  config.n = 5;
  config.k = 2;
  config.l = 2;
  config.seed = 2;
  const SingleRun run = RunSingle(config);
  EXPECT_TRUE(run.trace.has_registry);
  EXPECT_EQ(run.trace.size(), 30u);
}

TEST(SummarizeTraceTest, EmptyTrace) {
  const nlohmann::json s =
      SummarizeTrace(Trace{}, {{"d_hat", 4.0}, {"gamma", 1.0}, {"m", 2}, {"n", 2}});
  EXPECT_EQ(s.at("T"), 0);
  EXPECT_EQ(s.at("mistakes"), 0);
  EXPECT_EQ(s.at("regret_bound"), 0.0);
  EXPECT_TRUE(s.at("satisfied").get<bool>());
}

TEST(EquivalenceSweepTest, SmallSweepWithinContract) {
  const EquivalenceSweep sweep = RunEquivalenceSweep(3, 6, 5, 15);
  EXPECT_LE(sweep.max_gap, 1e-6);
  EXPECT_EQ(sweep.runs.size(), 6u);
}

// Conservative linear-kernel instance whose first margin is exactly zero.
TEST(EquivalenceSweepTest, ZeroMarginTieDoesNotDiverge) {
  const EquivalenceSweep sweep = RunEquivalenceSweep(1, 5, 6, 20);
  EXPECT_LE(sweep.max_gap, 1e-6);
}

class PropertySuiteTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    clean_ = new PropertyReport(RunPropertySuite(1));
    faulty_ = new PropertyReport(RunPropertySuite(1, true));
  }
  static void TearDownTestSuite() {
    delete clean_;
    delete faulty_;
  }
  static PropertyReport* clean_;
  static PropertyReport* faulty_;
};

PropertyReport* PropertySuiteTest::clean_ = nullptr;
PropertyReport* PropertySuiteTest::faulty_ = nullptr;

TEST_F(PropertySuiteTest, FaultInjectionFailsPdLaplacianFamilies) {
  for (const char* name : {"pdlaplacian_inequality_a", "pdlaplacian_inequality_b"}) {
    const FamilyReport* f = faulty_->Find(name);
    ASSERT_NE(f, nullptr) << name;
    EXPECT_EQ(f->failures, f->checks);
  }
  EXPECT_FALSE(faulty_->passed());
}

TEST_F(PropertySuiteTest, OtherFamiliesPass) {
  for (const FamilyReport& f : clean_->families) {
    if (f.name.rfind("pdlaplacian_inequality", 0) == 0) continue;
    EXPECT_GT(f.checks, 0) << f.name;
    EXPECT_EQ(f.failures, 0) << f.name << " worst=" << f.worst;
  }
}

TEST_F(PropertySuiteTest, ReportFormat) {
  const nlohmann::json j = clean_->ToJson();
  EXPECT_EQ(j.at("seed"), 1);
  ASSERT_EQ(j.at("families").size(), clean_->families.size());
  for (const auto& f : j.at("families")) {
    for (const char* key : {"name", "checks", "failures", "worst", "tolerance", "passed"}) {
      EXPECT_TRUE(f.contains(key)) << key;
    }
  }
  EXPECT_NE(clean_->Find("comparator_identity"), nullptr);
  EXPECT_EQ(clean_->Find("no_such_family"), nullptr);
}

}  // namespace
}  // namespace mcsi
