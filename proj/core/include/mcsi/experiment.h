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

// Experiment orchestration: the noisy biclustered grid, single sessions and
// the invariant suite.

#ifndef MCSI_EXPERIMENT_H_
#define MCSI_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcsi/quasidim.h"
#include "mcsi/sideinfo.h"
#include "mcsi/synth.h"
#include "mcsi/trace.h"
#include "mcsi/transductive.h"
#include "nlohmann/json.hpp"

namespace mcsi {

// Ideal clique-star side graphs, perturbed with probability beta, turned
// into PDLaplacians.
struct GraphSideInfo {
  Graph row_graph;
  Graph col_graph;
  SymMatrix m_side;
  SymMatrix n_side;
};

GraphSideInfo BuildGraphSideInfo(const Instance& inst, double beta, std::uint64_t row_seed,
                                 std::uint64_t col_seed);
GraphSideInfo SideInfoFromGraphs(Graph row_graph, Graph col_graph);

// D-hat from the PDLaplacian bound, using the one-hot class matrices (empty
// classes allowed) and the given additive constant.
QuasiDimBound GraphDHat(const Instance& inst, const GraphSideInfo& side, double constant);

// All m * n entries in uniformly random order, labelled from inst.labels.
std::vector<Trial> FullSweep(const Instance& inst, Rng& rng);

struct Table1Config {
  std::vector<int> ns = {20, 40, 60, 80, 100};
  std::vector<double> betas = {0.0, 0.5};
  double p = 0.10;
  int k = 9;
  int replicates = 10;
  std::uint64_t seed = 1;
  ClassSampling sampling = ClassSampling::kUniform;
  bool conservative = false;
  std::optional<double> eta;
  std::optional<double> gamma;
  int workers = 0;  // 0: hardware concurrency
  UpdateMethod method = UpdateMethod::kRankOne;

  void Validate() const;  // throws std::invalid_argument
};

struct ReplicateResult {
  int n = 0;
  double beta = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double error = 0.0;  // mistakes / T
  std::size_t mistakes = 0;
  std::size_t updates = 0;
  std::size_t noisy_trials = 0;  // labels differing from U
  double d_hat = 0.0;
  double eta = 0.0;
  double gamma = 0.0;
};

struct Table1Cell {
  int n = 0;
  double beta = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over replicates
  std::vector<ReplicateResult> runs;
};

std::uint64_t ReplicateSeed(std::uint64_t master, int n, double beta, int replicate);

ReplicateResult RunTable1Replicate(const Table1Config& config, int n, double beta,
                                   int replicate);
std::vector<Table1Cell> RunTable1(const Table1Config& config);

void WriteTable1Csv(const std::vector<Table1Cell>& cells, std::ostream& out);
void WriteReplicatesCsv(const std::vector<Table1Cell>& cells, std::ostream& out);
// Rows n, columns beta, "mean ± std" rounded to two decimals.
std::string FormatTable1(const std::vector<Table1Cell>& cells);

enum class RunMode { kTransductive, kInductive };

struct SingleConfig {
  RunMode mode = RunMode::kTransductive;
  int m = 20;
  int n = 20;
  int k = 3;
  int l = 3;
  double p = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 1;
  bool conservative = true;
  ClassSampling sampling = ClassSampling::kSurjective;
  std::optional<double> eta;
  std::optional<double> gamma;
  // Optional file inputs replacing the generators.
  std::optional<std::string> instance_path;
  std::optional<std::string> row_graph_path;
  std::optional<std::string> col_graph_path;
};

struct SingleRun {
  Trace trace;
  nlohmann::json summary;
};

SingleRun RunSingle(const SingleConfig& config);

// Summary fields derived from a trace; `base` holds run parameters
// (eta, gamma, d_hat, m, n, conservative, noisy_trials).
nlohmann::json SummarizeTrace(const Trace& trace, const nlohmann::json& base);

struct FamilyReport {
  std::string name;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;  // largest violation seen
  double tolerance = 0.0;
};

struct PropertyReport {
  std::uint64_t seed = 0;
  std::vector<FamilyReport> families;
  bool passed() const;
  const FamilyReport* Find(const std::string& name) const;
  nlohmann::json ToJson() const;
};

struct EquivalenceSweep {
  double max_gap = 0.0;
  nlohmann::json runs = nlohmann::json::array();
};

// Random min-kernel and linear-kernel instances (alternating), m, n in
// [2, max_dim], horizons in [1, max_horizon], mixed update modes.
EquivalenceSweep RunEquivalenceSweep(std::uint64_t seed, int instances, int max_dim,
                                     int max_horizon);

// Runs every invariant family. `inject_fault` corrupts the PDLaplacian
// inequality tolerance so those families must fail.
PropertyReport RunPropertySuite(std::uint64_t seed, bool inject_fault = false);

}  // namespace mcsi

#endif  // MCSI_EXPERIMENT_H_
