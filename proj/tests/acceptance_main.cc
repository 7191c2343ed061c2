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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mcsi/experiment.h"

namespace {

using mcsi::RunMode;
using mcsi::SingleConfig;
using mcsi::SingleRun;

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Reference grid means, keyed by (n, beta).
const std::map<std::pair<int, double>, double>& ReferenceTable() {
  static const auto* table = new std::map<std::pair<int, double>, double>{
      {{20, 0.0}, 0.31},  {{40, 0.0}, 0.22},  {{60, 0.0}, 0.18},  {{80, 0.0}, 0.16},
      {{100, 0.0}, 0.15}, {{20, 0.5}, 0.39},  {{40, 0.5}, 0.37},  {{60, 0.5}, 0.37},
      {{80, 0.5}, 0.36},  {{100, 0.5}, 0.36},
  };
  return *table;
}

Outcome NoisyGrid() {
  constexpr double kTolerance = 0.05;
  mcsi::Table1Config config;
  const std::vector<mcsi::Table1Cell> cells = mcsi::RunTable1(config);
  std::printf("%s", mcsi::FormatTable1(cells).c_str());
  Outcome out;
  out.name = "table1_grid_within_0.05";
  out.pass = true;
  double worst = 0.0;
  int misses = 0;
  for (const mcsi::Table1Cell& cell : cells) {
    const double ref = ReferenceTable().at({cell.n, cell.beta});
    const double gap = std::abs(cell.mean - ref);
    worst = std::max(worst, gap);
    const bool ok = gap <= kTolerance;
    std::printf("  n=%-3d beta=%.1f mean=%.4f ref=%.2f gap=%.4f %s\n", cell.n, cell.beta,
                cell.mean, ref, gap, ok ? "ok" : "MISS");
    if (!ok) {
      out.pass = false;
      ++misses;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "cells=%zu misses=%d worst_gap=%.4f", cells.size(), misses,
                worst);
  out.detail = buf;
  return out;
}

Outcome RealizableBound() {
  int runs = 0;
  int violations = 0;
  double worst_ratio = 0.0;
  for (int size = 20; size <= 100; size += 10) {
    for (int k = 2; k <= 9; ++k) {
      for (std::uint64_t seed : {11u, 12u}) {
        SingleConfig config;
        config.m = size;
        config.n = size;
        config.k = k;
        config.l = k;
        config.p = 0.0;
        config.beta = 0.0;
        config.conservative = true;
        config.gamma = 1.0 / std::sqrt(static_cast<double>(k));
        config.eta = config.gamma;
        config.seed = seed * 1000 + static_cast<std::uint64_t>(size * 10 + k);
        const SingleRun run = mcsi::RunSingle(config);
        const double mistakes = run.summary.at("mistakes").get<double>();
        const double bound = run.summary.at("realizable_bound").get<double>();
        worst_ratio = std::max(worst_ratio, mistakes / bound);
        if (mistakes > bound) ++violations;
        ++runs;
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "runs=%d violations=%d max_mistakes_over_bound=%.4f", runs,
                violations, worst_ratio);
  return {"realizable_mistake_bound", runs >= 100 && violations == 0, buf};
}

Outcome Equivalence() {
  constexpr double kTolerance = 1e-6;
  const mcsi::EquivalenceSweep sweep = mcsi::RunEquivalenceSweep(2024, 60, 8, 40);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "instances=%zu max_gap=%.3e tol=%.0e", sweep.runs.size(),
                sweep.max_gap, kTolerance);
  return {"transductive_inductive_equivalence",
          sweep.runs.size() >= 50 && sweep.max_gap <= kTolerance, buf};
}

Outcome Invariants() {
  const mcsi::PropertyReport report = mcsi::RunPropertySuite(7);
  std::string failed;
  for (const mcsi::FamilyReport& f : report.families) {
    std::printf("  %-32s checks=%-5d failures=%-5d worst=%.3e tol=%.0e\n", f.name.c_str(),
                f.checks, f.failures, f.worst, f.tolerance);
    if (f.failures != 0 || f.checks == 0) failed += (failed.empty() ? "" : ",") + f.name;
  }
  return {"invariant_suites", report.passed(),
          "families=" + std::to_string(report.families.size()) +
              (failed.empty() ? "" : " failing=" + failed)};
}

Outcome Regret() {
  constexpr int kSeeds = 20;
  bool pass = true;
  std::string detail;
  for (int n : {40, 80}) {
    double excess = 0.0;
    double bound = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      SingleConfig config;
      config.m = n;
      config.n = n;
      config.k = 9;
      config.l = 9;
      config.p = 0.10;
      config.beta = 0.0;
      config.conservative = false;
      config.sampling = mcsi::ClassSampling::kUniform;
      config.seed = 500 + static_cast<std::uint64_t>(n * 100 + s);
      const SingleRun run = mcsi::RunSingle(config);
      excess += run.summary.at("mistakes").get<double>() -
                run.summary.at("noisy_trials").get<double>();
      bound += run.summary.at("regret_bound").get<double>();
    }
    excess /= kSeeds;
    bound /= kSeeds;
    pass = pass && excess < bound;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%sn=%d mean_excess=%.1f bound=%.1f", detail.empty() ? "" : " ",
                  n, excess, bound);
    detail += buf;
  }
  return {"regret_sanity", pass, detail};
}

}  // namespace

int main() {
  std::vector<Outcome (*)()> criteria = {NoisyGrid, RealizableBound, Equivalence, Invariants,
                                         Regret};
  std::vector<Outcome> results;
  for (auto* criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = criterion();
    o.detail += " (" + std::to_string(static_cast<int>(Seconds(start))) + "s)";
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    results.push_back(std::move(o));
  }
  int failures = 0;
  std::printf("\nsummary\n");
  for (const Outcome& o : results) {
    std::printf("%s %s\n", o.pass ? "PASS" : "FAIL", o.name.c_str());
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
