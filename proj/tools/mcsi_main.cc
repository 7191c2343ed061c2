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

// mcsi command line: synth, run, table1, equiv, props.
//
// Every subcommand accepts --config FILE, a JSON object whose keys are long
// flag names without the leading dashes. Flags given on the command line
// take precedence over the file.
//
// Exit status: 0 success, 1 validation or I/O failure, 2 property failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcsi/experiment.h"
#include "mcsi/io.h"
#include "mcsi/synth.h"
#include "nlohmann/json.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitProperty = 2;

std::string ScalarToString(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// Fills options of `sub` that were not set on the command line from the JSON
// object in `path`.
void ApplyConfig(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config: " + std::string(e.what()));
  }
  if (!j.is_object()) throw std::runtime_error("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "config") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw std::runtime_error("config: unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    std::vector<std::string> tokens;
    if (value.is_array()) {
      for (const auto& v : value) tokens.push_back(ScalarToString(v));
    } else {
      tokens.push_back(ScalarToString(value));
    }
    opt->add_result(tokens);
    opt->run_callback();
  }
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

struct Common {
  std::optional<std::string> config;
  std::uint64_t seed = 1;
  std::string out;
};

int SynthMain(const Common& common, int m, int n, int k, int l, double p, double beta,
              const std::string& sampling) {
  if (common.out.empty()) throw std::invalid_argument("synth: --out is required");
  const mcsi::ClassSampling s = mcsi::ParseClassSampling(sampling);
  mcsi::Instance inst =
      mcsi::GenBiclustered(m, n, k, l, mcsi::Rng::DeriveSeed(common.seed, {1}), s);
  mcsi::ApplyLabelNoise(inst, p, mcsi::Rng::DeriveSeed(common.seed, {2}));
  inst.beta = beta;
  const mcsi::GraphSideInfo side =
      mcsi::BuildGraphSideInfo(inst, beta, mcsi::Rng::DeriveSeed(common.seed, {3}),
                               mcsi::Rng::DeriveSeed(common.seed, {4}));
  mcsi::SaveInstance(inst, common.out);
  mcsi::SaveGraphFile(side.row_graph, common.out + ".rows.graph");
  mcsi::SaveGraphFile(side.col_graph, common.out + ".cols.graph");
  std::cout << "wrote " << common.out << ".json, " << common.out << ".labels.csv, "
            << common.out << ".rows.graph, " << common.out << ".cols.graph\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online binary matrix completion with side information"};
  app.require_subcommand(1);

  // synth
  Common synth_common;
  int synth_m = 0, synth_n = 20, synth_k = 3, synth_l = 0;
  double synth_p = 0.0, synth_beta = 0.0;
  std::string synth_sampling = "surjective";
  CLI::App* synth = app.add_subcommand("synth", "Generate a biclustered instance and side graphs");
  synth->add_option("--config", synth_common.config, "JSON config file");
  synth->add_option("--m", synth_m, "Rows (defaults to --n)");
  synth->add_option("--n", synth_n, "Columns")->check(CLI::PositiveNumber);
  synth->add_option("--k", synth_k, "Row classes")->check(CLI::PositiveNumber);
  synth->add_option("--l", synth_l, "Column classes (defaults to --k)");
  synth->add_option("--p", synth_p, "Label noise probability")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--beta", synth_beta, "Graph perturbation")->check(CLI::Range(0.0, 0.5));
  synth->add_option("--sampling", synth_sampling, "surjective or uniform");
  synth->add_option("--seed", synth_common.seed, "Master seed");
  synth->add_option("--out", synth_common.out, "Output stem");

  // run
  Common run_common;
  mcsi::SingleConfig run_cfg;
  std::string run_mode = "transductive";
  std::string run_sampling = "surjective";
  int run_m = 0;
  int run_l = 0;
  std::optional<double> run_eta, run_gamma;
  std::optional<std::string> run_instance, run_row_graph, run_col_graph;
  CLI::App* run = app.add_subcommand("run", "Run one online session and write its trace");
  run->add_option("--config", run_common.config, "JSON config file");
  run->add_option("--mode", run_mode, "transductive or inductive");
  run->add_option("--m", run_m, "Rows (defaults to --n)");
  run->add_option("--n", run_cfg.n, "Columns")->check(CLI::PositiveNumber);
  run->add_option("--k", run_cfg.k, "Row classes")->check(CLI::PositiveNumber);
  run->add_option("--l", run_l, "Column classes (defaults to --k)");
  run->add_option("--p", run_cfg.p, "Label noise probability")->check(CLI::Range(0.0, 1.0));
  run->add_option("--beta", run_cfg.beta, "Graph perturbation")->check(CLI::Range(0.0, 0.5));
  run->add_option("--sampling", run_sampling, "surjective or uniform");
  run->add_option("--seed", run_common.seed, "Master seed");
  run->add_option("--eta", run_eta, "Learning rate override");
  run->add_option("--gamma", run_gamma, "Margin override");
  run->add_flag("--conservative,!--non-conservative", run_cfg.conservative,
                "Conservative updates (default) or randomized non-conservative mode");
  run->add_option("--instance", run_instance, "Instance manifest from synth");
  run->add_option("--row-graph", run_row_graph, "Row graph edge list");
  run->add_option("--col-graph", run_col_graph, "Column graph edge list");
  run->add_option("--out", run_common.out, "Trace CSV path (summary goes to <out>.json)");

  // table1
  Common t1_common;
  mcsi::Table1Config t1;
  std::string t1_sampling = "uniform";
  std::string t1_method = "rank-one";
  bool t1_full_grid = false;
  std::optional<double> t1_eta, t1_gamma;
  bool t1_conservative = false;
  CLI::App* table1 = app.add_subcommand("table1", "Noisy biclustered grid over n and beta");
  table1->add_option("--config", t1_common.config, "JSON config file");
  table1->add_option("--n", t1.ns, "Matrix sizes");
  table1->add_option("--beta", t1.betas, "Graph perturbation levels");
  table1->add_option("--p", t1.p, "Label noise probability");
  table1->add_option("--k", t1.k, "Latent classes per side");
  table1->add_option("--reps", t1.replicates, "Replicates per cell");
  table1->add_option("--seed", t1_common.seed, "Master seed");
  table1->add_option("--eta", t1_eta, "Learning rate override");
  table1->add_option("--gamma", t1_gamma, "Margin override");
  table1->add_flag("--conservative", t1_conservative, "Conservative updates");
  table1->add_option("--sampling", t1_sampling, "uniform or surjective class assignment");
  table1->add_option("--workers", t1.workers, "Worker threads (0: all cores)");
  table1->add_option("--method", t1_method, "rank-one or full eigen update");
  table1->add_flag("--full-grid", t1_full_grid, "Add n = 120, 140, ..., 400");
  table1->add_option("--out", t1_common.out, "Summary CSV path");

  // equiv
  Common eq_common;
  int eq_instances = 50;
  int eq_max_dim = 8;
  int eq_max_t = 40;
  double eq_tol = 1e-6;
  CLI::App* equiv = app.add_subcommand("equiv", "Transductive vs inductive prediction gap");
  equiv->add_option("--config", eq_common.config, "JSON config file");
  equiv->add_option("--reps", eq_instances, "Random instances")->check(CLI::PositiveNumber);
  equiv->add_option("--n", eq_max_dim, "Largest m and n")->check(CLI::Range(2, 64));
  equiv->add_option("--T", eq_max_t, "Largest horizon")->check(CLI::PositiveNumber);
  equiv->add_option("--tol", eq_tol, "Gap tolerance");
  equiv->add_option("--seed", eq_common.seed, "Master seed");
  equiv->add_option("--out", eq_common.out, "JSON report path");

  // props
  Common props_common;
  bool inject = false;
  CLI::App* props = app.add_subcommand("props", "Run the invariant property suite");
  props->add_option("--config", props_common.config, "JSON config file");
  props->add_option("--seed", props_common.seed, "Seed");
  props->add_flag("--inject-fault", inject, "Corrupt the PDLaplacian tolerance (self-test)");
  props->add_option("--out", props_common.out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (synth->parsed()) {
      if (synth_common.config) ApplyConfig(synth, *synth_common.config);
      return SynthMain(synth_common, synth_m > 0 ? synth_m : synth_n, synth_n, synth_k,
                       synth_l > 0 ? synth_l : synth_k, synth_p, synth_beta, synth_sampling);
    }

    if (run->parsed()) {
      if (run_common.config) ApplyConfig(run, *run_common.config);
      if (run_mode == "transductive") {
        run_cfg.mode = mcsi::RunMode::kTransductive;
      } else if (run_mode == "inductive") {
        run_cfg.mode = mcsi::RunMode::kInductive;
      } else {
        throw std::invalid_argument("run: --mode must be transductive or inductive");
      }
      run_cfg.m = run_m > 0 ? run_m : run_cfg.n;
      run_cfg.l = run_l > 0 ? run_l : run_cfg.k;
      run_cfg.seed = run_common.seed;
      run_cfg.sampling = mcsi::ParseClassSampling(run_sampling);
      run_cfg.eta = run_eta;
      run_cfg.gamma = run_gamma;
      run_cfg.instance_path = run_instance;
      run_cfg.row_graph_path = run_row_graph;
      run_cfg.col_graph_path = run_col_graph;
      const mcsi::SingleRun result = mcsi::RunSingle(run_cfg);
      if (!run_common.out.empty()) {
        std::ofstream out(run_common.out);
        if (!out) throw std::runtime_error("cannot open '" + run_common.out + "'");
        mcsi::WriteTraceCsv(result.trace, out);
        WriteText(run_common.out + ".json", result.summary.dump(2) + "\n");
      }
      std::cout << result.summary.dump(2) << "\n";
      return 0;
    }

    if (table1->parsed()) {
      if (t1_common.config) ApplyConfig(table1, *t1_common.config);
      t1.seed = t1_common.seed;
      t1.eta = t1_eta;
      t1.gamma = t1_gamma;
      t1.conservative = t1_conservative;
      t1.sampling = mcsi::ParseClassSampling(t1_sampling);
      if (t1_method == "rank-one") {
        t1.method = mcsi::UpdateMethod::kRankOne;
      } else if (t1_method == "full") {
        t1.method = mcsi::UpdateMethod::kFull;
      } else {
        throw std::invalid_argument("table1: --method must be rank-one or full");
      }
      if (t1_full_grid) {
        for (int n = 120; n <= 400; n += 20) t1.ns.push_back(n);
      }
      const std::vector<mcsi::Table1Cell> cells = mcsi::RunTable1(t1);
      if (!t1_common.out.empty()) {
        std::ofstream out(t1_common.out);
        if (!out) throw std::runtime_error("cannot open '" + t1_common.out + "'");
        mcsi::WriteTable1Csv(cells, out);
        std::ofstream reps(t1_common.out + ".replicates.csv");
        mcsi::WriteReplicatesCsv(cells, reps);
      }
      std::cout << mcsi::FormatTable1(cells);
      return 0;
    }

    if (equiv->parsed()) {
      if (eq_common.config) ApplyConfig(equiv, *eq_common.config);
      const mcsi::EquivalenceSweep sweep =
          mcsi::RunEquivalenceSweep(eq_common.seed, eq_instances, eq_max_dim, eq_max_t);
      const double worst = sweep.max_gap;
      const nlohmann::json& runs = sweep.runs;
      const nlohmann::json report = {
          {"instances", eq_instances}, {"max_gap", worst}, {"tolerance", eq_tol},
          {"passed", worst <= eq_tol}, {"runs", runs}};
      if (!eq_common.out.empty()) WriteText(eq_common.out, report.dump(2) + "\n");
      std::cout << "max gap " << worst << " over " << eq_instances << " instances ("
                << (worst <= eq_tol ? "pass" : "FAIL") << ")\n";
      return worst <= eq_tol ? 0 : kExitProperty;
    }

    if (props->parsed()) {
      if (props_common.config) ApplyConfig(props, *props_common.config);
      const mcsi::PropertyReport report = mcsi::RunPropertySuite(props_common.seed, inject);
      const nlohmann::json j = report.ToJson();
      if (!props_common.out.empty()) WriteText(props_common.out, j.dump(2) + "\n");
      for (const mcsi::FamilyReport& f : report.families) {
        std::cout << (f.failures == 0 && f.checks > 0 ? "pass " : "FAIL ") << f.name << " "
                  << (f.checks - f.failures) << "/" << f.checks << " worst=" << f.worst
                  << " tol=" << f.tolerance << "\n";
      }
      return report.passed() ? 0 : kExitProperty;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
