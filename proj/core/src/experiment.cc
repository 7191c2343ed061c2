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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "mcsi/inductive.h"
#include "mcsi/io.h"

namespace mcsi {

GraphSideInfo SideInfoFromGraphs(Graph row_graph, Graph col_graph) {
  GraphSideInfo side;
  side.m_side = PdLaplacian(LaplacianFromGraph(row_graph));
  side.n_side = PdLaplacian(LaplacianFromGraph(col_graph));
  side.row_graph = std::move(row_graph);
  side.col_graph = std::move(col_graph);
  return side;
}

GraphSideInfo BuildGraphSideInfo(const Instance& inst, double beta, std::uint64_t row_seed,
                                 std::uint64_t col_seed) {
  Graph rows = PerturbGraph(CliqueStarGraph(inst.row_class, inst.k, true), beta, row_seed);
  Graph cols = PerturbGraph(CliqueStarGraph(inst.col_class, inst.l, true), beta, col_seed);
  return SideInfoFromGraphs(std::move(rows), std::move(cols));
}

QuasiDimBound GraphDHat(const Instance& inst, const GraphSideInfo& side, double constant) {
  return DqdUpperPdLaplacian(OneHot(inst.row_class, inst.k), OneHot(inst.col_class, inst.l),
                             side.m_side, side.n_side, constant);
}

std::vector<Trial> FullSweep(const Instance& inst, Rng& rng) {
  std::vector<std::size_t> order(static_cast<std::size_t>(inst.m) * inst.n);
  for (std::size_t e = 0; e < order.size(); ++e) order[e] = e;
  rng.Shuffle(order);
  std::vector<Trial> trials;
  trials.reserve(order.size());
  for (std::size_t e : order) {
    const std::size_t i = e / inst.n;
    const std::size_t j = e % inst.n;
    trials.push_back({i, j, inst.labels(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  }
  return trials;
}

// ---------------------------------------------------------------------------
// Noisy biclustered grid.

void Table1Config::Validate() const {
  if (ns.empty() || betas.empty()) throw std::invalid_argument("table1: empty n or beta list");
  for (int n : ns) {
    if (n < 2) throw std::invalid_argument("table1: n must be >= 2");
  }
  for (double b : betas) {
    if (!(b >= 0.0 && b <= 0.5)) throw std::invalid_argument("table1: beta must be in [0, 0.5]");
  }
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("table1: p must be in [0, 1)");
  if (k < 1) throw std::invalid_argument("table1: k must be >= 1");
  if (replicates < 1) throw std::invalid_argument("table1: replicates must be >= 1");
  if (sampling == ClassSampling::kSurjective) {
    for (int n : ns) {
      if (n < k) throw std::invalid_argument("table1: surjective sampling needs n >= k");
    }
  }
  if (eta && !(*eta > 0)) throw std::invalid_argument("table1: eta must be > 0");
  if (gamma && !(*gamma > 0 && *gamma <= 1)) {
    throw std::invalid_argument("table1: gamma must be in (0, 1]");
  }
}

std::uint64_t ReplicateSeed(std::uint64_t master, int n, double beta, int replicate) {
  std::uint64_t beta_bits = 0;
  std::memcpy(&beta_bits, &beta, sizeof(beta));
  return Rng::DeriveSeed(master, {static_cast<std::uint64_t>(n), beta_bits,
                                  static_cast<std::uint64_t>(replicate)});
}

ReplicateResult RunTable1Replicate(const Table1Config& config, int n, double beta,
                                   int replicate) {
  ReplicateResult out;
  out.n = n;
  out.beta = beta;
  out.replicate = replicate;
  out.seed = ReplicateSeed(config.seed, n, beta, replicate);
  const std::uint64_t s = out.seed;

  Instance inst =
      GenBiclustered(n, n, config.k, config.k, Rng::DeriveSeed(s, {1}), config.sampling);
  ApplyLabelNoise(inst, config.p, Rng::DeriveSeed(s, {2}));
  inst.beta = beta;
  const GraphSideInfo side =
      BuildGraphSideInfo(inst, beta, Rng::DeriveSeed(s, {3}), Rng::DeriveSeed(s, {4}));

  const std::size_t horizon = static_cast<std::size_t>(n) * n;
  TransductiveParams params;
  params.m = n;
  params.n = n;
  params.d_hat = GraphDHat(inst, side, 4.0 * config.k).value;
  params.gamma = config.gamma.value_or(1.0 / MaxNormBoundBiclustered(config.k, config.k));
  params.eta = config.eta.value_or(DeriveEta(params.d_hat, n, n, horizon));
  params.non_conservative = !config.conservative;

  PredictorOptions options;
  options.method = config.method;
  TransductivePredictor predictor(params, EmbeddingFromPd(side.m_side),
                                  EmbeddingFromPd(side.n_side), options);
  Rng order_rng(Rng::DeriveSeed(s, {5}));
  const std::vector<Trial> trials = FullSweep(inst, order_rng);
  Rng threshold_rng(Rng::DeriveSeed(s, {6}));
  const Trace trace = RunTransductive(trials, predictor, threshold_rng);

  out.mistakes = trace.mistakes;
  out.updates = trace.updates;
  out.error = trace.MistakeRate();
  out.noisy_trials = static_cast<std::size_t>(inst.flipped.count());
  out.d_hat = params.d_hat;
  out.eta = params.eta;
  out.gamma = params.gamma;
  return out;
}

std::vector<Table1Cell> RunTable1(const Table1Config& config) {
  config.Validate();
  std::vector<Table1Cell> cells;
  std::vector<std::pair<std::size_t, int>> jobs;
  for (int n : config.ns) {
    for (double beta : config.betas) {
      Table1Cell cell;
      cell.n = n;
      cell.beta = beta;
      cell.runs.resize(config.replicates);
      for (int r = 0; r < config.replicates; ++r) jobs.emplace_back(cells.size(), r);
      cells.push_back(std::move(cell));
    }
  }
  // Largest matrices first keeps the pool busy until the end.
  std::stable_sort(jobs.begin(), jobs.end(), [&](const auto& a, const auto& b) {
    return cells[a.first].n > cells[b.first].n;
  });

  int workers = config.workers > 0 ? config.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(jobs.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      const auto [c, r] = jobs[idx];
      try {
        cells[c].runs[r] = RunTable1Replicate(config, cells[c].n, cells[c].beta, r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(jobs.size());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  for (Table1Cell& cell : cells) {
    double sum = 0.0;
    for (const ReplicateResult& r : cell.runs) sum += r.error;
    cell.mean = sum / cell.runs.size();
    double ss = 0.0;
    for (const ReplicateResult& r : cell.runs) ss += (r.error - cell.mean) * (r.error - cell.mean);
    cell.std = cell.runs.size() > 1 ? std::sqrt(ss / (cell.runs.size() - 1)) : 0.0;
  }
  return cells;
}

void WriteTable1Csv(const std::vector<Table1Cell>& cells, std::ostream& out) {
  const auto old = out.precision(17);
  out << "n,beta,mean_error,std_error,replicates,mean_update_rate,mean_d_hat\n";
  for (const Table1Cell& c : cells) {
    double upd = 0.0;
    double d = 0.0;
    for (const ReplicateResult& r : c.runs) {
      upd += static_cast<double>(r.updates) / (static_cast<double>(r.n) * r.n);
      d += r.d_hat;
    }
    const double reps = static_cast<double>(c.runs.size());
    out << c.n << ',' << c.beta << ',' << c.mean << ',' << c.std << ',' << c.runs.size() << ','
        << upd / reps << ',' << d / reps << '\n';
  }
  out.precision(old);
}

void WriteReplicatesCsv(const std::vector<Table1Cell>& cells, std::ostream& out) {
  const auto old = out.precision(17);
  out << "n,beta,replicate,seed,error,mistakes,updates,noisy_trials,d_hat,eta,gamma\n";
  for (const Table1Cell& c : cells) {
    for (const ReplicateResult& r : c.runs) {
      out << r.n << ',' << r.beta << ',' << r.replicate << ',' << r.seed << ',' << r.error << ','
          << r.mistakes << ',' << r.updates << ',' << r.noisy_trials << ',' << r.d_hat << ','
          << r.eta << ',' << r.gamma << '\n';
    }
  }
  out.precision(old);
}

std::string FormatTable1(const std::vector<Table1Cell>& cells) {
  std::vector<int> ns;
  std::vector<double> betas;
  std::map<std::pair<int, double>, const Table1Cell*> index;
  for (const Table1Cell& c : cells) {
    if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
    if (std::find(betas.begin(), betas.end(), c.beta) == betas.end()) betas.push_back(c.beta);
    index[{c.n, c.beta}] = &c;
  }
  std::ostringstream out;
  char buf[64];
  out << "     n";
  for (double b : betas) {
    std::snprintf(buf, sizeof(buf), " | beta=%-8g", b);
    out << buf;
  }
  out << '\n';
  for (int n : ns) {
    std::snprintf(buf, sizeof(buf), "%6d", n);
    out << buf;
    for (double b : betas) {
      const auto it = index.find({n, b});
      if (it == index.end()) {
        out << " | " << std::string(13, ' ');
      } else {
        std::snprintf(buf, sizeof(buf), " | %.2f +- %.2f", it->second->mean, it->second->std);
        out << buf;
      }
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Single runs.

nlohmann::json SummarizeTrace(const Trace& trace, const nlohmann::json& base) {
  nlohmann::json s = base;
  const double d_hat = base.at("d_hat").get<double>();
  const double gamma = base.at("gamma").get<double>();
  const int m = base.at("m").get<int>();
  const int n = base.at("n").get<int>();
  const double realizable = RealizableMistakeBound(d_hat, gamma, m, n);
  s["T"] = trace.size();
  s["mistakes"] = trace.mistakes;
  s["updates"] = trace.updates;
  s["mistake_rate"] = trace.MistakeRate();
  s["realizable_bound"] = realizable;
  s["satisfied"] = static_cast<double>(trace.mistakes) <= realizable;
  s["regret_bound"] =
      trace.size() > 0 ? RegretBound(d_hat, gamma, m, n, trace.size()) : 0.0;
  return s;
}

SingleRun RunSingle(const SingleConfig& config) {
  Instance inst;
  if (config.instance_path) {
    inst = LoadInstance(*config.instance_path);
  } else {
    inst = GenBiclustered(config.m, config.n, config.k, config.l,
                          Rng::DeriveSeed(config.seed, {1}), config.sampling);
    ApplyLabelNoise(inst, config.p, Rng::DeriveSeed(config.seed, {2}));
    inst.beta = config.beta;
  }
  GraphSideInfo side;
  if (config.row_graph_path || config.col_graph_path) {
    if (!config.row_graph_path || !config.col_graph_path) {
      throw std::invalid_argument("run: give both row and column graphs or neither");
    }
    side = SideInfoFromGraphs(LoadGraphFile(*config.row_graph_path),
                              LoadGraphFile(*config.col_graph_path));
    if (side.m_side.dim() != inst.m || side.n_side.dim() != inst.n) {
      throw std::invalid_argument("run: graph sizes do not match the instance");
    }
  } else {
    side = BuildGraphSideInfo(inst, config.beta, Rng::DeriveSeed(config.seed, {3}),
                              Rng::DeriveSeed(config.seed, {4}));
  }
  const QuasiDimBound d_circ = GraphDHat(inst, side, 2.0 * inst.k + 2.0 * inst.l);

  const std::size_t horizon = static_cast<std::size_t>(inst.m) * inst.n;
  TransductiveParams params;
  params.m = inst.m;
  params.n = inst.n;
  params.d_hat = d_circ.value;
  params.gamma = config.gamma.value_or(1.0 / MaxNormBoundBiclustered(inst.k, inst.l));
  params.non_conservative = !config.conservative;
  params.eta = config.eta.value_or(config.conservative
                                       ? params.gamma
                                       : DeriveEta(params.d_hat, inst.m, inst.n, horizon));

  Rng order_rng(Rng::DeriveSeed(config.seed, {5}));
  const std::vector<Trial> trials = FullSweep(inst, order_rng);
  Rng threshold_rng(Rng::DeriveSeed(config.seed, {6}));

  SingleRun out;
  if (config.mode == RunMode::kTransductive) {
    TransductivePredictor predictor(params, EmbeddingFromPd(side.m_side),
                                    EmbeddingFromPd(side.n_side));
    out.trace = RunTransductive(trials, predictor, threshold_rng);
  } else {
    IdentityKernel rows(PrecomputedGram{PinvPsd(side.m_side)}, {});
    IdentityKernel cols(PrecomputedGram{PinvPsd(side.n_side)}, {});
    InductivePredictor predictor(params, std::move(rows), std::move(cols));
    out.trace = RunInductive(trials, predictor, threshold_rng);
  }
  const nlohmann::json base = {
      {"mode", config.mode == RunMode::kTransductive ? "transductive" : "inductive"},
      {"m", inst.m},
      {"n", inst.n},
      {"k", inst.k},
      {"l", inst.l},
      {"seed", config.seed},
      {"p", inst.p},
      {"beta", inst.beta},
      {"eta", params.eta},
      {"gamma", params.gamma},
      {"d_hat", params.d_hat},
      {"conservative", config.conservative},
      {"noisy_trials", static_cast<std::size_t>(inst.flipped.count())},
  };
  out.summary = SummarizeTrace(out.trace, base);
  return out;
}

// ---------------------------------------------------------------------------
// Property suite.

bool PropertyReport::passed() const {
  return std::all_of(families.begin(), families.end(),
                     [](const FamilyReport& f) { return f.failures == 0 && f.checks > 0; });
}

const FamilyReport* PropertyReport::Find(const std::string& name) const {
  for (const FamilyReport& f : families) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

nlohmann::json PropertyReport::ToJson() const {
  nlohmann::json fams = nlohmann::json::array();
  for (const FamilyReport& f : families) {
    fams.push_back({{"name", f.name},
                    {"checks", f.checks},
                    {"failures", f.failures},
                    {"worst", f.worst},
                    {"tolerance", f.tolerance},
                    {"passed", f.failures == 0 && f.checks > 0}});
  }
  return {{"seed", seed}, {"passed", passed()}, {"families", fams}};
}

namespace {

class Family {
 public:
  Family(std::string name, double tolerance) {
    r_.name = std::move(name);
    r_.tolerance = tolerance;
  }
  // Records one check of `error <= tolerance`.
  void Check(double error) {
    ++r_.checks;
    if (std::isnan(error) || error > r_.tolerance) ++r_.failures;
    if (std::isnan(error) || error > r_.worst) r_.worst = error;
  }
  void Fail() {
    ++r_.checks;
    ++r_.failures;
  }
  FamilyReport Done() const { return r_; }

 private:
  FamilyReport r_;
};

Eigen::MatrixXd RandomSymmetric(int dim, Rng& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.Uniform(-1.0, 1.0);
  }
  return a;
}

Eigen::MatrixXd RandomMatrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = rng.Uniform(-1.0, 1.0);
  }
  return a;
}

SymMatrix RandomPd(int dim, Rng& rng) {
  const Eigen::MatrixXd x = RandomMatrix(dim, dim, rng);
  return SymMatrix(x * x.transpose() + 0.1 * Eigen::MatrixXd::Identity(dim, dim));
}

Graph RandomConnectedGraph(int m, double density, bool weighted, Rng& rng) {
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (rng.Bernoulli(density)) edges.push_back({i, j, weighted ? rng.Uniform(0.1, 3.0) : 1.0});
    }
  }
  // Spanning path over a random order guarantees connectivity.
  std::vector<int> order(m);
  for (int v = 0; v < m; ++v) order[v] = v;
  rng.Shuffle(order);
  for (int v = 0; v + 1 < m; ++v) {
    const int a = std::min(order[v], order[v + 1]);
    const int b = std::max(order[v], order[v + 1]);
    const bool present = std::any_of(edges.begin(), edges.end(),
                                     [&](const Edge& e) { return e.i == a && e.j == b; });
    if (!present) edges.push_back({a, b, weighted ? rng.Uniform(0.1, 3.0) : 1.0});
  }
  return Graph(m, std::move(edges));
}

double MaxAbs(const Eigen::MatrixXd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

void SpectralFamilies(Rng& rng, std::vector<FamilyReport>& out) {
  Family recon("eig_reconstruction", 1e-10);
  Family ortho("eig_orthonormality", 1e-10);
  Family mp("moore_penrose", 1e-8);
  Family sqrt_recon("sqrt_psd_square", 1e-8);
  Family sqrt_psd("sqrt_psd_min_eigenvalue", 1e-10);
  Family exp_log("exp_log_roundtrip", 1e-8);
  Family exp_trace("exp_trace", 1e-10);
  for (int rep = 0; rep < 20; ++rep) {
    const int dim = rep == 0 ? 50 : 1 + static_cast<int>(rng.UniformInt(50));
    const Eigen::MatrixXd a = RandomSymmetric(dim, rng);
    const SpectralDecomposition dec = EigSym(SymMatrix(a));
    recon.Check(MaxAbs(dec.Reconstruct() - a) / std::max(1.0, MaxAbs(a)));
    ortho.Check(MaxAbs(dec.eigenvectors.transpose() * dec.eigenvectors -
                       Eigen::MatrixXd::Identity(dim, dim)));

    // Rank-deficient PSD input.
    const int rank = 1 + static_cast<int>(rng.UniformInt(dim));
    const Eigen::MatrixXd x = RandomMatrix(dim, rank, rng);
    const SymMatrix psd(x * x.transpose());
    const Eigen::MatrixXd& g = psd.matrix();
    const Eigen::MatrixXd gp = PinvPsd(psd).matrix();
    const double scale = std::max(1.0, MaxAbs(g));
    mp.Check(MaxAbs(g * gp * g - g) / scale);
    mp.Check(MaxAbs(gp * g * gp - gp) / std::max(1.0, MaxAbs(gp)));

    const SymMatrix root = SqrtPsd(psd);
    sqrt_recon.Check(MaxAbs(root.matrix() * root.matrix() - g) / scale);
    sqrt_psd.Check(std::max(0.0, -EigSym(root).eigenvalues(0)));

    const Eigen::MatrixXd e = ExpSym(SymMatrix(a)).matrix();
    const Eigen::MatrixXd e2 = ExpSym(LogSpd(SymMatrix(e))).matrix();
    exp_log.Check(MaxAbs(e2 - e) / std::max(1.0, MaxAbs(e)));
    const double tr = e.trace();
    const double expected = dec.eigenvalues.array().exp().sum();
    exp_trace.Check(std::abs(tr - expected) / expected);
  }
  for (const Family* f : {&recon, &ortho, &mp, &sqrt_recon, &sqrt_psd, &exp_log, &exp_trace}) {
    out.push_back(f->Done());
  }
}

void GraphFamilies(Rng& rng, bool inject_fault, std::vector<FamilyReport>& out) {
  const double ineq_tol = inject_fault ? -std::numeric_limits<double>::infinity() : 1e-10;
  Family ineq_a("pdlaplacian_inequality_a", ineq_tol);
  Family ineq_b("pdlaplacian_inequality_b", ineq_tol);
  Family quad("laplacian_quadratic_identity", 1e-8);
  Family star_trace("clique_star_trace", 0.0);
  Family star_diam("clique_star_diameter", 0.0);
  Family star_radius("clique_star_radius", 0.0);
  Family perturb("perturb_connected", 0.0);
  Family scale("dqd_weight_scaling", 0.0);

  // 20 graphs x 50 vectors = 1000 random u per inequality.
  for (int g = 0; g < 20; ++g) {
    const int m = 2 + static_cast<int>(rng.UniformInt(29));
    const Graph graph = RandomConnectedGraph(m, rng.Uniform(0.05, 0.6), g % 2 == 1, rng);
    const SymMatrix l = LaplacianFromGraph(graph);
    const SymMatrix lo = PdLaplacian(l);
    const double r_l = SquaredRadius(l);
    const double r_lo = SquaredRadius(lo);
    for (int s = 0; s < 50; ++s) {
      Eigen::VectorXd u(m);
      for (int i = 0; i < m; ++i) u(i) = rng.Uniform(-1.0, 1.0);
      const double ql = QuadForm(l, u) * r_l;
      const double qlo = QuadForm(lo, u) * r_lo;
      ineq_a.Check(qlo - 2.0 * (ql + 1.0));
      ineq_b.Check(ql - 0.5 * qlo);
    }

    const Eigen::MatrixXd x = RandomMatrix(m, 3, rng);
    double direct = 0.0;
    for (const Edge& e : graph.edges()) direct += e.weight * (x.row(e.i) - x.row(e.j)).squaredNorm();
    const double via_trace = (x.transpose() * l.matrix() * x).trace();
    quad.Check(std::abs(via_trace - direct) / std::max(1.0, std::abs(direct)));
  }

  for (int rep = 0; rep < 20; ++rep) {
    const int k = 1 + static_cast<int>(rng.UniformInt(9));
    const int m = k + static_cast<int>(rng.UniformInt(30));
    std::vector<int> labels = SampleClasses(m, k, ClassSampling::kSurjective, rng);
    const Graph g = CliqueStarGraph(labels, k);
    const SymMatrix l = LaplacianFromGraph(g);
    const Eigen::MatrixXd r = OneHot(labels, k);
    star_trace.Check(std::abs((r.transpose() * l.matrix() * r).trace() - 2.0 * (k - 1)));
    star_diam.Check(std::max(0, g.HopDiameter() - 4));
    star_radius.Check(std::max(0.0, SquaredRadius(l) - 4.0));

    const double beta = rep == 0 ? 0.0 : rng.Uniform(0.0, 0.5);
    const Graph pg = PerturbGraph(g, beta, rng.NextU64());
    perturb.Check(pg.IsConnected() ? 0.0 : 1.0);
    if (beta == 0.0) {
      bool same = pg.edges().size() == g.edges().size();
      for (std::size_t e = 0; same && e < g.edges().size(); ++e) {
        same = std::any_of(pg.edges().begin(), pg.edges().end(), [&](const Edge& f) {
          return f.i == g.edges()[e].i && f.j == g.edges()[e].j;
        });
      }
      perturb.Check(same ? 0.0 : 1.0);
    }

    // Doubling every weight keeps 2 tr(R^T L° R) R_L° within a factor 2 band.
    if (m >= 2) {
      std::vector<Edge> doubled = pg.edges();
      for (Edge& e : doubled) e.weight *= 2.0;
      const SymMatrix lo1 = PdLaplacian(LaplacianFromGraph(pg));
      const SymMatrix lo2 = PdLaplacian(LaplacianFromGraph(Graph(m, doubled)));
      const double t1 = 2.0 * (r.transpose() * lo1.matrix() * r).trace() * SquaredRadius(lo1);
      const double t2 = 2.0 * (r.transpose() * lo2.matrix() * r).trace() * SquaredRadius(lo2);
      const bool ok = t1 >= 0 && t2 >= 0 && t2 <= 2.0 * t1 && t1 <= 2.0 * t2;
      scale.Check(ok ? 0.0 : 1.0);
    }
  }
  for (const Family* f :
       {&ineq_a, &ineq_b, &quad, &star_trace, &star_diam, &star_radius, &perturb, &scale}) {
    out.push_back(f->Done());
  }
}

void KernelFamilies(Rng& rng, std::vector<FamilyReport>& out) {
  Family psd("gram_psd", 1e-8);
  Family prop2("min_kernel_trace_bound", 0.0);
  for (int rep = 0; rep < 20; ++rep) {
    const int d = 1 + static_cast<int>(rng.UniformInt(3));
    const double r = rng.Uniform(2.0, 5.0);
    std::vector<Point> pts;
    const int count = 2 + static_cast<int>(rng.UniformInt(20));
    for (int s = 0; s < count; ++s) {
      Point x(d);
      for (int i = 0; i < d; ++i) x(i) = rng.Uniform(0.0, r);
      pts.push_back(x);
    }
    for (const KernelSpec& spec :
         {KernelSpec(MinKernel{r, d}), KernelSpec(LinearKernel{rng.Uniform(0.01, 2.0)})}) {
      const SymMatrix g = GramMatrix(spec, pts);
      const SpectralDecomposition dec = EigSym(g);
      psd.Check(std::max(0.0, -dec.eigenvalues(0)) / std::max(1e-300, dec.lambda_max()));
    }
  }

  for (int rep = 0; rep < 100; ++rep) {
    const int k = 1 + static_cast<int>(rng.UniformInt(3));
    const int d = 1 + static_cast<int>(rng.UniformInt(2));
    const double r = rng.Uniform(2.0, 5.0);
    const int per_box = std::max(1, 20 / k - static_cast<int>(rng.UniformInt(3)));
    const double delta_min = rng.Uniform(0.2, 1.0) * (d == 1 ? 2.0 * r / (k + 1) : r / 2.0);
    BoxInstanceData data;
    try {
      data = BoxInstance(k, d, r, delta_min, per_box, rng.NextU64());
    } catch (const std::runtime_error&) {
      --rep;  // infeasible draw, sample new parameters
      continue;
    }
    std::vector<Point> transformed;
    for (const Point& x : data.points) transformed.push_back(BoxTransform(x, r));
    const SymMatrix gram = GramMatrix(MinKernel{r, d}, transformed);
    const double delta_star = k >= 2 ? DeltaStarForRadius(data.delta, r) : 2.0;
    try {
      const TraceBoundCheck c =
          MinKernelTraceBoundCheck(OneHot(data.assignment, k), gram, delta_star, d);
      prop2.Check(std::max(0.0, c.lhs - c.bound) / c.bound);
    } catch (const std::domain_error&) {
      prop2.Fail();
    }
  }
  out.push_back(psd.Done());
  out.push_back(prop2.Done());
}

void PredictorFamilies(Rng& rng, std::vector<FamilyReport>& out) {
  Family emb("embedding_column_norm", 1e-10);
  Family b4("embedding_norm_at_most_one", 1e-10);
  Family init("initial_trace", 8.0 * std::numeric_limits<double>::epsilon());
  Family b2("comparator_identity", 1e-8);
  Family b3("comparator_trace", 1e-8);
  Family replay("replay_determinism", 1e-10);
  Family community("community_factors", 4.0 * std::numeric_limits<double>::epsilon());

  for (int rep = 0; rep < 10; ++rep) {
    const int m = 1 + static_cast<int>(rng.UniformInt(15));
    const int n = 2 + static_cast<int>(rng.UniformInt(15));
    const SymMatrix ms = RandomPd(m, rng);
    const SymMatrix ns = RandomPd(n, rng);
    const SideEmbedding be = EmbeddingFromPd(ms);
    const SideEmbedding ce = EmbeddingFromPd(ns);
    const Eigen::MatrixXd mp = PinvPsd(ms).matrix();
    for (int i = 0; i < m; ++i) {
      emb.Check(std::abs(be.Column(i).squaredNorm() - mp(i, i) / (2.0 * be.squared_radius())));
    }
    TransductiveParams params;
    params.m = m;
    params.n = n;
    params.d_hat = rng.Uniform(1.0, 50.0);
    params.eta = 0.3;
    params.gamma = 0.5;
    TransductivePredictor pred(params, be, ce);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) b4.Check(std::max(0.0, pred.Embed(i, j).squaredNorm() - 1.0));
    }
    init.Check(std::abs(pred.Materialize().trace() - params.d_hat) / params.d_hat);
  }

  for (int rep = 0; rep < 10; ++rep) {
    const int k = 1 + static_cast<int>(rng.UniformInt(5));
    const int l = 1 + static_cast<int>(rng.UniformInt(5));
    const int m = k + static_cast<int>(rng.UniformInt(10));
    const int n = l + static_cast<int>(rng.UniformInt(10));
    const Instance inst = GenBiclustered(m, n, k, l, rng.NextU64());
    const BlockDecomposition dec = inst.Decomposition();
    SymMatrix ms;
    SymMatrix ns;
    if (rep % 2 == 0 && m >= 2 && n >= 2) {
      ms = PdLaplacian(LaplacianFromGraph(CliqueStarGraph(inst.row_class, k)));
      ns = PdLaplacian(LaplacianFromGraph(CliqueStarGraph(inst.col_class, l)));
    } else {
      ms = RandomPd(m, rng);
      ns = RandomPd(n, rng);
    }
    const FactorPair fp = BiclusteredFactors(dec);
    const Eigen::MatrixXd z = ComparatorFactor(fp, ms, ns);
    const Eigen::MatrixXd w_star = z * z.transpose();
    const double gamma = 1.0 / MaxNormBoundBiclustered(k, l);
    TransductiveParams params;
    params.m = m;
    params.n = n;
    params.d_hat = m + n;
    TransductivePredictor pred(params, EmbeddingFromPd(ms), EmbeddingFromPd(ns));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd x = pred.Embed(i, j);
        const double lhs = x.dot(w_star * x) - 1.0;
        b2.Check(std::abs(lhs - gamma * inst.truth(i, j)));
      }
    }
    const double qd = QuasiDimFactored(fp, ms, ns);
    b3.Check(std::abs(w_star.trace() - qd) / std::max(1.0, qd));
  }

  for (UpdateMethod method : {UpdateMethod::kFull, UpdateMethod::kRankOne}) {
    for (int rep = 0; rep < 3; ++rep) {
      const int m = 3 + static_cast<int>(rng.UniformInt(10));
      const int n = 3 + static_cast<int>(rng.UniformInt(10));
      TransductiveParams params;
      params.m = m;
      params.n = n;
      params.d_hat = m + n;
      params.eta = 0.5;
      params.gamma = 0.5;
      params.non_conservative = true;
      PredictorOptions options;
      options.method = method;
      options.refresh_interval = 7;
      TransductivePredictor pred(params, EmbeddingFromPd(RandomPd(m, rng)),
                                 EmbeddingFromPd(RandomPd(n, rng)), options);
      for (int t = 1; t <= 60; ++t) {
        const std::size_t i = rng.UniformInt(m);
        const std::size_t j = rng.UniformInt(n);
        const int y = rng.Bernoulli(0.5) ? 1 : -1;
        const Prediction p = pred.Predict(i, j, 0.0);
        pred.Update(t, i, j, y, p.ybar);
      }
      const Eigen::MatrixXd w = pred.Materialize();
      replay.Check(MaxAbs(w - pred.Replay()) / std::max(1.0, MaxAbs(w)));
    }
  }

  for (int k = 1; k <= 10; ++k) {
    const CommunityFactors f = MakeCommunityFactors(k);
    const Eigen::MatrixXd target =
        2.0 * Eigen::MatrixXd::Identity(k, k) - Eigen::MatrixXd::Ones(k, k);
    community.Check(MaxAbs(f.p * f.q.transpose() - target));
    bool signs = true;
    const Eigen::MatrixXd prod = f.p * f.q.transpose();
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) signs = signs && ((prod(a, b) > 0) == (a == b));
    }
    community.Check(signs ? 0.0 : 1.0);
  }

  for (const Family* f : {&emb, &b4, &init, &b2, &b3, &replay, &community}) {
    out.push_back(f->Done());
  }
}

void EquivalenceFamily(Rng& rng, std::vector<FamilyReport>& out) {
  Family eq("inductive_equivalence", 1e-6);
  const EquivalenceSweep sweep = RunEquivalenceSweep(rng.NextU64(), 10, 8, 40);
  for (const auto& run : sweep.runs) eq.Check(run.at("max_gap").get<double>());
  out.push_back(eq.Done());
}

}  // namespace

EquivalenceSweep RunEquivalenceSweep(std::uint64_t seed, int instances, int max_dim,
                                     int max_horizon) {
  if (instances < 1 || max_dim < 2 || max_horizon < 1) {
    throw std::invalid_argument("equivalence sweep: need instances >= 1, max_dim >= 2, T >= 1");
  }
  Rng rng(seed);
  EquivalenceSweep sweep;
  for (int rep = 0; rep < instances; ++rep) {
    const int m = 2 + static_cast<int>(rng.UniformInt(max_dim - 1));
    const int n = 2 + static_cast<int>(rng.UniformInt(max_dim - 1));
    const bool min_kernel = rep % 2 == 0;
    const double r = 3.0;
    auto draw = [&](int count) {
      std::vector<Point> pts;
      for (int s = 0; s < count; ++s) {
        Point x(2);
        x << rng.Uniform(0.1, r), rng.Uniform(0.1, r);
        pts.push_back(x);
      }
      return pts;
    };
    const KernelSpec spec =
        min_kernel ? KernelSpec(MinKernel{r, 2}) : KernelSpec(LinearKernel{1.0});
    const IdentityKernel rows(spec, draw(m));
    const IdentityKernel cols(spec, draw(n));
    TransductiveParams params;
    params.m = m;
    params.n = n;
    params.d_hat = m + n;
    params.eta = 0.4;
    params.gamma = 0.5;
    params.non_conservative = rep % 3 != 0;
    std::vector<Trial> trials;
    const int horizon = 1 + static_cast<int>(rng.UniformInt(max_horizon));
    for (int t = 0; t < horizon; ++t) {
      trials.push_back({rng.UniformInt(m), rng.UniformInt(n), rng.Bernoulli(0.5) ? 1 : -1});
    }
    const EquivalenceResult res = EquivalenceCheck(trials, params, rows, cols, rng.NextU64());
    sweep.max_gap = std::max(sweep.max_gap, res.max_gap);
    sweep.runs.push_back({{"m", m},
                          {"n", n},
                          {"T", horizon},
                          {"kernel", min_kernel ? "min" : "linear"},
                          {"non_conservative", params.non_conservative},
                          {"updates", res.transductive.updates},
                          {"max_gap", res.max_gap}});
  }
  return sweep;
}

PropertyReport RunPropertySuite(std::uint64_t seed, bool inject_fault) {
  PropertyReport report;
  report.seed = seed;
  Rng rng(seed);
  SpectralFamilies(rng, report.families);
  GraphFamilies(rng, inject_fault, report.families);
  KernelFamilies(rng, report.families);
  PredictorFamilies(rng, report.families);
  EquivalenceFamily(rng, report.families);
  return report;
}

}  // namespace mcsi
