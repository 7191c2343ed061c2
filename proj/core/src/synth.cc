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

#include "mcsi/synth.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace mcsi {
namespace {

constexpr int kPlacementRestarts = 200;
constexpr int kPlacementTries = 2000;

double LinfDistance(const Box& a, const Box& b) {
  double dist = 0.0;
  for (Eigen::Index i = 0; i < a.lo.size(); ++i) {
    dist = std::max({dist, b.lo(i) - a.hi(i), a.lo(i) - b.hi(i)});
  }
  return dist;
}

std::vector<std::vector<int>> Members(const std::vector<int>& labels, int k) {
  std::vector<std::vector<int>> members(k);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (labels[v] < 0 || labels[v] >= k) {
      throw std::invalid_argument("class label out of range at " + std::to_string(v));
    }
    members[labels[v]].push_back(static_cast<int>(v));
  }
  return members;
}

}  // namespace

const char* ClassSamplingName(ClassSampling s) {
  return s == ClassSampling::kSurjective ? "surjective" : "uniform";
}

ClassSampling ParseClassSampling(const std::string& name) {
  if (name == "surjective") return ClassSampling::kSurjective;
  if (name == "uniform") return ClassSampling::kUniform;
  throw std::invalid_argument("unknown class sampling '" + name + "'");
}

std::vector<int> SampleClasses(int m, int k, ClassSampling sampling, Rng& rng) {
  if (m < 1 || k < 1) throw std::invalid_argument("SampleClasses: need m, k >= 1");
  std::vector<int> labels(m);
  int start = 0;
  if (sampling == ClassSampling::kSurjective) {
    if (m < k) throw std::invalid_argument("SampleClasses: m < k cannot be surjective");
    for (; start < k; ++start) labels[start] = start;
  }
  for (int v = start; v < m; ++v) labels[v] = static_cast<int>(rng.UniformInt(k));
  if (sampling == ClassSampling::kSurjective) rng.Shuffle(labels);
  return labels;
}

int OccupiedClasses(const std::vector<int>& labels) {
  return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

BlockDecomposition Instance::Decomposition() const {
  return BlockDecomposition(row_class, col_class, u_star);
}

Instance GenBiclustered(int m, int n, int k, int l, std::uint64_t seed, ClassSampling sampling) {
  if (k < 1 || l < 1) throw std::invalid_argument("GenBiclustered: need k, l >= 1");
  if (sampling == ClassSampling::kSurjective && (m < k || n < l)) {
    throw std::invalid_argument("GenBiclustered: need m >= k and n >= l");
  }
  Rng rng(seed);
  Instance inst;
  inst.m = m;
  inst.n = n;
  inst.k = k;
  inst.l = l;
  inst.seed = seed;
  inst.sampling = sampling;
  inst.row_class = SampleClasses(m, k, sampling, rng);
  inst.col_class = SampleClasses(n, l, sampling, rng);
  inst.u_star.resize(k, l);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < l; ++b) inst.u_star(a, b) = rng.Bernoulli(0.5) ? 1 : -1;
  }
  inst.truth.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) inst.truth(i, j) = inst.u_star(inst.row_class[i], inst.col_class[j]);
  }
  inst.labels = inst.truth;
  inst.flipped.setConstant(m, n, false);
  return inst;
}

void ApplyLabelNoise(Instance& instance, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("ApplyLabelNoise: p must be in [0, 1)");
  Rng rng(seed);
  instance.p = p;
  instance.labels = instance.truth;
  instance.flipped.setConstant(instance.m, instance.n, false);
  for (int i = 0; i < instance.m; ++i) {
    for (int j = 0; j < instance.n; ++j) {
      if (rng.Bernoulli(p)) {
        instance.flipped(i, j) = true;
        instance.labels(i, j) = -instance.truth(i, j);
      }
    }
  }
}

Graph CliqueStarGraph(const std::vector<int>& labels, int k, bool allow_empty) {
  if (labels.empty() || k < 1) throw std::invalid_argument("CliqueStarGraph: empty input");
  const std::vector<std::vector<int>> members = Members(labels, k);
  std::vector<Edge> edges;
  int center = -1;
  for (int c = 0; c < k; ++c) {
    const std::vector<int>& mem = members[c];
    if (mem.empty()) {
      if (allow_empty) continue;
      throw std::invalid_argument("CliqueStarGraph: class " + std::to_string(c) + " is empty");
    }
    for (std::size_t a = 0; a < mem.size(); ++a) {
      for (std::size_t b = a + 1; b < mem.size(); ++b) edges.push_back({mem[a], mem[b], 1.0});
    }
    if (center < 0) {
      center = mem.front();
    } else {
      edges.push_back({center, mem.front(), 1.0});
    }
  }
  return Graph(static_cast<int>(labels.size()), std::move(edges));
}

Graph PerturbGraph(const Graph& g, double beta, std::uint64_t seed) {
  if (!(beta >= 0.0 && beta <= 0.5)) {
    throw std::invalid_argument("PerturbGraph: beta must be in [0, 0.5]");
  }
  const int m = g.num_vertices();
  Rng rng(seed);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> adj;
  adj.setConstant(m, m, false);
  for (const Edge& e : g.edges()) adj(e.i, e.j) = true;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (rng.Bernoulli(beta)) adj(i, j) = !adj(i, j);
    }
  }
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (adj(i, j)) edges.push_back({i, j, 1.0});
    }
  }
  Graph out(m, edges);
  while (true) {
    const std::vector<int> comp = out.ComponentLabels();
    const int nc = *std::max_element(comp.begin(), comp.end()) + 1;
    if (nc <= 1) break;
    const int a = static_cast<int>(rng.UniformInt(nc));
    int b = static_cast<int>(rng.UniformInt(nc - 1));
    if (b >= a) ++b;
    std::vector<int> in_a;
    std::vector<int> in_b;
    for (int v = 0; v < m; ++v) {
      if (comp[v] == a) in_a.push_back(v);
      if (comp[v] == b) in_b.push_back(v);
    }
    const int u = in_a[rng.UniformInt(in_a.size())];
    const int w = in_b[rng.UniformInt(in_b.size())];
    edges.push_back({std::min(u, w), std::max(u, w), 1.0});
    out = Graph(m, edges);
  }
  return out;
}

Instance CommunityInstance(const std::vector<int>& labels, int k) {
  Members(labels, k);
  Instance inst;
  inst.m = inst.n = static_cast<int>(labels.size());
  inst.k = inst.l = k;
  inst.row_class = inst.col_class = labels;
  inst.u_star = 2 * Eigen::MatrixXi::Identity(k, k) - Eigen::MatrixXi::Ones(k, k);
  inst.truth.resize(inst.m, inst.n);
  for (int i = 0; i < inst.m; ++i) {
    for (int j = 0; j < inst.n; ++j) inst.truth(i, j) = labels[i] == labels[j] ? 1 : -1;
  }
  inst.labels = inst.truth;
  inst.flipped.setConstant(inst.m, inst.n, false);
  inst.Decomposition();  // rejects empty classes
  return inst;
}

BoxInstanceData BoxInstance(int k, int d, double r, double delta_min, int points_per_box,
                            std::uint64_t seed) {
  if (k < 1 || d < 1 || points_per_box < 1) {
    throw std::invalid_argument("BoxInstance: need k, d, points_per_box >= 1");
  }
  if (!(r >= 2.0)) throw std::invalid_argument("BoxInstance: need r >= 2");
  if (!(delta_min > 0.0)) throw std::invalid_argument("BoxInstance: delta_min must be > 0");
  const double max_width = (2.0 * r - (k - 1) * delta_min) / k;
  if (!(max_width > 0.0) && d == 1) {
    throw std::runtime_error("BoxInstance: boxes cannot be separated by delta_min in [-r, r]");
  }
  const double width_cap = d == 1 ? max_width : std::min(2.0 * r / k, 2.0 * r);
  Rng rng(seed);
  BoxInstanceData out;
  bool placed = false;
  for (int restart = 0; restart < kPlacementRestarts && !placed; ++restart) {
    out.boxes.clear();
    for (int c = 0; c < k; ++c) {
      bool ok = false;
      for (int attempt = 0; attempt < kPlacementTries && !ok; ++attempt) {
        Box box{Eigen::VectorXd(d), Eigen::VectorXd(d)};
        for (int i = 0; i < d; ++i) {
          const double w = rng.Uniform(0.2, 1.0) * width_cap;
          box.lo(i) = rng.Uniform(-r, r - w);
          box.hi(i) = box.lo(i) + w;
        }
        ok = std::all_of(out.boxes.begin(), out.boxes.end(),
                         [&](const Box& other) { return LinfDistance(box, other) >= delta_min; });
        if (ok) out.boxes.push_back(std::move(box));
      }
      if (!ok) break;
    }
    placed = static_cast<int>(out.boxes.size()) == k;
  }
  if (!placed) throw std::runtime_error("BoxInstance: placement failed after max attempts");

  for (int c = 0; c < k; ++c) {
    const Box& box = out.boxes[c];
    for (int s = 0; s < points_per_box; ++s) {
      Point x(d);
      for (int i = 0; i < d; ++i) x(i) = rng.Uniform(box.lo(i), box.hi(i));
      out.points.push_back(std::move(x));
      out.assignment.push_back(c);
    }
  }
  if (k >= 2) {
    const BoxSeparation sep = ComputeBoxSeparation(out.boxes);
    out.delta = sep.delta;
    out.delta_star = sep.delta_star;
  }
  return out;
}

}  // namespace mcsi
