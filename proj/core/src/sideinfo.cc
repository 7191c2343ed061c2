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

#include "mcsi/sideinfo.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace mcsi {

Graph::Graph(int num_vertices, std::vector<Edge> edges) : n_(num_vertices) {
  if (num_vertices < 1) throw std::invalid_argument("Graph: need at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (Edge& e : edges) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n_) {
      throw std::invalid_argument("Graph: edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ") out of range");
    }
    if (e.i == e.j) throw std::invalid_argument("Graph: self-loop at " + std::to_string(e.i));
    if (!(e.weight > 0) || !std::isfinite(e.weight)) {
      throw std::invalid_argument("Graph: edge weight must be positive and finite");
    }
    if (!seen.insert({e.i, e.j}).second) {
      throw std::invalid_argument("Graph: duplicate edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
    }
  }
  edges_ = std::move(edges);
}

Eigen::MatrixXd Graph::Adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (const Edge& e : edges_) {
    a(e.i, e.j) = e.weight;
    a(e.j, e.i) = e.weight;
  }
  return a;
}

std::vector<int> Graph::ComponentLabels() const {
  std::vector<std::vector<int>> adj(n_);
  for (const Edge& e : edges_) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  std::vector<int> label(n_, -1);
  int next = 0;
  for (int s = 0; s < n_; ++s) {
    if (label[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[u]) {
        if (label[w] < 0) {
          label[w] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return label;
}

int Graph::NumComponents() const {
  const std::vector<int> label = ComponentLabels();
  return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

int Graph::HopDiameter() const {
  std::vector<std::vector<int>> adj(n_);
  for (const Edge& e : edges_) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  int diameter = 0;
  for (int s = 0; s < n_; ++s) {
    std::vector<int> dist(n_, -1);
    std::queue<int> q;
    q.push(s);
    dist[s] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[u]) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (dist[v] < 0) return -1;
      diameter = std::max(diameter, dist[v]);
    }
  }
  return diameter;
}

SymMatrix LaplacianFromGraph(const Graph& g) {
  const Eigen::MatrixXd a = g.Adjacency();
  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return SymMatrix(l);
}

double SquaredRadius(const SymMatrix& m_psd) {
  return PinvPsd(m_psd).matrix().diagonal().maxCoeff();
}

SymMatrix PdLaplacian(const SymMatrix& laplacian) {
  const int m = laplacian.dim();
  if (m < 2) throw std::domain_error("PdLaplacian: needs at least two vertices");
  const SpectralDecomposition dec = EigSym(laplacian);
  const double scale = dec.eigenvalues.cwiseAbs().maxCoeff();
  const double cutoff = DefaultRankTolerance(m) * scale;
  if (dec.eigenvalues(0) < -cutoff) {
    throw std::domain_error("PdLaplacian: input is not PSD");
  }
  int nullity = 0;
  for (int i = 0; i < m; ++i) {
    if (dec.eigenvalues(i) <= cutoff) ++nullity;
  }
  if (nullity != 1) {
    throw std::domain_error("PdLaplacian: expected a connected-graph Laplacian of rank m-1, "
                            "found null space of dimension " + std::to_string(nullity));
  }
  const Eigen::MatrixXd pinv =
      dec.Apply([cutoff](double x) { return x > cutoff ? 1.0 / x : 0.0; });
  const double radius = pinv.diagonal().maxCoeff();
  const Eigen::MatrixXd shift = Eigen::MatrixXd::Constant(m, m, 1.0 / (m * radius));
  return SymMatrix(laplacian.matrix() + shift);
}

SideEmbedding::SideEmbedding(Eigen::MatrixXd factor, double squared_radius)
    : factor_(std::move(factor)), squared_radius_(squared_radius) {
  if (!(squared_radius_ > 0)) {
    throw std::invalid_argument("SideEmbedding: squared radius must be positive");
  }
  if (factor_.rows() != factor_.cols()) {
    throw std::invalid_argument("SideEmbedding: factor must be square");
  }
}

SideEmbedding EmbeddingFromPd(const SymMatrix& m_pd) {
  const SpectralDecomposition dec = EigSym(m_pd);
  const double scale = dec.eigenvalues.cwiseAbs().maxCoeff();
  const double cutoff = DefaultRankTolerance(m_pd.dim()) * scale;
  if (dec.eigenvalues(0) < -cutoff) {
    throw std::domain_error("EmbeddingFromPd: matrix is not PSD");
  }
  const Eigen::MatrixXd pinv =
      dec.Apply([cutoff](double x) { return x > cutoff ? 1.0 / x : 0.0; });
  const double radius = pinv.diagonal().maxCoeff();
  if (!(radius > 0)) throw std::domain_error("EmbeddingFromPd: zero matrix");
  Eigen::MatrixXd factor =
      dec.Apply([cutoff](double x) { return x > cutoff ? 1.0 / std::sqrt(x) : 0.0; });
  factor /= std::sqrt(2.0 * radius);
  return SideEmbedding(std::move(factor), radius);
}

SideEmbedding EmbeddingFromGram(const SymMatrix& gram, std::optional<double> radius) {
  const double r = radius.value_or(gram.matrix().diagonal().maxCoeff());
  Eigen::MatrixXd factor = SqrtPsd(gram).matrix() / std::sqrt(2.0 * r);
  return SideEmbedding(std::move(factor), r);
}

double MinKernelEval(const Point& x, const Point& t) {
  if (x.size() != t.size()) throw std::invalid_argument("MinKernelEval: dimension mismatch");
  double v = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) v *= std::min(x(i), t(i));
  return v;
}

Point BoxTransform(const Point& x, double r) {
  if (!(r >= 2)) throw std::invalid_argument("BoxTransform: r must be >= 2");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) >= -r && x(i) <= r)) {
      throw std::invalid_argument("BoxTransform: coordinate outside [-r, r]");
    }
  }
  return ((r - 1.0) / (2.0 * r)) * x.array() + (r + 1.0) / 2.0;
}

IdentityKernel::IdentityKernel(KernelSpec spec, std::vector<Point> points)
    : spec_(std::move(spec)), points_(std::move(points)) {
  if (const auto* mk = std::get_if<MinKernel>(&spec_)) {
    if (!(mk->r > 0) || mk->d < 1) throw std::invalid_argument("MinKernel: need r > 0, d >= 1");
    for (const Point& p : points_) {
      if (p.size() != mk->d) throw std::invalid_argument("MinKernel: point dimension mismatch");
      if ((p.array() < 0).any() || (p.array() > mk->r).any()) {
        throw std::invalid_argument("MinKernel: point outside [0, r]^d");
      }
    }
  } else if (const auto* lk = std::get_if<LinearKernel>(&spec_)) {
    if (!(lk->epsilon > 0)) throw std::invalid_argument("LinearKernel: epsilon must be > 0");
    for (const Point& p : points_) {
      if (!points_.empty() && p.size() != points_.front().size()) {
        throw std::invalid_argument("LinearKernel: point dimension mismatch");
      }
    }
  }
}

std::size_t IdentityKernel::size() const {
  if (const auto* g = std::get_if<PrecomputedGram>(&spec_)) {
    return static_cast<std::size_t>(g->gram.dim());
  }
  return points_.size();
}

double IdentityKernel::operator()(std::size_t a, std::size_t b) const {
  if (a >= size() || b >= size()) {
    throw std::out_of_range("IdentityKernel: unknown identity " + std::to_string(std::max(a, b)));
  }
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MinKernel>) {
          return MinKernelEval(points_[a], points_[b]);
        } else if constexpr (std::is_same_v<K, LinearKernel>) {
          return points_[a].dot(points_[b]) + (a == b ? k.epsilon : 0.0);
        } else {
          return k.gram(static_cast<int>(a), static_cast<int>(b));
        }
      },
      spec_);
}

SymMatrix IdentityKernel::Gram(const std::vector<std::size_t>& ids) const {
  const int q = static_cast<int>(ids.size());
  Eigen::MatrixXd g(q, q);
  for (int r = 0; r < q; ++r) {
    for (int s = r; s < q; ++s) {
      g(r, s) = g(s, r) = (*this)(ids[r], ids[s]);
    }
  }
  return SymMatrix(g);
}

double IdentityKernel::DomainRadius() const {
  if (const auto* mk = std::get_if<MinKernel>(&spec_)) return std::pow(mk->r, mk->d);
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) best = std::max(best, (*this)(i, i));
  return best;
}

SymMatrix GramMatrix(const KernelSpec& spec, const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("GramMatrix: no points");
  const IdentityKernel kernel(spec, points);
  std::vector<std::size_t> ids(points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  SymMatrix gram = kernel.Gram(ids);
  const SpectralDecomposition dec = EigSym(gram);
  const double scale = dec.eigenvalues.cwiseAbs().maxCoeff();
  if (dec.eigenvalues(0) < -DefaultRankTolerance(gram.dim()) * scale) {
    throw std::domain_error("GramMatrix: kernel matrix is not PSD");
  }
  return gram;
}

bool Box::Contains(const Point& x) const {
  return x.size() == lo.size() && (x.array() >= lo.array()).all() &&
         (x.array() <= hi.array()).all();
}

BoxSeparation ComputeBoxSeparation(const std::vector<Box>& boxes) {
  if (boxes.size() < 2) throw std::invalid_argument("ComputeBoxSeparation: need >= 2 boxes");
  const Eigen::Index d = boxes.front().lo.size();
  for (const Box& b : boxes) {
    if (b.lo.size() != d || b.hi.size() != d) {
      throw std::invalid_argument("ComputeBoxSeparation: dimension mismatch");
    }
    if ((b.lo.array() > b.hi.array()).any()) {
      throw std::invalid_argument("ComputeBoxSeparation: box with lo > hi");
    }
  }
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    for (std::size_t b = a + 1; b < boxes.size(); ++b) {
      double dist = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        const double gap = std::max({0.0, boxes[b].lo(i) - boxes[a].hi(i),
                                     boxes[a].lo(i) - boxes[b].hi(i)});
        dist = std::max(dist, gap);
      }
      if (dist <= 0.0) {
        throw std::invalid_argument("ComputeBoxSeparation: boxes " + std::to_string(a) + " and " +
                                    std::to_string(b) + " overlap");
      }
      delta = std::min(delta, dist);
    }
  }
  return {delta, std::min(2.0, delta / 4.0)};
}

double DeltaStarForRadius(double delta, double r) {
  return std::min(2.0, (r - 1.0) * delta / (2.0 * r));
}

}  // namespace mcsi
