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

// Side information for rows and columns: graph Laplacians, their positive
// definite shift, kernels and Gram matrices, and the per-side embedding that
// maps an index to a vector of squared norm at most 1/2.

#ifndef MCSI_SIDEINFO_H_
#define MCSI_SIDEINFO_H_

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "Eigen/Dense"
#include "mcsi/spectral.h"

namespace mcsi {

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

// Undirected weighted graph on vertices 0..n-1. Edges are stored with i < j;
// self-loops, duplicate pairs and non-positive weights are rejected.
class Graph {
 public:
  Graph() = default;
  Graph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Eigen::MatrixXd Adjacency() const;
  // Component id per vertex, ids numbered by lowest member.
  std::vector<int> ComponentLabels() const;
  int NumComponents() const;
  bool IsConnected() const { return NumComponents() == 1; }
  // Longest shortest path in hops; -1 when disconnected.
  int HopDiameter() const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

// L = D - A.
SymMatrix LaplacianFromGraph(const Graph& g);

// R_M = max_i (M^+)_ii.
double SquaredRadius(const SymMatrix& m_psd);

// L + (1/sqrt(m))(1/sqrt(m))^T / R_L for the Laplacian of a connected graph.
// Throws std::domain_error when the null space has dimension >= 2.
SymMatrix PdLaplacian(const SymMatrix& laplacian);

// factor = sqrt(M^+) / sqrt(2 R_M); column i is the embedding of index i.
class SideEmbedding {
 public:
  SideEmbedding(Eigen::MatrixXd factor, double squared_radius);

  int dim() const { return static_cast<int>(factor_.cols()); }
  const Eigen::MatrixXd& factor() const { return factor_; }
  double squared_radius() const { return squared_radius_; }
  auto Column(int i) const { return factor_.col(i); }

 private:
  Eigen::MatrixXd factor_;
  double squared_radius_;
};

SideEmbedding EmbeddingFromPd(const SymMatrix& m_pd);

// Embedding when the Gram matrix plays the role of M^+. `radius` defaults to
// the largest diagonal entry of the Gram matrix.
SideEmbedding EmbeddingFromGram(const SymMatrix& gram,
                                std::optional<double> radius = {});

using Point = Eigen::VectorXd;

// prod_i min(x_i, t_i).
double MinKernelEval(const Point& x, const Point& t);

// (r - 1) / (2r) * x + (r + 1) / 2, mapping [-r, r]^d onto [1, r]^d.
Point BoxTransform(const Point& x, double r);

struct MinKernel {
  double r = 2.0;
  int d = 1;
};
struct LinearKernel {
  double epsilon = 1.0;
};
struct PrecomputedGram {
  SymMatrix gram;
};
using KernelSpec = std::variant<MinKernel, LinearKernel, PrecomputedGram>;

// Kernel over integer identities backed by a table of points (ignored for
// PrecomputedGram, whose identities index the stored matrix). The linear
// kernel's epsilon term fires on identical identities.
class IdentityKernel {
 public:
  IdentityKernel(KernelSpec spec, std::vector<Point> points);

  std::size_t size() const;
  double operator()(std::size_t a, std::size_t b) const;
  SymMatrix Gram(const std::vector<std::size_t>& ids) const;
  // Supremum of k(i, i): r^d for the min kernel, otherwise the largest
  // diagonal value over the table.
  double DomainRadius() const;
  const KernelSpec& spec() const { return spec_; }

 private:
  KernelSpec spec_;
  std::vector<Point> points_;
};

// Gram matrix over `points` (identity = position). Throws std::domain_error
// if the result is not PSD within the spectral rank tolerance.
SymMatrix GramMatrix(const KernelSpec& spec, const std::vector<Point>& points);

// Closed axis-aligned box {x : lo <= x <= hi}.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  bool Contains(const Point& x) const;
};

struct BoxSeparation {
  double delta = 0.0;       // min pairwise l-inf distance
  double delta_star = 0.0;  // min(2, delta / 4)
};

// Throws std::invalid_argument for fewer than two boxes or overlapping boxes.
BoxSeparation ComputeBoxSeparation(const std::vector<Box>& boxes);

// min(2, (r - 1) delta / (2r)), the weaker separation used in the bound proof.
double DeltaStarForRadius(double delta, double r);

}  // namespace mcsi

#endif  // MCSI_SIDEINFO_H_
