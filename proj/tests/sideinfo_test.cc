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

#include <cmath>
#include <vector>

#include "Eigen/Dense"
#include "gtest/gtest.h"
#include "mcsi/random.h"

namespace mcsi {
namespace {

double MaxAbs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd M2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

TEST(GraphTest, RejectsBadEdges) {
  EXPECT_THROW(Graph(2, {{0, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Graph(2, {{0, 2, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Graph(2, {{0, 1, 1.0}, {1, 0, 1.0}}), std::invalid_argument);
  EXPECT_THROW(Graph(2, {{0, 1, 0.0}}), std::invalid_argument);
}

TEST(GraphTest, ComponentsAndDiameter) {
  const Graph path(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  EXPECT_TRUE(path.IsConnected());
  EXPECT_EQ(path.HopDiameter(), 3);
  const Graph split(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  EXPECT_EQ(split.NumComponents(), 2);
  EXPECT_EQ(split.HopDiameter(), -1);
}

TEST(LaplacianTest, Examples) {
  EXPECT_EQ(LaplacianFromGraph(Graph(2, {{0, 1, 1.0}})).matrix(), M2(1, -1, -1, 1));
  EXPECT_EQ(LaplacianFromGraph(Graph(2, {{0, 1, 2.0}})).matrix(), M2(2, -2, -2, 2));
  Eigen::MatrixXd tri = 3.0 * Eigen::MatrixXd::Identity(3, 3) - Eigen::MatrixXd::Ones(3, 3);
  EXPECT_EQ(LaplacianFromGraph(Graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}})).matrix(),
            tri);
}

TEST(SquaredRadiusTest, Examples) {
  EXPECT_NEAR(SquaredRadius(SymMatrix::Identity(4)), 1.0, 1e-15);
  EXPECT_NEAR(SquaredRadius(SymMatrix(M2(1, -1, -1, 1))), 0.25, 1e-15);
  EXPECT_NEAR(SquaredRadius(SymMatrix(M2(3, 1, 1, 3))), 0.375, 1e-15);
}

TEST(PdLaplacianTest, TwoPath) {
  const SymMatrix lo = PdLaplacian(SymMatrix(M2(1, -1, -1, 1)));
  EXPECT_LE(MaxAbs(lo.matrix() - M2(3, 1, 1, 3)), 1e-14);
  const Eigen::Vector2d ones = Eigen::Vector2d::Ones();
  EXPECT_LE((lo.matrix() * ones - 4.0 * ones).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PdLaplacianTest, RejectsDisconnected) {
  EXPECT_THROW(PdLaplacian(SymMatrix::Zero(2)), std::domain_error);
  EXPECT_THROW(PdLaplacian(LaplacianFromGraph(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}))),
               std::domain_error);
}

TEST(PdLaplacianTest, OnesVectorEigenpair) {
  Rng rng(4);
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < 12; ++i) edges.push_back({i, i + 1, rng.Uniform(0.5, 2.0)});
  edges.push_back({0, 7, 1.5});
  const SymMatrix l = LaplacianFromGraph(Graph(12, edges));
  const SymMatrix lo = PdLaplacian(l);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(12);
  EXPECT_LE((lo.matrix() * ones - ones / SquaredRadius(l)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(EigSym(lo).eigenvalues(0), 0.0);
}

TEST(LaplacianTest, QuadraticFormIdentity) {
  Rng rng(8);
  std::vector<Edge> edges = {{0, 1, 0.5}, {1, 2, 2.0}, {0, 3, 1.0}, {2, 4, 3.0}, {3, 4, 0.1}};
  const Graph g(5, edges);
  const SymMatrix l = LaplacianFromGraph(g);
  Eigen::MatrixXd x(5, 3);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.Uniform(-2, 2);
  }
  double direct = 0.0;
  for (const Edge& e : edges) direct += e.weight * (x.row(e.i) - x.row(e.j)).squaredNorm();
  EXPECT_NEAR((x.transpose() * l.matrix() * x).trace(), direct, 1e-8);
}

TEST(EmbeddingTest, IdentityAndTwoByTwo) {
  const SideEmbedding id = EmbeddingFromPd(SymMatrix::Identity(3));
  EXPECT_NEAR(id.squared_radius(), 1.0, 1e-15);
  EXPECT_LE(MaxAbs(id.factor() - Eigen::MatrixXd::Identity(3, 3) / std::sqrt(2.0)), 1e-15);

  const SideEmbedding e = EmbeddingFromPd(SymMatrix(M2(3, 1, 1, 3)));
  EXPECT_NEAR(e.squared_radius(), 0.375, 1e-15);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(e.Column(i).squaredNorm(), 0.5, 1e-15);
}

TEST(EmbeddingTest, ColumnNormsMatchPseudoinverseDiagonal) {
  Rng rng(12);
  Eigen::MatrixXd x(9, 9);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) x(i, j) = rng.Uniform(-1, 1);
  }
  const SymMatrix m(x * x.transpose() + 0.05 * Eigen::MatrixXd::Identity(9, 9));
  const SideEmbedding e = EmbeddingFromPd(m);
  const Eigen::MatrixXd inv = m.matrix().inverse();
  EXPECT_NEAR(e.squared_radius(), inv.diagonal().maxCoeff(), 1e-10 * e.squared_radius());
  for (int i = 0; i < 9; ++i) {
    EXPECT_NEAR(e.Column(i).squaredNorm(), inv(i, i) / (2.0 * e.squared_radius()), 1e-10);
    EXPECT_LE(e.Column(i).squaredNorm(), 0.5 + 1e-10);
  }
  // Factor squares to M^+ / (2 R).
  EXPECT_LE(MaxAbs(e.factor() * e.factor() - inv / (2.0 * e.squared_radius())), 1e-10);
}

TEST(MinKernelTest, Examples) {
  EXPECT_EQ(MinKernelEval(Point::Constant(1, 2.0), Point::Constant(1, 3.0)), 2.0);
  EXPECT_EQ(MinKernelEval(Eigen::Vector2d(2, 5), Eigen::Vector2d(3, 4)), 8.0);
  const Eigen::Vector3d x(1.5, 2.0, 0.5);
  EXPECT_EQ(MinKernelEval(x, x), 1.5);
  EXPECT_THROW(MinKernelEval(x, Eigen::Vector2d(1, 1)), std::invalid_argument);
}

TEST(BoxTransformTest, Examples) {
  const double r = 3.0;
  EXPECT_LE((BoxTransform(Point::Constant(2, -r), r).array() - 1.0).abs().maxCoeff(), 1e-15);
  EXPECT_LE((BoxTransform(Point::Constant(2, r), r).array() - r).abs().maxCoeff(), 1e-15);
  EXPECT_NEAR(BoxTransform(Point::Zero(1), 2.0)(0), 1.5, 1e-15);
  EXPECT_THROW(BoxTransform(Point::Constant(1, 3.5), 3.0), std::invalid_argument);
  EXPECT_THROW(BoxTransform(Point::Zero(1), 1.5), std::invalid_argument);
}

TEST(GramMatrixTest, Examples) {
  const SymMatrix g =
      GramMatrix(MinKernel{4.0, 1}, {Point::Constant(1, 2.0), Point::Constant(1, 3.0)});
  EXPECT_EQ(g.matrix(), M2(2, 2, 2, 3));
  const SymMatrix lin = GramMatrix(LinearKernel{1.0}, {Point::Zero(2), Point::Zero(2)});
  EXPECT_EQ(lin.matrix(), M2(1, 0, 0, 1));
  const Eigen::Vector2d p(1.5, 2.5);
  EXPECT_EQ(GramMatrix(MinKernel{3.0, 2}, {p}).matrix()(0, 0), 3.75);
}

TEST(GramMatrixTest, RejectsBadSpecs) {
  EXPECT_THROW(GramMatrix(MinKernel{2.0, 1}, {Point::Constant(1, -0.5)}), std::invalid_argument);
  EXPECT_THROW(GramMatrix(MinKernel{2.0, 1}, {Point::Constant(1, 2.5)}), std::invalid_argument);
  EXPECT_THROW(GramMatrix(LinearKernel{0.0}, {Point::Zero(2)}), std::invalid_argument);
  const IdentityKernel k(PrecomputedGram{SymMatrix(M2(1, 0, 0, 1))}, {});
  EXPECT_THROW(k.Gram({0, 2}), std::out_of_range);
}

TEST(GramMatrixTest, RandomMinKernelIsPsd) {
  Rng rng(2);
  std::vector<Point> pts;
  for (int s = 0; s < 25; ++s) pts.push_back(Eigen::Vector2d(rng.Uniform(0, 3), rng.Uniform(0, 3)));
  const SpectralDecomposition d = EigSym(GramMatrix(MinKernel{3.0, 2}, pts));
  EXPECT_GE(d.eigenvalues(0), -1e-8 * d.lambda_max());
}

TEST(IdentityKernelTest, LookupsAndRadius) {
  const IdentityKernel k(MinKernel{3.0, 1}, {Point::Constant(1, 1.0), Point::Constant(1, 2.0)});
  EXPECT_EQ(k.size(), 2u);
  EXPECT_EQ(k(0, 1), 1.0);
  EXPECT_EQ(k.DomainRadius(), 3.0);
  EXPECT_THROW(k(0, 2), std::out_of_range);
  const IdentityKernel pre(PrecomputedGram{SymMatrix(M2(2, 1, 1, 5))}, {});
  EXPECT_EQ(pre.DomainRadius(), 5.0);
  EXPECT_EQ(pre.Gram({1, 0}).matrix(), M2(5, 1, 1, 2));
}

TEST(BoxSeparationTest, Examples) {
  const BoxSeparation a = ComputeBoxSeparation(
      {{Point::Constant(1, -4), Point::Constant(1, -2)}, {Point::Constant(1, 2), Point::Constant(1, 4)}});
  EXPECT_EQ(a.delta, 4.0);
  EXPECT_EQ(a.delta_star, 1.0);
  const BoxSeparation b = ComputeBoxSeparation(
      {{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)}, {Eigen::Vector2d(3, 0), Eigen::Vector2d(4, 1)}});
  EXPECT_EQ(b.delta, 2.0);
  EXPECT_EQ(b.delta_star, 0.5);
  EXPECT_THROW(ComputeBoxSeparation({{Point::Zero(1), Point::Ones(1)}}), std::invalid_argument);
  EXPECT_THROW(ComputeBoxSeparation({{Point::Zero(1), Point::Ones(1)},
                                     {Point::Constant(1, 0.5), Point::Constant(1, 2)}}),
               std::invalid_argument);
}

// Brute-force oracle: min over sampled point pairs of the l-inf distance.
TEST(BoxSeparationTest, AgreesWithGridSampling) {
  const std::vector<Box> boxes = {{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)},
                                  {Eigen::Vector2d(3, 0.5), Eigen::Vector2d(4, 2)},
                                  {Eigen::Vector2d(-1, 2.5), Eigen::Vector2d(0.5, 3)}};
  auto grid = [](const Box& b) {
    std::vector<Eigen::Vector2d> pts;
    for (int i = 0; i <= 99; ++i) {
      for (int j = 0; j <= 99; ++j) {
        pts.emplace_back(b.lo(0) + (b.hi(0) - b.lo(0)) * i / 99.0,
                         b.lo(1) + (b.hi(1) - b.lo(1)) * j / 99.0);
      }
    }
    return pts;
  };
  double best = 1e300;
  for (std::size_t a = 0; a < boxes.size(); ++a) {
    for (std::size_t c = a + 1; c < boxes.size(); ++c) {
      const auto pa = grid(boxes[a]);
      const auto pc = grid(boxes[c]);
      // Distances are attained on box boundaries; the boundary rows suffice.
      for (const auto& x : pa) {
        if (x(0) != boxes[a].lo(0) && x(0) != boxes[a].hi(0) && x(1) != boxes[a].lo(1) &&
            x(1) != boxes[a].hi(1)) {
          continue;
        }
        for (const auto& y : pc) best = std::min(best, (x - y).cwiseAbs().maxCoeff());
      }
    }
  }
  EXPECT_NEAR(ComputeBoxSeparation(boxes).delta, best, 1e-12);
}

TEST(BoxSeparationTest, RadiusVariant) {
  EXPECT_EQ(DeltaStarForRadius(4.0, 2.0), 1.0);
  EXPECT_EQ(DeltaStarForRadius(100.0, 3.0), 2.0);
  // (r - 1) / (2 r) >= 1/4 for r >= 2.
  EXPECT_GE(DeltaStarForRadius(1.0, 5.0), 0.25);
}

}  // namespace
}  // namespace mcsi
