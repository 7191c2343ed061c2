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

// Synthetic instance generators.

#ifndef MCSI_SYNTH_H_
#define MCSI_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "mcsi/quasidim.h"
#include "mcsi/random.h"
#include "mcsi/sideinfo.h"

namespace mcsi {

enum class ClassSampling {
  kSurjective,  // first k entries get distinct classes, rest uniform, shuffled
  kUniform,     // i.i.d. uniform; classes may be empty
};

const char* ClassSamplingName(ClassSampling s);
ClassSampling ParseClassSampling(const std::string& name);

std::vector<int> SampleClasses(int m, int k, ClassSampling sampling, Rng& rng);

// Number of distinct labels actually used.
int OccupiedClasses(const std::vector<int>& labels);

struct Instance {
  int m = 0;
  int n = 0;
  int k = 0;
  int l = 0;
  std::vector<int> row_class;
  std::vector<int> col_class;
  Eigen::MatrixXi u_star;
  Eigen::MatrixXi truth;   // U
  Eigen::MatrixXi labels;  // U after noise
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> flipped;
  std::uint64_t seed = 0;
  double p = 0.0;
  double beta = 0.0;
  ClassSampling sampling = ClassSampling::kSurjective;

  // Throws if a class is empty.
  BlockDecomposition Decomposition() const;
};

// Throws std::invalid_argument if m < k, n < l or k, l < 1. With
// kUniform sampling only m, n >= 1 is required.
Instance GenBiclustered(int m, int n, int k, int l, std::uint64_t seed,
                        ClassSampling sampling = ClassSampling::kSurjective);

// Flips each entry independently with probability p in [0, 1).
void ApplyLabelNoise(Instance& instance, double p, std::uint64_t seed);

// One unit-weight clique per class joined in a star: the centre is the
// lowest-index member of the lowest occupied class, linked to the
// lowest-index member of every other occupied class. Throws on an empty class
// in [0, k) unless allow_empty is set.
Graph CliqueStarGraph(const std::vector<int>& labels, int k, bool allow_empty = false);

// Flips every pair i < j with probability beta in [0, 0.5], then joins
// uniformly chosen component pairs by a uniform cross edge until connected.
// Output is unit weight.
Graph PerturbGraph(const Graph& g, double beta, std::uint64_t seed);

// Square instance with U_ij = +1 iff i and j share a class.
Instance CommunityInstance(const std::vector<int>& labels, int k);

struct BoxInstanceData {
  std::vector<Point> points;  // in [-r, r]^d
  std::vector<int> assignment;
  std::vector<Box> boxes;
  double delta = 0.0;        // 0 when k = 1
  double delta_star = 2.0;
};

// Rejection-samples k boxes in [-r, r]^d with pairwise l-inf separation
// >= delta_min and draws points uniformly inside each. Throws
// std::runtime_error when placement fails.
BoxInstanceData BoxInstance(int k, int d, double r, double delta_min, int points_per_box,
                            std::uint64_t seed);

}  // namespace mcsi

#endif  // MCSI_SYNTH_H_
