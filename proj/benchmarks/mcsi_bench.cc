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

#include <cmath>
#include <cstddef>

#include "Eigen/Dense"
#include "benchmark/benchmark.h"
#include "mcsi/spectral.h"
#include "mcsi/synth.h"
#include "mcsi/transductive.h"

namespace mcsi {
namespace {

SymMatrix RandomSym(int dim) {
  std::srand(7);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(dim, dim);
  return SymMatrix(a + a.transpose());
}

void BM_EigSym(benchmark::State& state) {
  const SymMatrix a = RandomSym(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(EigSym(a));
}
BENCHMARK(BM_EigSym)->Arg(40)->Arg(80)->Arg(160);

void BM_RankOneUpdate(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const SpectralDecomposition base = EigSym(RandomSym(dim));
  const Eigen::VectorXd x = Eigen::VectorXd::Random(dim).normalized();
  for (auto _ : state) {
    state.PauseTiming();
    SpectralDecomposition dec = base;
    state.ResumeTiming();
    RankOneUpdate(dec, 0.3, x);
    benchmark::DoNotOptimize(dec.eigenvalues.data());
  }
}
BENCHMARK(BM_RankOneUpdate)->Arg(40)->Arg(80)->Arg(160);

// One predict-and-update trial on an n x n grid with clique-star side info.
void BM_PredictorTrial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto method = state.range(1) == 0 ? UpdateMethod::kRankOne : UpdateMethod::kFull;
  const Instance inst = GenBiclustered(n, n, 3, 3, 1);
  const SymMatrix rows = PdLaplacian(LaplacianFromGraph(CliqueStarGraph(inst.row_class, 3)));
  const SymMatrix cols = PdLaplacian(LaplacianFromGraph(CliqueStarGraph(inst.col_class, 3)));
  TransductiveParams params;
  params.m = n;
  params.n = n;
  params.d_hat = 4.0 * n;
  params.gamma = 1.0 / std::sqrt(3.0);
  params.eta = params.gamma;
  params.non_conservative = true;
  TransductivePredictor predictor(params, EmbeddingFromPd(rows), EmbeddingFromPd(cols),
                                  {method, 500});
  std::size_t t = 0;
  for (auto _ : state) {
    const std::size_t i = t % n;
    const std::size_t j = (t * 7 + 3) % n;
    const Prediction p = predictor.Predict(i, j, 0.0);
    predictor.Update(t, i, j, inst.labels(i, j), p.ybar);
    ++t;
  }
}
BENCHMARK(BM_PredictorTrial)->Args({20, 0})->Args({40, 0})->Args({40, 1});

}  // namespace
}  // namespace mcsi

BENCHMARK_MAIN();
