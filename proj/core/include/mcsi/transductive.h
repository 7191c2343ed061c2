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

// Online matrix exponentiated gradient predictor for binary matrix completion
// with fixed row and column side information.
//
// The hypothesis is W = exp(kappa I + sum_s eta y_s x_s x_s^T) with
// kappa = log(D_hat / (m + n)) and x_s the concatenated row/column
// embedding of the entry revealed on update trial s. The state keeps the
// log-domain sum and its eigendecomposition; predictions are
// ybar = x^T W x - 1 evaluated through the eigenbasis.

#ifndef MCSI_TRANSDUCTIVE_H_
#define MCSI_TRANSDUCTIVE_H_

#include <cmath>
#include <cstddef>
#include <vector>

#include "Eigen/Dense"
#include "mcsi/random.h"
#include "mcsi/sideinfo.h"
#include "mcsi/spectral.h"
#include "mcsi/trace.h"

namespace mcsi {

struct TransductiveParams {
  double eta = 1.0;
  double gamma = 1.0;
  double d_hat = 1.0;
  bool non_conservative = false;
  int m = 0;
  int n = 0;

  // Throws std::invalid_argument unless eta > 0, gamma in (0, 1],
  // d_hat >= 1 and m + n >= 3.
  void Validate() const;
  double Kappa() const;
  // Margin below which an update happens: gamma if non-conservative else 0.
  double UpdateThreshold() const { return non_conservative ? gamma : 0.0; }
};

// How the eigendecomposition of the log-state follows an update.
enum class UpdateMethod {
  kRankOne,  // secular-equation update, periodic full refresh
  kFull,     // fresh eigendecomposition of the accumulated sum
};

struct PredictorOptions {
  UpdateMethod method = UpdateMethod::kRankOne;
  // kRankOne only: recompute from the dense log-state every this many updates.
  int refresh_interval = 500;
};

struct Prediction {
  double ybar = 0.0;
  int yhat = -1;
};

// ybar = quad - 1 for the quadratic form quad = x^T W x. Values within
// roundoff of zero are returned as exactly 0 so that a zero margin is judged
// the same way however W was factored.
inline constexpr double kMarginZeroTolerance = 1e-12;
inline double MarginFromQuadratic(double quad) {
  const double ybar = quad - 1.0;
  return std::abs(ybar) <= kMarginZeroTolerance * (1.0 + std::abs(quad)) ? 0.0 : ybar;
}

// Sign convention: +1 iff ybar - y_rand > 0, ties go to -1.
inline int SignPrediction(double ybar, double y_rand) { return ybar - y_rand > 0 ? 1 : -1; }

// True iff y * ybar < threshold (strict).
inline bool ShouldUpdate(int y, double ybar, double threshold) { return y * ybar < threshold; }

struct UpdateTerm {
  std::size_t t = 0;
  int y = 0;
  std::size_t i = 0;
  std::size_t j = 0;
};

class TransductivePredictor {
 public:
  TransductivePredictor(const TransductiveParams& params, SideEmbedding rows,
                        SideEmbedding cols, PredictorOptions options = {});

  const TransductiveParams& params() const { return params_; }
  const std::vector<UpdateTerm>& terms() const { return terms_; }

  // Concatenated embedding of entry (i, j); squared norm <= 1.
  Eigen::VectorXd Embed(std::size_t i, std::size_t j) const;

  Prediction Predict(std::size_t i, std::size_t j, double y_rand);

  // Applies the update rule for trial t. Returns whether an update happened.
  bool Update(std::size_t t, std::size_t i, std::size_t j, int y, double ybar);

  // Dense W from the current state.
  Eigen::MatrixXd Materialize();
  // Dense W rebuilt from kappa and the term list with one eigendecomposition.
  Eigen::MatrixXd Replay() const;

 private:
  void Refresh();

  TransductiveParams params_;
  SideEmbedding rows_;
  SideEmbedding cols_;
  PredictorOptions options_;
  std::vector<UpdateTerm> terms_;
  Eigen::MatrixXd log_state_;
  SpectralDecomposition dec_;
  bool dirty_ = false;
  int since_refresh_ = 0;
};

// Runs the online protocol over `trials`. One threshold Y_t ~ U(-gamma, gamma)
// is drawn per trial in both modes and multiplied by the non-conservative
// flag, so seeds line up across modes. Throws on labels outside {-1, +1}.
Trace RunTransductive(const std::vector<Trial>& trials, TransductivePredictor& predictor,
                      Rng& rng);

// sqrt(D_hat log(m + n) / (2 T)).
double DeriveEta(double d_hat, int m, int n, std::size_t horizon);

// 3.6 D_hat / gamma^2 log(m + n).
double RealizableMistakeBound(double d_hat, double gamma, int m, int n);

// 4 sqrt(2 D_hat / gamma^2 log(m + n) T).
double RegretBound(double d_hat, double gamma, int m, int n, std::size_t horizon);

}  // namespace mcsi

#endif  // MCSI_TRANSDUCTIVE_H_
