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

#include "mcsi/transductive.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace mcsi {

void TransductiveParams::Validate() const {
  if (!(eta > 0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be > 0");
  if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("gamma must be in (0, 1]");
  if (!(d_hat >= 1) || !std::isfinite(d_hat)) throw std::invalid_argument("d_hat must be >= 1");
  if (m < 1 || n < 1 || m + n < 3) throw std::invalid_argument("need m, n >= 1 and m + n >= 3");
}

double TransductiveParams::Kappa() const { return std::log(d_hat / (m + n)); }

TransductivePredictor::TransductivePredictor(const TransductiveParams& params,
                                             SideEmbedding rows, SideEmbedding cols,
                                             PredictorOptions options)
    : params_(params), rows_(std::move(rows)), cols_(std::move(cols)), options_(options) {
  params_.Validate();
  if (rows_.dim() != params_.m || cols_.dim() != params_.n) {
    throw std::invalid_argument("TransductivePredictor: embedding dimensions do not match m, n");
  }
  if (options_.refresh_interval < 1) {
    throw std::invalid_argument("TransductivePredictor: refresh_interval must be >= 1");
  }
  const int q = params_.m + params_.n;
  log_state_ = params_.Kappa() * Eigen::MatrixXd::Identity(q, q);
  dec_.eigenvalues = Eigen::VectorXd::Constant(q, params_.Kappa());
  dec_.eigenvectors = Eigen::MatrixXd::Identity(q, q);
}

Eigen::VectorXd TransductivePredictor::Embed(std::size_t i, std::size_t j) const {
  if (i >= static_cast<std::size_t>(params_.m) || j >= static_cast<std::size_t>(params_.n)) {
    throw std::out_of_range("Embed: index (" + std::to_string(i) + "," + std::to_string(j) +
                            ") out of range");
  }
  Eigen::VectorXd x(params_.m + params_.n);
  x.head(params_.m) = rows_.Column(static_cast<int>(i));
  x.tail(params_.n) = cols_.Column(static_cast<int>(j));
  return x;
}

void TransductivePredictor::Refresh() {
  dec_ = EigSym(SymMatrix(log_state_));
  dirty_ = false;
  since_refresh_ = 0;
}

Prediction TransductivePredictor::Predict(std::size_t i, std::size_t j, double y_rand) {
  const Eigen::VectorXd x = Embed(i, j);
  if (dirty_) Refresh();
  const Eigen::VectorXd z = dec_.eigenvectors.transpose() * x;
  const double quad = z.cwiseAbs2().dot(dec_.eigenvalues.array().exp().matrix());
  Prediction p;
  p.ybar = MarginFromQuadratic(quad);
  p.yhat = SignPrediction(p.ybar, y_rand);
  return p;
}

bool TransductivePredictor::Update(std::size_t t, std::size_t i, std::size_t j, int y,
                                   double ybar) {
  if (y != 1 && y != -1) throw std::invalid_argument("Update: label must be -1 or +1");
  if (!ShouldUpdate(y, ybar, params_.UpdateThreshold())) return false;
  const Eigen::VectorXd x = Embed(i, j);
  const double coeff = params_.eta * y;
  terms_.push_back({t, y, i, j});
  log_state_.noalias() += coeff * x * x.transpose();
  if (options_.method == UpdateMethod::kFull) {
    dirty_ = true;
  } else if (++since_refresh_ >= options_.refresh_interval) {
    dirty_ = true;
  } else if (!dirty_) {
    RankOneUpdate(dec_, coeff, x);
  }
  return true;
}

Eigen::MatrixXd TransductivePredictor::Materialize() {
  if (dirty_) Refresh();
  return dec_.Apply([](double v) { return std::exp(v); });
}

Eigen::MatrixXd TransductivePredictor::Replay() const {
  const int q = params_.m + params_.n;
  Eigen::MatrixXd s = params_.Kappa() * Eigen::MatrixXd::Identity(q, q);
  for (const UpdateTerm& term : terms_) {
    const Eigen::VectorXd x = Embed(term.i, term.j);
    s.noalias() += (params_.eta * term.y) * x * x.transpose();
  }
  return ExpSym(SymMatrix(s)).matrix();
}

Trace RunTransductive(const std::vector<Trial>& trials, TransductivePredictor& predictor,
                      Rng& rng) {
  const TransductiveParams& params = predictor.params();
  Trace trace;
  trace.records.reserve(trials.size());
  std::size_t t = 0;
  for (const Trial& trial : trials) {
    ++t;
    if (trial.y != 1 && trial.y != -1) {
      throw std::invalid_argument("RunTransductive: label at trial " + std::to_string(t) +
                                  " is not -1 or +1");
    }
    const double draw = rng.Uniform(-params.gamma, params.gamma);
    const double y_rand = params.non_conservative ? draw : 0.0;
    const Prediction p = predictor.Predict(trial.i, trial.j, y_rand);
    TrialRecord r;
    r.t = t;
    r.i = trial.i;
    r.j = trial.j;
    r.ybar = p.ybar;
    r.y_rand = y_rand;
    r.yhat = p.yhat;
    r.y = trial.y;
    r.mistake = p.yhat != trial.y;
    r.updated = predictor.Update(t, trial.i, trial.j, trial.y, p.ybar);
    trace.Append(r);
  }
  return trace;
}

double DeriveEta(double d_hat, int m, int n, std::size_t horizon) {
  if (!(d_hat > 0) || m + n < 2 || horizon == 0) {
    throw std::invalid_argument("DeriveEta: arguments must be positive");
  }
  return std::sqrt(d_hat * std::log(static_cast<double>(m + n)) / (2.0 * horizon));
}

double RealizableMistakeBound(double d_hat, double gamma, int m, int n) {
  return 3.6 * d_hat / (gamma * gamma) * std::log(static_cast<double>(m + n));
}

double RegretBound(double d_hat, double gamma, int m, int n, std::size_t horizon) {
  return 4.0 * std::sqrt(2.0 * d_hat / (gamma * gamma) *
                         std::log(static_cast<double>(m + n)) * horizon);
}

}  // namespace mcsi
