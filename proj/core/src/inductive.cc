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

#include "mcsi/inductive.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace mcsi {
namespace {

std::size_t PositionOf(const std::vector<std::size_t>& ids, std::size_t id) {
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
}

std::vector<std::size_t> WithIdentity(std::vector<std::size_t> ids, std::size_t id) {
  if (PositionOf(ids, id) == ids.size()) ids.push_back(id);
  return ids;
}

Eigen::MatrixXd GramFactor(const IdentityKernel& kernel, const std::vector<std::size_t>& ids,
                           double r_tilde) {
  return SqrtPsd(kernel.Gram(ids)).matrix() / std::sqrt(2.0 * r_tilde);
}

}  // namespace

InductivePredictor::InductivePredictor(const TransductiveParams& params, IdentityKernel rows,
                                       IdentityKernel cols, InductiveOptions options)
    : params_(params), rows_(std::move(rows)), cols_(std::move(cols)), options_(options) {
  params_.Validate();
  if (rows_.size() != static_cast<std::size_t>(params_.m) ||
      cols_.size() != static_cast<std::size_t>(params_.n)) {
    throw std::invalid_argument("InductivePredictor: kernel universes do not match m, n");
  }
  r_tilde_row_ = options_.r_tilde_row.value_or(rows_.DomainRadius());
  r_tilde_col_ = options_.r_tilde_col.value_or(cols_.DomainRadius());
  if (!(r_tilde_row_ > 0) || !(r_tilde_col_ > 0)) {
    throw std::invalid_argument("InductivePredictor: R-tilde values must be positive");
  }
}

InductivePredictor::Frame InductivePredictor::BuildFrame(std::size_t i, std::size_t j) const {
  if (i >= rows_.size() || j >= cols_.size()) {
    throw std::out_of_range("InductivePredictor: unknown identity (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
  }
  Frame f;
  f.rows = WithIdentity(row_registry_, i);
  f.cols = WithIdentity(col_registry_, j);
  f.row_factor = GramFactor(rows_, f.rows, r_tilde_row_);
  f.col_factor = GramFactor(cols_, f.cols, r_tilde_col_);
  return f;
}

Eigen::VectorXd InductivePredictor::EmbedIn(const Frame& f, std::size_t i, std::size_t j) const {
  const Eigen::Index a = static_cast<Eigen::Index>(f.rows.size());
  const Eigen::Index b = static_cast<Eigen::Index>(f.cols.size());
  Eigen::VectorXd x(a + b);
  x.head(a) = f.row_factor.col(static_cast<Eigen::Index>(PositionOf(f.rows, i)));
  x.tail(b) = f.col_factor.col(static_cast<Eigen::Index>(PositionOf(f.cols, j)));
  return x;
}

Eigen::MatrixXd InductivePredictor::LogState(const Frame& f) const {
  const Eigen::Index q = static_cast<Eigen::Index>(f.rows.size() + f.cols.size());
  Eigen::MatrixXd s = params_.Kappa() * Eigen::MatrixXd::Identity(q, q);
  if (options_.collapse_terms) {
    std::map<std::pair<std::size_t, std::size_t>, double> coeff;
    for (const UpdateTerm& u : update_log_) coeff[{u.i, u.j}] += params_.eta * u.y;
    for (const auto& [ij, c] : coeff) {
      const Eigen::VectorXd x = EmbedIn(f, ij.first, ij.second);
      s.noalias() += c * x * x.transpose();
    }
  } else {
    for (const UpdateTerm& u : update_log_) {
      const Eigen::VectorXd x = EmbedIn(f, u.i, u.j);
      s.noalias() += (params_.eta * u.y) * x * x.transpose();
    }
  }
  return s;
}

Prediction InductivePredictor::Step(std::size_t i, std::size_t j, double y_rand) {
  const Frame f = BuildFrame(i, j);
  const Eigen::VectorXd x = EmbedIn(f, i, j);
  const SpectralDecomposition dec = EigSym(SymMatrix(LogState(f)));
  const Eigen::VectorXd z = dec.eigenvectors.transpose() * x;
  Prediction p;
  p.ybar = MarginFromQuadratic(z.cwiseAbs2().dot(dec.eigenvalues.array().exp().matrix()));
  p.yhat = SignPrediction(p.ybar, y_rand);
  pending_ = {i, j};
  return p;
}

bool InductivePredictor::Commit(std::size_t t, int y, double ybar) {
  if (!pending_) throw std::logic_error("InductivePredictor: Commit without Step");
  if (y != 1 && y != -1) throw std::invalid_argument("Commit: label must be -1 or +1");
  const auto [i, j] = *pending_;
  pending_.reset();
  if (!ShouldUpdate(y, ybar, params_.UpdateThreshold())) return false;
  update_log_.push_back({t, y, i, j});
  row_registry_ = WithIdentity(std::move(row_registry_), i);
  col_registry_ = WithIdentity(std::move(col_registry_), j);
  return true;
}

Eigen::MatrixXd InductivePredictor::MaterializePending() const {
  if (!pending_) throw std::logic_error("InductivePredictor: no pending trial");
  const Frame f = BuildFrame(pending_->first, pending_->second);
  return ExpSym(SymMatrix(LogState(f))).matrix();
}

Trace RunInductive(const std::vector<Trial>& trials, InductivePredictor& predictor, Rng& rng) {
  const TransductiveParams& params = predictor.params();
  Trace trace;
  trace.has_registry = true;
  trace.records.reserve(trials.size());
  std::size_t t = 0;
  for (const Trial& trial : trials) {
    ++t;
    if (trial.y != 1 && trial.y != -1) {
      throw std::invalid_argument("RunInductive: label at trial " + std::to_string(t) +
                                  " is not -1 or +1");
    }
    const double draw = rng.Uniform(-params.gamma, params.gamma);
    const double y_rand = params.non_conservative ? draw : 0.0;
    const Prediction p = predictor.Step(trial.i, trial.j, y_rand);
    TrialRecord r;
    r.t = t;
    r.i = trial.i;
    r.j = trial.j;
    r.ybar = p.ybar;
    r.y_rand = y_rand;
    r.yhat = p.yhat;
    r.y = trial.y;
    r.mistake = p.yhat != trial.y;
    r.updated = predictor.Commit(t, trial.y, p.ybar);
    r.registry_rows = predictor.row_registry().size();
    r.registry_cols = predictor.col_registry().size();
    trace.Append(r);
  }
  return trace;
}

EquivalenceResult EquivalenceCheck(const std::vector<Trial>& trials,
                                   const TransductiveParams& params, const IdentityKernel& rows,
                                   const IdentityKernel& cols, std::uint64_t seed) {
  std::vector<std::size_t> all_rows(rows.size());
  std::vector<std::size_t> all_cols(cols.size());
  for (std::size_t a = 0; a < all_rows.size(); ++a) all_rows[a] = a;
  for (std::size_t b = 0; b < all_cols.size(); ++b) all_cols[b] = b;
  const SymMatrix m_side = PinvPsd(rows.Gram(all_rows));
  const SymMatrix n_side = PinvPsd(cols.Gram(all_cols));
  SideEmbedding row_emb = EmbeddingFromPd(m_side);
  SideEmbedding col_emb = EmbeddingFromPd(n_side);

  InductiveOptions options;
  options.r_tilde_row = row_emb.squared_radius();
  options.r_tilde_col = col_emb.squared_radius();

  PredictorOptions full;
  full.method = UpdateMethod::kFull;
  TransductivePredictor trans(params, std::move(row_emb), std::move(col_emb), full);
  InductivePredictor ind(params, rows, cols, options);

  EquivalenceResult out;
  Rng rng_t(seed);
  Rng rng_i(seed);
  out.transductive = RunTransductive(trials, trans, rng_t);
  out.inductive = RunInductive(trials, ind, rng_i);
  out.gaps.reserve(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const double gap =
        std::abs(out.transductive.records[t].ybar - out.inductive.records[t].ybar);
    out.gaps.push_back(gap);
    out.max_gap = std::max(out.max_gap, gap);
  }
  return out;
}

}  // namespace mcsi
