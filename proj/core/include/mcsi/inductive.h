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

// Kernelized (inductive) variant of the MEG predictor. Side information is a
// kernel over row and column identities; the Gram matrices grow over the
// identities seen on update trials and the log-state is replayed from the
// update log on every trial.

#ifndef MCSI_INDUCTIVE_H_
#define MCSI_INDUCTIVE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "Eigen/Dense"
#include "mcsi/random.h"
#include "mcsi/sideinfo.h"
#include "mcsi/trace.h"
#include "mcsi/transductive.h"

namespace mcsi {

struct InductiveOptions {
  // Defaults to IdentityKernel::DomainRadius() of each side.
  std::optional<double> r_tilde_row;
  std::optional<double> r_tilde_col;
  // Sum the coefficients of repeated (i, j) updates before replay.
  bool collapse_terms = false;
};

class InductivePredictor {
 public:
  // params.m and params.n are the sizes of the identity universes.
  InductivePredictor(const TransductiveParams& params, IdentityKernel rows, IdentityKernel cols,
                     InductiveOptions options = {});

  const TransductiveParams& params() const { return params_; }
  double r_tilde_row() const { return r_tilde_row_; }
  double r_tilde_col() const { return r_tilde_col_; }
  const std::vector<std::size_t>& row_registry() const { return row_registry_; }
  const std::vector<std::size_t>& col_registry() const { return col_registry_; }
  const std::vector<UpdateTerm>& update_log() const { return update_log_; }

  // Prediction for trial (i, j) from Grams over registry plus {i}, {j}.
  Prediction Step(std::size_t i, std::size_t j, double y_rand);

  // Applies the update rule to the pending trial from Step().
  bool Commit(std::size_t t, int y, double ybar);

  // W over the current registries plus the pending identities.
  Eigen::MatrixXd MaterializePending() const;

 private:
  struct Frame {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    Eigen::MatrixXd row_factor;
    Eigen::MatrixXd col_factor;
  };

  Frame BuildFrame(std::size_t i, std::size_t j) const;
  Eigen::VectorXd EmbedIn(const Frame& f, std::size_t i, std::size_t j) const;
  Eigen::MatrixXd LogState(const Frame& f) const;

  TransductiveParams params_;
  IdentityKernel rows_;
  IdentityKernel cols_;
  InductiveOptions options_;
  double r_tilde_row_;
  double r_tilde_col_;
  std::vector<std::size_t> row_registry_;
  std::vector<std::size_t> col_registry_;
  std::vector<UpdateTerm> update_log_;
  std::optional<std::pair<std::size_t, std::size_t>> pending_;
};

// Runs the inductive protocol; same Y_t stream semantics as RunTransductive.
// Records carry registry sizes after each trial.
Trace RunInductive(const std::vector<Trial>& trials, InductivePredictor& predictor, Rng& rng);

struct EquivalenceResult {
  double max_gap = 0.0;
  std::vector<double> gaps;
  Trace transductive;
  Trace inductive;
};

// Runs both algorithms on the same trials and Y_t stream. The transductive
// side matrices are the pseudoinverses of the full Grams and R-tilde is set
// to the resulting squared radii.
EquivalenceResult EquivalenceCheck(const std::vector<Trial>& trials,
                                   const TransductiveParams& params, const IdentityKernel& rows,
                                   const IdentityKernel& cols, std::uint64_t seed);

}  // namespace mcsi

#endif  // MCSI_INDUCTIVE_H_
