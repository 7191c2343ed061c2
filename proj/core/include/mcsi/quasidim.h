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

// Quasi-dimension of a factored comparator and the closed-form upper bounds
// for biclustered matrices.

#ifndef MCSI_QUASIDIM_H_
#define MCSI_QUASIDIM_H_

#include <vector>

#include "Eigen/Dense"
#include "mcsi/spectral.h"
#include "nlohmann/json.hpp"

namespace mcsi {

// U = R U* C^T with R, C block expansion matrices given by class labels.
class BlockDecomposition {
 public:
  BlockDecomposition() = default;
  // Throws std::invalid_argument if a label is out of range, a class is
  // empty, or u_star is not a {-1, +1} k x l matrix.
  BlockDecomposition(std::vector<int> row_class, std::vector<int> col_class,
                     Eigen::MatrixXi u_star);

  int m() const { return static_cast<int>(row_class_.size()); }
  int n() const { return static_cast<int>(col_class_.size()); }
  int k() const { return static_cast<int>(u_star_.rows()); }
  int l() const { return static_cast<int>(u_star_.cols()); }
  const std::vector<int>& row_class() const { return row_class_; }
  const std::vector<int>& col_class() const { return col_class_; }
  const Eigen::MatrixXi& u_star() const { return u_star_; }

  Eigen::MatrixXd RowExpansion() const;  // m x k one-hot
  Eigen::MatrixXd ColExpansion() const;  // n x l one-hot
  Eigen::MatrixXi Matrix() const;        // R U* C^T

 private:
  std::vector<int> row_class_;
  std::vector<int> col_class_;
  Eigen::MatrixXi u_star_;
};

// One-hot m x k matrix of a labelling in [k]^m.
Eigen::MatrixXd OneHot(const std::vector<int>& labels, int k);

// Row-normalized factors: every row has unit Euclidean norm within 1e-10.
struct FactorPair {
  Eigen::MatrixXd p_hat;
  Eigen::MatrixXd q_hat;

  void Validate() const;  // throws std::invalid_argument
};

// R_M tr(P^T M P) + R_N tr(Q^T N Q) for the given factors.
double QuasiDimFactored(const FactorPair& p, const SymMatrix& m_side,
                        const SymMatrix& n_side);

// Term-by-term breakdown of a D-circ bound.
struct QuasiDimBound {
  double row_trace = 0.0;   // tr(R^T M R)
  double row_radius = 0.0;  // R_M
  double col_trace = 0.0;
  double col_radius = 0.0;
  double constant = 0.0;    // additive term
  double value = 0.0;
};

// 2 tr(R^T M R) R_M + 2 tr(C^T N C) R_N + 2k + 2l for PDLaplacian sides.
QuasiDimBound DqdUpperPdLaplacian(const BlockDecomposition& dec, const SymMatrix& m_pdlap,
                                  const SymMatrix& n_pdlap);

// Same trace terms with an explicit additive constant; the experiment
// protocol uses 4k for square (k, k) instances.
QuasiDimBound DqdUpperPdLaplacian(const Eigen::MatrixXd& row_onehot,
                                  const Eigen::MatrixXd& col_onehot,
                                  const SymMatrix& m_pdlap, const SymMatrix& n_pdlap,
                                  double constant);

// k tr(R^T M R) R_M + l tr(C^T N C) R_N for general PD sides.
QuasiDimBound DqdUpperPd(const BlockDecomposition& dec, const SymMatrix& m_side,
                         const SymMatrix& n_side);

// min(sqrt(k), sqrt(l)); gamma = 1 / bound.
double MaxNormBoundBiclustered(int k, int l);

// P, Q in R^{k x (k+1)} with P Q^T = 2I - 11^T and row norms sqrt(3).
struct CommunityFactors {
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;
};
CommunityFactors MakeCommunityFactors(int k);

// Exact row-normalized factorization P_hat Q_hat^T = gamma U of a
// biclustered matrix with gamma = 1 / min(sqrt(k), sqrt(l)).
FactorPair BiclusteredFactors(const BlockDecomposition& dec);

// Z = [sqrt(R_M) sqrt(M) P_hat; sqrt(R_N) sqrt(N) Q_hat]; Z Z^T is the
// comparator whose trace equals QuasiDimFactored.
Eigen::MatrixXd ComparatorFactor(const FactorPair& p, const SymMatrix& m_side,
                                 const SymMatrix& n_side);

struct TraceBoundCheck {
  double lhs = 0.0;    // tr(R^T K^-1 R)
  double bound = 0.0;  // k (4 / delta*)^d
};

// Throws std::domain_error when the Gram matrix is singular.
TraceBoundCheck MinKernelTraceBoundCheck(const Eigen::MatrixXd& row_onehot,
                                         const SymMatrix& gram, double delta_star, int d);

// {d_factored, d_circ, gamma, maxnorm_bound, terms}.
nlohmann::json QuasiDimReport(double d_factored, const QuasiDimBound& d_circ, double gamma,
                              double maxnorm_bound);

}  // namespace mcsi

#endif  // MCSI_QUASIDIM_H_
