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

#ifndef MCSI_SPECTRAL_H_
#define MCSI_SPECTRAL_H_

#include <optional>

#include "Eigen/Dense"

namespace mcsi {

// Dense real symmetric matrix. The stored entries are always exactly
// symmetric: construction replaces A by (A + A^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& a);

  static SymMatrix Identity(int dim);
  static SymMatrix Zero(int dim);
  static SymMatrix Diagonal(const Eigen::VectorXd& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  // Largest absolute entry.
  double max_abs() const;

 private:
  Eigen::MatrixXd m_;
};

// A = V diag(eigenvalues) V^T with eigenvalues ascending and V orthonormal.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double lambda_max() const;

  // V f(Lambda) V^T for a scalar function f.
  template <typename F>
  Eigen::MatrixXd Apply(F&& f) const {
    Eigen::VectorXd fv = eigenvalues.unaryExpr(f);
    Eigen::MatrixXd m = eigenvectors * fv.asDiagonal() * eigenvectors.transpose();
    return 0.5 * (m + m.transpose());
  }

  Eigen::MatrixXd Reconstruct() const;
};

// Throws std::invalid_argument on non-square or non-finite input.
SpectralDecomposition EigSym(const SymMatrix& a);

// Relative rank tolerance used by the PSD functions when none is given:
// dim * 2^-52. Eigenvalues at or below tol * lambda_max count as zero.
double DefaultRankTolerance(int dim);

// Spectral pseudoinverse of a PSD matrix. Throws std::domain_error
// ("not PSD") when an eigenvalue is below -tol * lambda_max.
SymMatrix PinvPsd(const SymMatrix& a, std::optional<double> tol = {});

// Unique PSD square root; negative eigenvalues within tolerance clip to 0.
SymMatrix SqrtPsd(const SymMatrix& a, std::optional<double> tol = {});

// Pseudoinverse followed by square root using a single eigendecomposition.
SymMatrix SqrtPinvPsd(const SymMatrix& a, std::optional<double> tol = {});

SymMatrix ExpSym(const SymMatrix& a);

// Matrix logarithm of a strictly positive definite matrix.
SymMatrix LogSpd(const SymMatrix& a);

// u^T a u. Throws std::invalid_argument on dimension mismatch.
double QuadForm(const SymMatrix& a, const Eigen::VectorXd& u);

// Replaces `dec` (of A) by the decomposition of A + rho * x x^T.
//
// Deflates negligible components and (near-)repeated eigenvalues, solves the
// secular equation for the remaining ones with LAPACK dlaed4, and rebuilds
// eigenvectors from the recomputed updating vector so that they stay
// orthogonal to working precision. Cost is O(d^2) plus one d x K by K x K
// product, K being the number of non-deflated eigenvalues.
void RankOneUpdate(SpectralDecomposition& dec, double rho,
                   const Eigen::VectorXd& x);

}  // namespace mcsi

#endif  // MCSI_SPECTRAL_H_
