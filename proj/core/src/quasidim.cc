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

#include "mcsi/quasidim.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "mcsi/sideinfo.h"

namespace mcsi {
namespace {

void CheckLabels(const std::vector<int>& labels, int classes, const char* what) {
  std::vector<int> count(classes, 0);
  for (int c : labels) {
    if (c < 0 || c >= classes) {
      throw std::invalid_argument(std::string(what) + ": class label out of range");
    }
    ++count[c];
  }
  for (int c = 0; c < classes; ++c) {
    if (count[c] == 0) {
      throw std::invalid_argument(std::string(what) + ": class " + std::to_string(c) +
                                  " is empty");
    }
  }
}

double TraceQuad(const Eigen::MatrixXd& r, const SymMatrix& m) {
  if (r.rows() != m.dim()) throw std::invalid_argument("trace term: dimension mismatch");
  return (r.transpose() * m.matrix() * r).trace();
}

}  // namespace

BlockDecomposition::BlockDecomposition(std::vector<int> row_class, std::vector<int> col_class,
                                       Eigen::MatrixXi u_star)
    : row_class_(std::move(row_class)),
      col_class_(std::move(col_class)),
      u_star_(std::move(u_star)) {
  if (u_star_.rows() < 1 || u_star_.cols() < 1) {
    throw std::invalid_argument("BlockDecomposition: empty U*");
  }
  if ((u_star_.array().abs() != 1).any()) {
    throw std::invalid_argument("BlockDecomposition: U* entries must be -1 or +1");
  }
  CheckLabels(row_class_, k(), "BlockDecomposition rows");
  CheckLabels(col_class_, l(), "BlockDecomposition cols");
}

Eigen::MatrixXd OneHot(const std::vector<int>& labels, int k) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) throw std::invalid_argument("OneHot: label out of range");
    r(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return r;
}

Eigen::MatrixXd BlockDecomposition::RowExpansion() const { return OneHot(row_class_, k()); }
Eigen::MatrixXd BlockDecomposition::ColExpansion() const { return OneHot(col_class_, l()); }

Eigen::MatrixXi BlockDecomposition::Matrix() const {
  Eigen::MatrixXi u(m(), n());
  for (int i = 0; i < m(); ++i) {
    for (int j = 0; j < n(); ++j) u(i, j) = u_star_(row_class_[i], col_class_[j]);
  }
  return u;
}

void FactorPair::Validate() const {
  if (p_hat.cols() != q_hat.cols()) {
    throw std::invalid_argument("FactorPair: P and Q must have the same width");
  }
  for (const Eigen::MatrixXd* f : {&p_hat, &q_hat}) {
    for (Eigen::Index i = 0; i < f->rows(); ++i) {
      if (std::abs(f->row(i).norm() - 1.0) > 1e-10) {
        throw std::invalid_argument("FactorPair: row " + std::to_string(i) +
                                    " is not unit-normalized");
      }
    }
  }
}

double QuasiDimFactored(const FactorPair& p, const SymMatrix& m_side, const SymMatrix& n_side) {
  p.Validate();
  return SquaredRadius(m_side) * TraceQuad(p.p_hat, m_side) +
         SquaredRadius(n_side) * TraceQuad(p.q_hat, n_side);
}

QuasiDimBound DqdUpperPdLaplacian(const Eigen::MatrixXd& row_onehot,
                                  const Eigen::MatrixXd& col_onehot, const SymMatrix& m_pdlap,
                                  const SymMatrix& n_pdlap, double constant) {
  QuasiDimBound b;
  b.row_trace = TraceQuad(row_onehot, m_pdlap);
  b.row_radius = SquaredRadius(m_pdlap);
  b.col_trace = TraceQuad(col_onehot, n_pdlap);
  b.col_radius = SquaredRadius(n_pdlap);
  b.constant = constant;
  b.value = 2.0 * b.row_trace * b.row_radius + 2.0 * b.col_trace * b.col_radius + constant;
  return b;
}

QuasiDimBound DqdUpperPdLaplacian(const BlockDecomposition& dec, const SymMatrix& m_pdlap,
                                  const SymMatrix& n_pdlap) {
  return DqdUpperPdLaplacian(dec.RowExpansion(), dec.ColExpansion(), m_pdlap, n_pdlap,
                             2.0 * dec.k() + 2.0 * dec.l());
}

QuasiDimBound DqdUpperPd(const BlockDecomposition& dec, const SymMatrix& m_side,
                         const SymMatrix& n_side) {
  QuasiDimBound b;
  b.row_trace = TraceQuad(dec.RowExpansion(), m_side);
  b.row_radius = SquaredRadius(m_side);
  b.col_trace = TraceQuad(dec.ColExpansion(), n_side);
  b.col_radius = SquaredRadius(n_side);
  b.value = dec.k() * b.row_trace * b.row_radius + dec.l() * b.col_trace * b.col_radius;
  return b;
}

double MaxNormBoundBiclustered(int k, int l) {
  if (k < 1 || l < 1) throw std::invalid_argument("MaxNormBoundBiclustered: k, l >= 1");
  return std::sqrt(static_cast<double>(std::min(k, l)));
}

CommunityFactors MakeCommunityFactors(int k) {
  if (k < 1) throw std::invalid_argument("MakeCommunityFactors: k >= 1");
  CommunityFactors f{Eigen::MatrixXd::Zero(k, k + 1), Eigen::MatrixXd::Zero(k, k + 1)};
  for (int i = 0; i < k; ++i) {
    f.p(i, i) = std::sqrt(2.0);
    f.q(i, i) = std::sqrt(2.0);
    f.p(i, k) = 1.0;
    f.q(i, k) = -1.0;
  }
  return f;
}

FactorPair BiclusteredFactors(const BlockDecomposition& dec) {
  const Eigen::MatrixXd r = dec.RowExpansion();
  const Eigen::MatrixXd c = dec.ColExpansion();
  const Eigen::MatrixXd u_star = dec.u_star().cast<double>();
  if (dec.k() <= dec.l()) {
    return {r, c * u_star.transpose() / std::sqrt(static_cast<double>(dec.k()))};
  }
  return {r * u_star / std::sqrt(static_cast<double>(dec.l())), c};
}

Eigen::MatrixXd ComparatorFactor(const FactorPair& p, const SymMatrix& m_side,
                                 const SymMatrix& n_side) {
  p.Validate();
  const Eigen::Index d = p.p_hat.cols();
  Eigen::MatrixXd z(m_side.dim() + n_side.dim(), d);
  z.topRows(m_side.dim()) =
      std::sqrt(SquaredRadius(m_side)) * SqrtPsd(m_side).matrix() * p.p_hat;
  z.bottomRows(n_side.dim()) =
      std::sqrt(SquaredRadius(n_side)) * SqrtPsd(n_side).matrix() * p.q_hat;
  return z;
}

TraceBoundCheck MinKernelTraceBoundCheck(const Eigen::MatrixXd& row_onehot,
                                         const SymMatrix& gram, double delta_star, int d) {
  if (row_onehot.rows() != gram.dim()) {
    throw std::invalid_argument("MinKernelTraceBoundCheck: dimension mismatch");
  }
  if (!(delta_star > 0) || d < 1) {
    throw std::invalid_argument("MinKernelTraceBoundCheck: need delta* > 0 and d >= 1");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram.matrix());
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      pivots.minCoeff() <= gram.dim() * std::numeric_limits<double>::epsilon() *
                               pivots.maxCoeff() ||
      ldlt.rcond() < std::numeric_limits<double>::epsilon()) {
    throw std::domain_error("MinKernelTraceBoundCheck: Gram matrix is singular");
  }
  TraceBoundCheck out;
  out.lhs = (row_onehot.transpose() * ldlt.solve(row_onehot)).trace();
  out.bound = row_onehot.cols() * std::pow(4.0 / delta_star, d);
  return out;
}

nlohmann::json QuasiDimReport(double d_factored, const QuasiDimBound& d_circ, double gamma,
                              double maxnorm_bound) {
  return {
      {"d_factored", d_factored},
      {"d_circ", d_circ.value},
      {"gamma", gamma},
      {"maxnorm_bound", maxnorm_bound},
      {"terms",
       {{"row_trace", d_circ.row_trace},
        {"row_radius", d_circ.row_radius},
        {"col_trace", d_circ.col_trace},
        {"col_radius", d_circ.col_radius},
        {"constant", d_circ.constant}}},
  };
}

}  // namespace mcsi
