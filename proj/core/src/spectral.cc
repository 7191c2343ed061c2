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

#include "mcsi/spectral.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "Eigen/Eigenvalues"

extern "C" {
// i-th eigenvalue of diag(d) + rho z z^T, d strictly increasing, |z| = 1.
void dlaed4_(const int* n, const int* i, const double* d, const double* z,
             double* delta, const double* rho, double* dlam, int* info);
}

namespace mcsi {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void RequireFinite(const Eigen::MatrixXd& a, const char* what) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

// Flips eigenvector signs so that the first component with magnitude above
// 1e-12 is positive.
void NormalizeSigns(Eigen::MatrixXd& v) {
  for (int c = 0; c < v.cols(); ++c) {
    for (int r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) > 1e-12) {
        if (v(r, c) < 0) v.col(c) *= -1.0;
        break;
      }
    }
  }
}

// Absolute cutoff tol * max|lambda|. Throws if the spectrum is not PSD
// within that cutoff.
double PsdCutoff(const SpectralDecomposition& dec, std::optional<double> tol,
                 const char* what) {
  const double rel = tol.value_or(DefaultRankTolerance(dec.dim()));
  if (rel < 0) throw std::invalid_argument("rank tolerance must be >= 0");
  const double scale = dec.dim() == 0 ? 0.0 : dec.eigenvalues.cwiseAbs().maxCoeff();
  const double cutoff = rel * scale;
  if (dec.dim() > 0 && dec.eigenvalues(0) < -cutoff) {
    throw std::domain_error(std::string(what) + ": matrix is not PSD (eigenvalue " +
                            std::to_string(dec.eigenvalues(0)) + ")");
  }
  return cutoff;
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("SymMatrix: matrix is not square");
  }
  if (a.rows() < 1) throw std::invalid_argument("SymMatrix: dim must be >= 1");
  m_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::Identity(int dim) {
  return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix SymMatrix::Zero(int dim) {
  return SymMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

SymMatrix SymMatrix::Diagonal(const Eigen::VectorXd& d) {
  return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
}

double SymMatrix::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

double SpectralDecomposition::lambda_max() const {
  return eigenvalues(eigenvalues.size() - 1);
}

Eigen::MatrixXd SpectralDecomposition::Reconstruct() const {
  return Apply([](double x) { return x; });
}

SpectralDecomposition EigSym(const SymMatrix& a) {
  RequireFinite(a.matrix(), "EigSym");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("EigSym: eigensolver did not converge");
  }
  SpectralDecomposition dec{solver.eigenvalues(), solver.eigenvectors()};
  NormalizeSigns(dec.eigenvectors);
  return dec;
}

double DefaultRankTolerance(int dim) { return dim * std::ldexp(1.0, -52); }

SymMatrix PinvPsd(const SymMatrix& a, std::optional<double> tol) {
  const SpectralDecomposition dec = EigSym(a);
  const double cutoff = PsdCutoff(dec, tol, "PinvPsd");
  return SymMatrix(dec.Apply([cutoff](double x) { return x > cutoff ? 1.0 / x : 0.0; }));
}

SymMatrix SqrtPsd(const SymMatrix& a, std::optional<double> tol) {
  const SpectralDecomposition dec = EigSym(a);
  PsdCutoff(dec, tol, "SqrtPsd");
  return SymMatrix(dec.Apply([](double x) { return x > 0 ? std::sqrt(x) : 0.0; }));
}

SymMatrix SqrtPinvPsd(const SymMatrix& a, std::optional<double> tol) {
  const SpectralDecomposition dec = EigSym(a);
  const double cutoff = PsdCutoff(dec, tol, "SqrtPinvPsd");
  return SymMatrix(
      dec.Apply([cutoff](double x) { return x > cutoff ? 1.0 / std::sqrt(x) : 0.0; }));
}

SymMatrix ExpSym(const SymMatrix& a) {
  return SymMatrix(EigSym(a).Apply([](double x) { return std::exp(x); }));
}

SymMatrix LogSpd(const SymMatrix& a) {
  const SpectralDecomposition dec = EigSym(a);
  if (dec.eigenvalues(0) <= 0) {
    throw std::domain_error("LogSpd: matrix is not strictly positive definite");
  }
  return SymMatrix(dec.Apply([](double x) { return std::log(x); }));
}

double QuadForm(const SymMatrix& a, const Eigen::VectorXd& u) {
  if (u.size() != a.dim()) {
    throw std::invalid_argument("QuadForm: dimension mismatch");
  }
  return u.dot(a.matrix() * u);
}

void RankOneUpdate(SpectralDecomposition& dec, double rho, const Eigen::VectorXd& x) {
  const int d = dec.dim();
  if (x.size() != d) throw std::invalid_argument("RankOneUpdate: dimension mismatch");
  if (!x.allFinite() || !std::isfinite(rho)) {
    throw std::invalid_argument("RankOneUpdate: non-finite input");
  }
  if (rho == 0.0) return;
  const Eigen::VectorXd z_full = dec.eigenvectors.transpose() * x;
  const double znorm = z_full.norm();
  if (znorm == 0.0) return;

  // Solve diag(dv) + r zv zv^T with r > 0 and dv ascending. For rho < 0 the
  // problem is negated, which reverses the order of the eigenvalues.
  const double sgn = rho > 0 ? 1.0 : -1.0;
  std::vector<int> col(d);
  std::iota(col.begin(), col.end(), 0);
  if (sgn < 0) std::reverse(col.begin(), col.end());

  Eigen::VectorXd dv(d), zv(d);
  for (int p = 0; p < d; ++p) {
    dv(p) = sgn * dec.eigenvalues(col[p]);
    zv(p) = z_full(col[p]) / znorm;
  }
  const double r = std::abs(rho) * znorm * znorm;
  Eigen::MatrixXd& v = dec.eigenvectors;

  const double tol = 8.0 * kEps * std::max(dv.cwiseAbs().maxCoeff(), r);
  std::vector<char> deflated(d, 0);
  for (int p = 0; p < d; ++p) {
    if (r * std::abs(zv(p)) <= tol) {
      deflated[p] = 1;
      zv(p) = 0.0;
    }
  }

  // Close eigenvalue pairs: rotate the updating vector onto the later index.
  int prev = -1;
  for (int p = 0; p < d; ++p) {
    if (deflated[p]) continue;
    if (prev < 0) {
      prev = p;
      continue;
    }
    const double tau = std::hypot(zv(prev), zv(p));
    const double a = zv(p) / tau;
    const double b = zv(prev) / tau;
    if (std::abs(a * b * (dv(p) - dv(prev))) <= tol) {
      const Eigen::VectorXd vp = v.col(col[prev]);
      const Eigen::VectorXd vj = v.col(col[p]);
      v.col(col[prev]) = a * vp - b * vj;
      v.col(col[p]) = b * vp + a * vj;
      const double dp = dv(prev);
      const double dj = dv(p);
      dv(prev) = a * a * dp + b * b * dj;
      dv(p) = b * b * dp + a * a * dj;
      zv(prev) = 0.0;
      zv(p) = tau;
      deflated[prev] = 1;
    }
    prev = p;
  }

  std::vector<int> kept;
  for (int p = 0; p < d; ++p) {
    if (!deflated[p]) kept.push_back(p);
  }
  Eigen::VectorXd new_lambda(d);
  for (int p = 0; p < d; ++p) new_lambda(col[p]) = sgn * dv(p);

  const int k = static_cast<int>(kept.size());
  if (k > 0) {
    Eigen::VectorXd dk(k), zk(k);
    for (int i = 0; i < k; ++i) {
      dk(i) = dv(kept[i]);
      zk(i) = zv(kept[i]);
    }
    const double nz = zk.norm();
    zk /= nz;
    const double rk = r * nz * nz;

    // delta(i, j) = dk(i) - lambda_j.
    Eigen::MatrixXd delta(k, k);
    Eigen::VectorXd lam(k);
    for (int j = 0; j < k; ++j) {
      const int jj = j + 1;
      int info = 0;
      dlaed4_(&k, &jj, dk.data(), zk.data(), delta.col(j).data(), &rk, &lam(j), &info);
      if (info != 0) {
        throw std::runtime_error("RankOneUpdate: secular equation solver failed (info=" +
                                 std::to_string(info) + ")");
      }
    }

    // dlaed4 returns d - lambda only for k >= 3. For k = 1 it returns 1 and
    // for k = 2 the normalized eigenvectors themselves.
    Eigen::MatrixXd u(k, k);
    if (k == 1) {
      u(0, 0) = 1.0;
    } else if (k == 2) {
      u = delta;
    } else {
      // Recompute the updating vector from the computed eigenvalues so that
      // the eigenvectors below are numerically orthogonal.
      Eigen::VectorXd w = delta.diagonal();
      for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) {
          if (i != j) w(i) *= delta(i, j) / (dk(i) - dk(j));
        }
      }
      Eigen::VectorXd zhat(k);
      for (int i = 0; i < k; ++i) {
        zhat(i) = std::copysign(std::sqrt(std::max(-w(i), 0.0)), zk(i));
      }
      for (int j = 0; j < k; ++j) {
        u.col(j) = zhat.cwiseQuotient(delta.col(j));
        u.col(j).normalize();
      }
    }

    Eigen::MatrixXd vk(d, k);
    for (int i = 0; i < k; ++i) vk.col(i) = v.col(col[kept[i]]);
    const Eigen::MatrixXd vk_new = vk * u;
    for (int i = 0; i < k; ++i) {
      v.col(col[kept[i]]) = vk_new.col(i);
      new_lambda(col[kept[i]]) = sgn * lam(i);
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return new_lambda(a) < new_lambda(b); });
  Eigen::MatrixXd sorted_v(d, d);
  Eigen::VectorXd sorted_lambda(d);
  for (int i = 0; i < d; ++i) {
    sorted_v.col(i) = v.col(order[i]);
    sorted_lambda(i) = new_lambda(order[i]);
  }
  dec.eigenvectors = std::move(sorted_v);
  dec.eigenvalues = std::move(sorted_lambda);
}

}  // namespace mcsi
