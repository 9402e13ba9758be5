/*
 * Copyright 2026 The cvrealign Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cvrealign/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "cvrealign/error.hpp"

namespace cvr {

SymmetricCCM SymmetricCCM::tmsv(double lambda) {
  if (!(std::abs(lambda) < 1.0)) throw Error(ErrorCode::DomainError, "squeezing lambda must lie in (-1, 1)");
  const double d = 1.0 - lambda * lambda;
  return {1.0 / d - 0.5, -lambda / d, 0.0};
}

SigmaBasisMatrix gamma_prime(const SymmetricCCM& ccm) { return {0.0, ccm.c1, ccm.b0 + 0.5, ccm.c2}; }

KVector k_coefficients(const SymmetricCCM& ccm) {
  const SigmaBasisMatrix gp = gamma_prime(ccm);
  if (gp.min_abs_eigenvalue() < kSingularTol)
    throw Error(ErrorCode::SingularMatrix, "gamma' has a zero eigenvalue; K-coefficients undefined");
  const double b = ccm.b0 + 0.5;
  const double c1 = ccm.c1;
  const double c2 = ccm.c2;
  const double d2 = gp.determinant();
  KVector k;
  k.delta_sq = d2;
  k.k1 = 2.0 * b * c1 * c2 / d2;
  k.k2 = c1 * (c1 * c1 - c2 * c2 - b * b) / d2;
  k.k3 = b * (b * b - c1 * c1 - c2 * c2) / d2;
  k.k4 = c2 * (c2 * c2 - c1 * c1 - b * b) / d2;
  return k;
}

SigmaBasisMatrix beta(const SymmetricCCM& ccm) { return k_coefficients(ccm).matrix().sigma3_conjugated(); }

double smallest_symplectic_eigenvalue(const SymmetricCCM& ccm, bool partial_transpose) {
  const double a = ccm.b0;
  const double kx = ccm.c1 + ccm.c2;
  const double kp = partial_transpose ? -(ccm.c2 - ccm.c1) : ccm.c2 - ccm.c1;
  if (a <= std::abs(kx) || a <= std::abs(kp)) return 0.0;
  const double seralian = 2.0 * a * a + 2.0 * kx * kp;
  const double det = (a * a - kx * kx) * (a * a - kp * kp);
  const double disc = std::max(0.0, seralian * seralian - 4.0 * det);
  const double nu_sq = 0.5 * (seralian - std::sqrt(disc));
  return std::sqrt(std::max(0.0, nu_sq));
}

bool physicality_check(const SymmetricCCM& ccm) {
  if (ccm.b0 < 0.5) return false;
  return smallest_symplectic_eigenvalue(ccm, false) >= 0.5 - kSingularTol;
}

bool simon_ppt_check(const SymmetricCCM& ccm) {
  return smallest_symplectic_eigenvalue(ccm, true) >= 0.5 - kSingularTol;
}

SymmetricCCM mixture_ccm(double p, const SymmetricCCM& a, const SymmetricCCM& b) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::DomainError, "mixture probability must lie in [0, 1]");
  return {p * a.b0 + (1.0 - p) * b.b0, p * a.c1 + (1.0 - p) * b.c1, p * a.c2 + (1.0 - p) * b.c2};
}

Eigen::Matrix4d standard_form_ccm(double b1, double b2, double c1, double c2) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 2) = m(2, 0) = b1;
  m(1, 3) = m(3, 1) = b2;
  m(0, 1) = m(1, 0) = c1;
  m(2, 3) = m(3, 2) = c1;
  m(0, 3) = m(3, 0) = c2;
  m(1, 2) = m(2, 1) = c2;
  return m;
}

Eigen::Matrix4d quadrature_covariance(const Eigen::Matrix4d& ccm) {
  using C = std::complex<double>;
  const double r = 1.0 / std::sqrt(2.0);
  const C i{0.0, 1.0};
  // (a1†, a2†, a1, a2) = T (x1, x2, p1, p2)
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  for (int j = 0; j < 2; ++j) {
    t(j, j) = r;
    t(j, j + 2) = -i * r;
    t(j + 2, j) = r;
    t(j + 2, j + 2) = i * r;
  }
  const Eigen::Matrix4cd tinv = t.inverse();
  const Eigen::Matrix4cd sigma = tinv * ccm.cast<C>() * tinv.transpose();
  return sigma.real();
}

std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& sigma) {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
  omega.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();
  Eigen::EigenSolver<Eigen::Matrix4d> solver(omega * sigma, false);
  std::array<double, 4> mags{};
  for (int k = 0; k < 4; ++k) mags[k] = std::abs(solver.eigenvalues()[k]);
  std::sort(mags.begin(), mags.end());
  // Eigenvalues come in ±iν pairs.
  return {0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3])};
}

bool is_physical_ccm(const Eigen::Matrix4d& ccm, double tol) {
  const Eigen::Matrix4d sigma = quadrature_covariance(ccm);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(sigma);
  if (es.eigenvalues().minCoeff() <= 0.0) return false;
  return symplectic_eigenvalues(sigma)[0] >= 0.5 - tol;
}

}  // namespace cvr
