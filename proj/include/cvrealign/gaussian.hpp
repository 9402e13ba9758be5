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

#pragma once

#include <array>

#include <Eigen/Core>

#include "cvrealign/sigma_basis.hpp"

namespace cvr {

/**
 * Second moments of a zero-mean symmetric two-mode Gaussian state in
 * standard form, γ = {0, c1, b0, c2} in the σ-tensor basis.
 *
 *  - b0 = <a†a> + 1/2 on either mode
 *  - c1 pairs a1 a2, c2 pairs a1† a2
 *
 * The sign of c1 follows the generating-function convention of
 * gaussian_fock(): a two-mode squeezed vacuum Σ λ^n |nn> with λ > 0 has
 * c1 = -λ/(1-λ²).
 */
struct SymmetricCCM {
  double b0 = 0.5;
  double c1 = 0.0;
  double c2 = 0.0;

  static constexpr SymmetricCCM vacuum() { return {0.5, 0.0, 0.0}; }
  /// Two-mode squeezed vacuum with λ = tanh r; DomainError unless |λ| < 1.
  static SymmetricCCM tmsv(double lambda);
  static SymmetricCCM thermal(double nbar) { return {nbar + 0.5, 0.0, 0.0}; }

  SigmaBasisMatrix matrix() const { return {0.0, c1, b0, c2}; }
  /// Kernel seen by the parity-appended branch: (c1, c2) -> (-c1, -c2).
  SymmetricCCM parity_flipped() const { return {b0, -c1, -c2}; }

  friend bool operator==(const SymmetricCCM&, const SymmetricCCM&) = default;
};

/// Entries of γ'^{-1} = {K1, K2, K3, K4} and Δ² = det γ'.
struct KVector {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  double delta_sq = 1.0;

  SigmaBasisMatrix matrix() const { return {k1, k2, k3, k4}; }
};

/// γ' = γ + σ1⊗I/2 = {0, c1, b0 + 1/2, c2}.
SigmaBasisMatrix gamma_prime(const SymmetricCCM& ccm);

/// Closed-form inverse of γ'. Throws SingularMatrix.
KVector k_coefficients(const SymmetricCCM& ccm);

/// β = (σ3⊗I) γ'^{-1} (σ3⊗I) = {K1, K2, -K3, -K4}.
SigmaBasisMatrix beta(const SymmetricCCM& ccm);

/// Smaller symplectic eigenvalue of the quadrature covariance matrix
/// (diag b0, k_x = c1 + c2, k_p = c2 - c1), optionally after partial
/// transposition (k_p -> -k_p). Returns 0 when the matrix is not positive.
double smallest_symplectic_eigenvalue(const SymmetricCCM& ccm, bool partial_transpose = false);

bool physicality_check(const SymmetricCCM& ccm);

/// Simon's PPT test: true means separable.
bool simon_ppt_check(const SymmetricCCM& ccm);

/// Second moments of p·ρ_a + (1-p)·ρ_b. Throws DomainError for p outside [0, 1].
SymmetricCCM mixture_ccm(double p, const SymmetricCCM& a, const SymmetricCCM& b);

// ---------------------------------------------------------------------------
// Dense helpers for covariance matrices outside the symmetric family
// (realigned CCMs, non-symmetric standard forms).

/// Dense standard-form CCM with <a1†a1> + 1/2 = b1, <a2†a2> + 1/2 = b2.
Eigen::Matrix4d standard_form_ccm(double b1, double b2, double c1, double c2);

/// Converts a real CCM in the (a1†, a2†, a1, a2) basis into the real
/// symmetric covariance of (x1, x2, p1, p2). Vacuum maps to I/2.
Eigen::Matrix4d quadrature_covariance(const Eigen::Matrix4d& ccm);

/// Symplectic eigenvalues (ascending) of a 4x4 quadrature covariance.
std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& sigma);

/// True when the CCM describes a quantum state: positive covariance with
/// both symplectic eigenvalues >= 1/2 - tol.
bool is_physical_ccm(const Eigen::Matrix4d& ccm, double tol = 1e-10);

}  // namespace cvr
