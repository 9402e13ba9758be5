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

namespace cvr {

/**
 * A 4x4 real matrix in the commuting basis {I⊗I, I⊗σ1, σ1⊗I, σ1⊗σ1}:
 *
 *     X = v1 I⊗I + v2 I⊗σ1 + v3 σ1⊗I + v4 σ1⊗σ1
 *
 * The coefficients are the first row of X. All four generators commute and
 * share the eigenvectors of σ1⊗I and I⊗σ1, so products and inverses never
 * leave the basis and are computed exactly on the eigenvalues.
 */
struct SigmaBasisMatrix {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double v4 = 0.0;

  static constexpr SigmaBasisMatrix identity() { return {1.0, 0.0, 0.0, 0.0}; }
  /// σ1⊗I₂, swaps the creation and annihilation halves.
  static constexpr SigmaBasisMatrix sigma1_identity() { return {0.0, 0.0, 1.0, 0.0}; }
  /// I₂⊗σ1
  static constexpr SigmaBasisMatrix identity_sigma1() { return {0.0, 1.0, 0.0, 0.0}; }
  /// σ1⊗σ1
  static constexpr SigmaBasisMatrix sigma1_sigma1() { return {0.0, 0.0, 0.0, 1.0}; }

  static SigmaBasisMatrix from_eigenvalues(const std::array<double, 4>& ev);

  /// Eigenvalues v1 + v2 s2 + v3 s1 + v4 s1 s2 ordered as
  /// (s1,s2) = (+,+), (+,-), (-,+), (-,-).
  std::array<double, 4> eigenvalues() const;
  double determinant() const;
  /// Throws Error(SingularMatrix) if an eigenvalue is below kSingularTol.
  SigmaBasisMatrix inverse() const;
  double min_abs_eigenvalue() const;

  Eigen::Matrix4d dense() const;

  /// (σ3⊗I) X (σ3⊗I): negates the block-swapping generators.
  SigmaBasisMatrix sigma3_conjugated() const { return {v1, v2, -v3, -v4}; }
  /// Z X Z with Z the permutation exchanging the second and third index.
  SigmaBasisMatrix z_conjugated() const { return {v1, v3, v2, v4}; }
  /// Z' X Z' with Z' = (σ3⊗I) Z (σ3⊗I).
  SigmaBasisMatrix zprime_conjugated() const { return {v1, -v3, -v2, v4}; }

  std::array<double, 4> coefficients() const { return {v1, v2, v3, v4}; }

  friend SigmaBasisMatrix operator+(const SigmaBasisMatrix& a, const SigmaBasisMatrix& b) {
    return {a.v1 + b.v1, a.v2 + b.v2, a.v3 + b.v3, a.v4 + b.v4};
  }
  friend SigmaBasisMatrix operator-(const SigmaBasisMatrix& a, const SigmaBasisMatrix& b) {
    return {a.v1 - b.v1, a.v2 - b.v2, a.v3 - b.v3, a.v4 - b.v4};
  }
  friend SigmaBasisMatrix operator-(const SigmaBasisMatrix& a) { return {-a.v1, -a.v2, -a.v3, -a.v4}; }
  friend SigmaBasisMatrix operator*(double s, const SigmaBasisMatrix& a) {
    return {s * a.v1, s * a.v2, s * a.v3, s * a.v4};
  }
  friend SigmaBasisMatrix operator*(const SigmaBasisMatrix& a, const SigmaBasisMatrix& b);
  friend bool operator==(const SigmaBasisMatrix&, const SigmaBasisMatrix&) = default;
};

double max_abs_difference(const SigmaBasisMatrix& a, const SigmaBasisMatrix& b);

}  // namespace cvr
