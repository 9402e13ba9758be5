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
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cvrealign/sigma_basis.hpp"

namespace cvr {

/// exp(½ x A xᵀ + L x + c0) over n real variables.
struct QuadraticExponent {
  Eigen::MatrixXd A;
  Eigen::VectorXd L;
  double c0 = 0.0;

  QuadraticExponent() = default;
  explicit QuadraticExponent(Eigen::MatrixXd a);
  QuadraticExponent(Eigen::MatrixXd a, Eigen::VectorXd l, double c = 0.0);

  int size() const { return static_cast<int>(A.rows()); }
};

inline constexpr int kMaxMomentOrder = 24;

/**
 * Mixed partial derivative of exp(½ x A xᵀ + L x + c0) at x = 0 with
 * multiplicity `idx`: the sum over all ways of splitting the multiset of
 * variables into pairs {i,j} (weight A_ij) and singletons i (weight L_i).
 * Throws OverflowGuard when the total order exceeds kMaxMomentOrder.
 */
double gaussian_moment(const QuadraticExponent& q, const std::vector<int>& idx);

/// f(m, V) = ∂^m/∂κ1..∂κ4 exp(-½ κ V κᵀ) at κ = 0.
double f_moment(int m, const SigmaBasisMatrix& v);

/// Closed form of f(2, V).
double f2_closed_form(const SigmaBasisMatrix& v);

enum class PhotonOp { Subtract, Add };

const char* photon_op_name(PhotonOp op) noexcept;

/// Generating-parameter slots, in storage order.
enum GenSlot { kEps1, kEps2, kXi1, kXi2, kEta1, kEta2, kZeta1, kZeta2 };

/// Derivative orders over (ε1, ε2, ξ1, ξ2, η1, η2, ζ1, ζ2). When the
/// normalization is empty it is fixed by unit trace.
struct DerivativeSpec {
  std::array<int, 8> orders{};
  std::optional<double> normalization;

  /// a1^m a2^m ρ a1†^m a2†^m (Subtract) or its creation-operator mirror.
  static DerivativeSpec photon(PhotonOp op, int m);

  int total_order() const;
  /// Sum of the orders that act on mode 2 (slots ε2, ξ2, η2, ζ2).
  int mode2_order() const;
};

inline constexpr int kMaxPhotonNumber = 6;

}  // namespace cvr
