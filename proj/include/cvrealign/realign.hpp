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

#include "cvrealign/gaussian.hpp"
#include "cvrealign/report.hpp"
#include "cvrealign/sigma_basis.hpp"

namespace cvr {

/// γ_R'^{-1} = Z' X Z' + I⊗σ1 + σ1⊗I for X = γ'^{-1} of any state whose
/// second moments live in the σ-basis.
SigmaBasisMatrix realigned_inverse(const SigmaBasisMatrix& gamma_prime_inverse);

/// Plain: {K1, 1-K3, 1-K2, K4}; PiAppended: {K1, 1-K3, 1+K2, -K4}.
SigmaBasisMatrix realigned_inverse(const SymmetricCCM& ccm, Branch branch);

/// (b0 ± c1)² - c2², the product (b0 ± c1 + c2)(b0 ± c1 - c2).
double branch_product(const SymmetricCCM& ccm, Branch branch);

/// τ = 1 / (4 · branch_product). Throws DegenerateState at a zero product.
double branch_tau(const SymmetricCCM& ccm, Branch branch);

/// Tr ρ^R from the determinant ratio sqrt(det γ'^{-1} / det γ_R'^{-1}).
double branch_trace_by_determinants(const SymmetricCCM& ccm, Branch branch);

/// Whether γ_R = γ_R' - σ1⊗I/2 of the branch is a valid covariance matrix.
bool realigned_ccm_is_physical(const SymmetricCCM& ccm, Branch branch);

/**
 * Realignment test for a symmetric Gaussian state. The reported value is
 * the larger branch trace sqrt(τ); it bounds the trace norm of ρ^R from
 * below, and equals it whenever the branch's realigned CCM is physical.
 */
CriterionReport gaussian_trace_norm_bound(const SymmetricCCM& ccm);

/// Standard-form non-symmetric state: b0 is replaced by sqrt(b1 b2).
CriterionReport gaussian_criterion_nonsymmetric(double b1, double b2, double c1, double c2);

}  // namespace cvr
