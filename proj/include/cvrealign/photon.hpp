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
#include "cvrealign/quadratic.hpp"
#include "cvrealign/realign.hpp"
#include "cvrealign/report.hpp"

namespace cvr {

/// Closed-form γ_R' of the plain branch,
/// ½{c2(τ-1), (b0+c1)τ-(b0-c1), (b0+c1)τ+(b0-c1)+1, c2(τ+1)}.
/// Throws DegenerateState when (b0+c1)² = c2².
SigmaBasisMatrix realigned_ccm_prime(const SymmetricCCM& ccm);

/// 𝒪P^R for one photon per mode on the plain branch (closed form).
double photon_opr_closed_form(const SymmetricCCM& ccm, PhotonOp op);

/// 𝒪P^R for m photons per mode: f(m, γ_R ∓ σ1⊗I/2) / f(m, γ ∓ σ1⊗I/2).
double photon_opr_moment(const SymmetricCCM& ccm, PhotonOp op, int m);

/// Normalization c∓m = 1 / f(m, γ ∓ σ1⊗I/2), so that Tr ρ∓m = 1.
double photon_normalization(const SymmetricCCM& ccm, PhotonOp op, int m);

/// √τ · 𝒪P^R of one branch; the parity branch is the plain formula on
/// the kernel (b0, -c1, -c2).
RealignBranch photon_branch(const SymmetricCCM& ccm, PhotonOp op, int m, Branch branch);

/// Realignment test for the m-photon subtracted or added Gaussian state;
/// the larger of the two branches is reported.
CriterionReport photon_pm_criterion(const SymmetricCCM& ccm, PhotonOp op, int m);

struct MixtureCriteria {
  CriterionReport second_moment;
  CriterionReport fock;
  CriterionReport realignment;
};

/**
 * The three criteria for p·(entangled TMST) + (1-p)·(separable TMST) with
 * w = b0 + c1 - 1/2 for each component. Each value is a left-hand side
 * that certifies entanglement when negative.
 */
MixtureCriteria mixture_criteria(double w1, double w2, double p);

}  // namespace cvr
