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

#include "cvrealign/realign.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvrealign/error.hpp"

namespace cvr {

SigmaBasisMatrix realigned_inverse(const SigmaBasisMatrix& gamma_prime_inverse) {
  return gamma_prime_inverse.zprime_conjugated() + SigmaBasisMatrix::identity_sigma1() +
         SigmaBasisMatrix::sigma1_identity();
}

SigmaBasisMatrix realigned_inverse(const SymmetricCCM& ccm, Branch branch) {
  const SymmetricCCM kernel = branch == Branch::Plain ? ccm : ccm.parity_flipped();
  return realigned_inverse(k_coefficients(kernel).matrix());
}

double branch_product(const SymmetricCCM& ccm, Branch branch) {
  const double s = branch == Branch::Plain ? ccm.b0 + ccm.c1 : ccm.b0 - ccm.c1;
  return (s + ccm.c2) * (s - ccm.c2);
}

double branch_tau(const SymmetricCCM& ccm, Branch branch) {
  const double prod = branch_product(ccm, branch);
  if (std::abs(prod) < kSingularTol) {
    std::ostringstream msg;
    msg << "realigned determinant vanishes on the " << branch_name(branch) << " branch ((b0"
        << (branch == Branch::Plain ? "+" : "-") << "c1)^2 = c2^2)";
    throw Error(ErrorCode::DegenerateState, msg.str());
  }
  return 1.0 / (4.0 * prod);
}

double branch_trace_by_determinants(const SymmetricCCM& ccm, Branch branch) {
  const double det_inv = k_coefficients(ccm).matrix().determinant();
  const double det_r = realigned_inverse(ccm, branch).determinant();
  if (std::abs(det_r) < kSingularTol)
    throw Error(ErrorCode::DegenerateState, "realigned inverse CCM is singular");
  return std::sqrt(det_inv / det_r);
}

bool realigned_ccm_is_physical(const SymmetricCCM& ccm, Branch branch) {
  const SigmaBasisMatrix rinv = realigned_inverse(ccm, branch);
  if (rinv.min_abs_eigenvalue() < kSingularTol) return false;
  const SigmaBasisMatrix gamma_r = rinv.inverse() - 0.5 * SigmaBasisMatrix::sigma1_identity();
  return is_physical_ccm(gamma_r.dense());
}

CriterionReport gaussian_trace_norm_bound(const SymmetricCCM& ccm) {
  CriterionReport report;
  report.threshold = 1.0;
  report.direction = Direction::Above;
  report.has_branch = true;
  report.has_product = true;

  RealignBranch best;
  bool any_physical = false;
  double min_product = 0.0;
  bool first = true;
  for (Branch b : {Branch::Plain, Branch::PiAppended}) {
    const double tau = branch_tau(ccm, b);
    const double prod = branch_product(ccm, b);
    RealignBranch rb{b, tau, tau > 0.0 ? std::sqrt(tau) : 0.0};
    if (first || rb.trace_value > best.trace_value) best = rb;
    min_product = first ? prod : std::min(min_product, prod);
    first = false;
    any_physical = any_physical || realigned_ccm_is_physical(ccm, b);
  }
  report.branch = best;
  report.value = best.trace_value;
  report.product = min_product;
  report.lower_bound_only = !any_physical;
  settle_verdict(report);

  if (!physicality_check(ccm)) append_detail(report, "input is not a physical state");
  if (report.lower_bound_only)
    append_detail(report, "neither realigned CCM is physical; value is a lower bound only");
  append_detail(report, std::string("dominant branch: ") + branch_name(best.label));
  return report;
}

CriterionReport gaussian_criterion_nonsymmetric(double b1, double b2, double c1, double c2) {
  if (!(b1 >= 0.5 && b2 >= 0.5))
    throw Error(ErrorCode::DomainError, "b1 and b2 must be at least 1/2");
  CriterionReport report = gaussian_trace_norm_bound({std::sqrt(b1 * b2), c1, c2});
  // The symmetric physicality note does not apply to the geometric-mean proxy.
  report.detail.clear();
  if (!is_physical_ccm(standard_form_ccm(b1, b2, c1, c2))) append_detail(report, "input is not a physical state");
  std::ostringstream note;
  note << "non-symmetric state evaluated with b0 = sqrt(b1 b2) = " << std::sqrt(b1 * b2);
  append_detail(report, note.str());
  append_detail(report, std::string("dominant branch: ") + branch_name(report.branch.label));
  return report;
}

}  // namespace cvr
