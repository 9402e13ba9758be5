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

#include "cvrealign/photon.hpp"

#include <cmath>
#include <sstream>

#include "cvrealign/error.hpp"

namespace cvr {

namespace {

SigmaBasisMatrix shifted(const SigmaBasisMatrix& m, PhotonOp op) {
  // γ ∓ σ1⊗I/2: subtraction lowers the diagonal, addition raises it.
  const double s = op == PhotonOp::Subtract ? -0.5 : 0.5;
  return m + s * SigmaBasisMatrix::sigma1_identity();
}

}  // namespace

SigmaBasisMatrix realigned_ccm_prime(const SymmetricCCM& ccm) {
  const double tau = branch_tau(ccm, Branch::Plain);
  const double p = ccm.b0 + ccm.c1, q = ccm.b0 - ccm.c1;
  return 0.5 * SigmaBasisMatrix{ccm.c2 * (tau - 1.0), p * tau - q, p * tau + q + 1.0, ccm.c2 * (tau + 1.0)};
}

double photon_opr_closed_form(const SymmetricCCM& ccm, PhotonOp op) {
  const double tau = branch_tau(ccm, Branch::Plain);
  const double h = op == PhotonOp::Subtract ? 0.5 : -0.5;
  const double b = ccm.b0, c1 = ccm.c1, c2 = ccm.c2;
  const double c = 1.0 / ((b - h) * (b - h) + c1 * c1 + c2 * c2);
  const double u = b - c1 - h, w = (b + c1) * tau - h;
  return 0.5 * c * (u * u + w * w + 0.5 * c2 * c2 * (tau + 1.0) * (tau + 1.0));
}

double photon_normalization(const SymmetricCCM& ccm, PhotonOp op, int m) {
  const double f = f_moment(m, shifted(ccm.matrix(), op));
  if (f == 0.0) throw Error(ErrorCode::ZeroState, "photon operation annihilates the state");
  return 1.0 / f;
}

double photon_opr_moment(const SymmetricCCM& ccm, PhotonOp op, int m) {
  if (m < 1 || m > kMaxPhotonNumber) {
    std::ostringstream msg;
    msg << "photon number must lie in 1.." << kMaxPhotonNumber << ", got " << m;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  const SigmaBasisMatrix gamma_r = realigned_ccm_prime(ccm) - 0.5 * SigmaBasisMatrix::sigma1_identity();
  return f_moment(m, shifted(gamma_r, op)) * photon_normalization(ccm, op, m);
}

RealignBranch photon_branch(const SymmetricCCM& ccm, PhotonOp op, int m, Branch branch) {
  const SymmetricCCM kernel = branch == Branch::Plain ? ccm : ccm.parity_flipped();
  const double tau = branch_tau(kernel, Branch::Plain);
  RealignBranch rb{branch, tau, 0.0};
  if (tau > 0.0) rb.trace_value = std::sqrt(tau) * photon_opr_moment(kernel, op, m);
  return rb;
}

CriterionReport photon_pm_criterion(const SymmetricCCM& ccm, PhotonOp op, int m) {
  CriterionReport report;
  report.has_branch = true;
  const RealignBranch plain = photon_branch(ccm, op, m, Branch::Plain);
  const RealignBranch pi = photon_branch(ccm, op, m, Branch::PiAppended);
  report.branch = pi.trace_value > plain.trace_value ? pi : plain;
  report.value = report.branch.trace_value;
  settle_verdict(report);
  if (!physicality_check(ccm)) append_detail(report, "kernel is not a physical state");
  if (plain.tau <= 0.0 && pi.tau <= 0.0) append_detail(report, "both branch kernels have negative tau");
  append_detail(report, std::string("dominant branch: ") + branch_name(report.branch.label));
  return report;
}

MixtureCriteria mixture_criteria(double w1, double w2, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::DomainError, "mixing probability must lie in [0, 1]");
  const bool regime = w1 > -0.5 && w1 < 0.0 && w2 >= 0.0;
  auto make = [&](double value, const char* name) {
    CriterionReport r;
    r.value = value;
    r.threshold = 0.0;
    r.direction = Direction::Below;
    settle_verdict(r);
    append_detail(r, name);
    if (!regime) append_detail(r, "warning: inputs outside w1 in (-1/2, 0), w2 >= 0");
    return r;
  };
  const double base = p * w1 + (1.0 - p) * w2;
  return {make(base, "criterion: second-moment"), make(base + w1 * w2, "criterion: fock"),
          make(base + 2.0 * w1 * w2, "criterion: realignment")};
}

}  // namespace cvr
