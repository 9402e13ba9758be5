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

#include "cvrealign/cvrealign.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "cvrealign/channel.hpp"
#include "cvrealign/error.hpp"
#include "cvrealign/fock.hpp"
#include "cvrealign/gaussian.hpp"
#include "cvrealign/photon.hpp"
#include "cvrealign/realign.hpp"

struct cvr_fock {
  cvr::FockTensor tensor;
};

namespace {

thread_local std::string last_error;

cvr_status status_of(cvr::ErrorCode code) {
  switch (code) {
    case cvr::ErrorCode::InvalidArgument: return CVR_ERR_INVALID_ARGUMENT;
    case cvr::ErrorCode::SingularMatrix: return CVR_ERR_SINGULAR_MATRIX;
    case cvr::ErrorCode::DegenerateState: return CVR_ERR_DEGENERATE_STATE;
    case cvr::ErrorCode::OverflowGuard: return CVR_ERR_OVERFLOW_GUARD;
    case cvr::ErrorCode::CapacityExceeded: return CVR_ERR_CAPACITY_EXCEEDED;
    case cvr::ErrorCode::CutoffTooSmall: return CVR_ERR_CUTOFF_TOO_SMALL;
    case cvr::ErrorCode::DomainError: return CVR_ERR_DOMAIN;
    case cvr::ErrorCode::ZeroState: return CVR_ERR_ZERO_STATE;
    case cvr::ErrorCode::Io: return CVR_ERR_IO;
  }
  return CVR_ERR_INTERNAL;
}

template <class F>
cvr_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CVR_OK;
  } catch (const cvr::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CVR_ERR_CAPACITY_EXCEEDED;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CVR_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* name) {
  if (p == nullptr) throw cvr::Error(cvr::ErrorCode::InvalidArgument, std::string(name) + " is null");
}

cvr::SymmetricCCM to_cpp(const cvr_ccm& c) { return {c.b0, c.c1, c.c2}; }
cvr_ccm to_c(const cvr::SymmetricCCM& c) { return {c.b0, c.c1, c.c2}; }

cvr::ChannelParams to_cpp(const cvr_channel& ch) { return cvr::ChannelParams::from_decay(ch.decay, ch.nbar); }

cvr::PhotonOp to_cpp(cvr_photon_op op) {
  if (op == CVR_SUBTRACT) return cvr::PhotonOp::Subtract;
  if (op == CVR_ADD) return cvr::PhotonOp::Add;
  throw cvr::Error(cvr::ErrorCode::InvalidArgument, "unknown photon operation");
}

cvr::TmsvCriterion to_cpp(cvr_tmsv_criterion c) {
  switch (c) {
    case CVR_REALIGN_SUB: return cvr::TmsvCriterion::RealignSubtract;
    case CVR_REALIGN_ADD: return cvr::TmsvCriterion::RealignAdd;
    case CVR_SECOND_MOMENT_SUB: return cvr::TmsvCriterion::SecondMomentSubtract;
    case CVR_SECOND_MOMENT_ADD: return cvr::TmsvCriterion::SecondMomentAdd;
  }
  throw cvr::Error(cvr::ErrorCode::InvalidArgument, "unknown criterion");
}

cvr_tmsv_criterion to_c(cvr::TmsvCriterion c) {
  switch (c) {
    case cvr::TmsvCriterion::RealignSubtract: return CVR_REALIGN_SUB;
    case cvr::TmsvCriterion::RealignAdd: return CVR_REALIGN_ADD;
    case cvr::TmsvCriterion::SecondMomentSubtract: return CVR_SECOND_MOMENT_SUB;
    case cvr::TmsvCriterion::SecondMomentAdd: return CVR_SECOND_MOMENT_ADD;
  }
  return CVR_REALIGN_SUB;
}

cvr::DerivativeSpec to_spec(const int orders[8]) {
  require(orders, "orders");
  cvr::DerivativeSpec d;
  for (int i = 0; i < 8; ++i) {
    if (orders[i] < 0) throw cvr::Error(cvr::ErrorCode::InvalidArgument, "derivative orders must be non-negative");
    d.orders[i] = orders[i];
  }
  return d;
}

cvr_report to_c(const cvr::CriterionReport& r) {
  cvr_report out{};
  out.value = r.value;
  out.threshold = r.threshold;
  out.above = r.direction == cvr::Direction::Above ? 1 : 0;
  out.entangled = r.entangled ? 1 : 0;
  out.boundary = r.boundary ? 1 : 0;
  if (r.has_branch) {
    out.branch = r.branch.label == cvr::Branch::Plain ? CVR_BRANCH_PLAIN : CVR_BRANCH_PI;
    out.tau = r.branch.tau;
  } else {
    out.branch = CVR_BRANCH_NONE;
  }
  out.product = r.product;
  out.product_threshold = r.product_threshold;
  out.has_product = r.has_product ? 1 : 0;
  out.lower_bound_only = r.lower_bound_only ? 1 : 0;
  std::snprintf(out.detail, sizeof out.detail, "%s", r.detail.c_str());
  return out;
}

cvr_fock* wrap(cvr::FockTensor t) { return new cvr_fock{std::move(t)}; }

}  // namespace

extern "C" {

const char* cvr_version(void) { return "1.0.0"; }

const char* cvr_status_name(cvr_status status) {
  switch (status) {
    case CVR_OK: return "Ok";
    case CVR_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status >= CVR_ERR_INVALID_ARGUMENT && status <= CVR_ERR_IO)
    return cvr::error_code_name(static_cast<cvr::ErrorCode>(status));
  return "unknown";
}

const char* cvr_last_error(void) { return last_error.c_str(); }

cvr_status cvr_tmsv_ccm(double lambda, cvr_ccm* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(cvr::SymmetricCCM::tmsv(lambda));
  });
}

cvr_status cvr_physicality_check(const cvr_ccm* ccm, int* physical) {
  return guarded([&] {
    require(ccm, "ccm");
    require(physical, "physical");
    *physical = cvr::physicality_check(to_cpp(*ccm)) ? 1 : 0;
  });
}

cvr_status cvr_simon_ppt_check(const cvr_ccm* ccm, int* separable) {
  return guarded([&] {
    require(ccm, "ccm");
    require(separable, "separable");
    *separable = cvr::simon_ppt_check(to_cpp(*ccm)) ? 1 : 0;
  });
}

cvr_status cvr_mixture_ccm(double p, const cvr_ccm* a, const cvr_ccm* b, cvr_ccm* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = to_c(cvr::mixture_ccm(p, to_cpp(*a), to_cpp(*b)));
  });
}

cvr_status cvr_gaussian_criterion(const cvr_ccm* ccm, cvr_report* out) {
  return guarded([&] {
    require(ccm, "ccm");
    require(out, "out");
    *out = to_c(cvr::gaussian_trace_norm_bound(to_cpp(*ccm)));
  });
}

cvr_status cvr_gaussian_criterion_nonsymmetric(double b1, double b2, double c1, double c2, cvr_report* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(cvr::gaussian_criterion_nonsymmetric(b1, b2, c1, c2));
  });
}

cvr_status cvr_photon_criterion(const cvr_ccm* ccm, cvr_photon_op op, int m, cvr_report* out) {
  return guarded([&] {
    require(ccm, "ccm");
    require(out, "out");
    *out = to_c(cvr::photon_pm_criterion(to_cpp(*ccm), to_cpp(op), m));
  });
}

cvr_status cvr_photon_normalization(const cvr_ccm* ccm, cvr_photon_op op, int m, double* out) {
  return guarded([&] {
    require(ccm, "ccm");
    require(out, "out");
    *out = cvr::photon_normalization(to_cpp(*ccm), to_cpp(op), m);
  });
}

cvr_status cvr_mixture_criteria(double w1, double w2, double p, cvr_report out[3]) {
  return guarded([&] {
    require(out, "out");
    const cvr::MixtureCriteria mc = cvr::mixture_criteria(w1, w2, p);
    out[0] = to_c(mc.second_moment);
    out[1] = to_c(mc.fock);
    out[2] = to_c(mc.realignment);
  });
}

cvr_status cvr_channel_from_rate(double gamma, double t, double nbar, cvr_channel* out) {
  return guarded([&] {
    require(out, "out");
    const cvr::ChannelParams ch = cvr::ChannelParams::from_rate(gamma, t, nbar);
    *out = {ch.decay, ch.nbar};
  });
}

cvr_status cvr_evolve_ccm(const cvr_ccm* ccm, const cvr_channel* ch, cvr_ccm* out) {
  return guarded([&] {
    require(ccm, "ccm");
    require(ch, "ch");
    require(out, "out");
    *out = to_c(cvr::evolve_ccm(to_cpp(*ccm), to_cpp(*ch)));
  });
}

cvr_status cvr_evolved_criterion_general(const cvr_ccm* kernel, const int orders[8], const cvr_channel* ch,
                                         cvr_report* out) {
  return guarded([&] {
    require(kernel, "kernel");
    require(ch, "ch");
    require(out, "out");
    *out = to_c(cvr::evolved_criterion_general(to_cpp(*kernel), to_spec(orders), to_cpp(*ch)));
  });
}

cvr_status cvr_parse_tmsv_criterion(const char* name, cvr_tmsv_criterion* out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = to_c(cvr::parse_tmsv_criterion(name));
  });
}

const char* cvr_tmsv_criterion_name(cvr_tmsv_criterion c) {
  try {
    return cvr::tmsv_criterion_name(to_cpp(c));
  } catch (const cvr::Error&) {
    return "unknown";
  }
}

cvr_status cvr_evaluate_tmsv_criterion(cvr_tmsv_criterion c, double lambda, const cvr_channel* ch,
                                       cvr_report* out) {
  return guarded([&] {
    require(ch, "ch");
    require(out, "out");
    *out = to_c(cvr::evaluate_tmsv_criterion(to_cpp(c), lambda, to_cpp(*ch)));
  });
}

cvr_status cvr_critical_time_tmsv(cvr_tmsv_criterion c, double lambda, double nbar, cvr_critical_time* out) {
  return guarded([&] {
    require(out, "out");
    const cvr::CriticalTime ct = cvr::critical_time_tmsv(to_cpp(c), lambda, nbar);
    *out = {ct.decay ? 1 : 0, ct.decay.value_or(0.0), ct.detected_initially ? 1 : 0, ct.non_monotonic ? 1 : 0,
            ct.sign_changes};
  });
}

cvr_status cvr_fock_gaussian(const cvr_ccm* ccm, int cutoff, cvr_fock** out) {
  return guarded([&] {
    require(ccm, "ccm");
    require(out, "out");
    *out = wrap(cvr::gaussian_fock(to_cpp(*ccm), cutoff));
  });
}

cvr_status cvr_fock_gaussian_nonsymmetric(double b1, double b2, double c1, double c2, int cutoff, cvr_fock** out) {
  return guarded([&] {
    require(out, "out");
    *out = wrap(cvr::gaussian_fock(cvr::standard_form_ccm(b1, b2, c1, c2), cutoff));
  });
}

cvr_status cvr_fock_photon(const cvr_fock* f, cvr_photon_op op, int m, cvr_fock** out, double* raw_trace) {
  return guarded([&] {
    require(f, "f");
    require(out, "out");
    cvr::PhotonFock pf = cvr::apply_photon_ops(f->tensor, to_cpp(op), m);
    if (raw_trace) *raw_trace = pf.raw_trace;
    *out = wrap(std::move(pf.state));
  });
}

cvr_status cvr_fock_evolve(const cvr_fock* f, const cvr_channel* ch, cvr_fock** out) {
  return guarded([&] {
    require(f, "f");
    require(ch, "ch");
    require(out, "out");
    const cvr::ChannelParams p = to_cpp(*ch);
    *out = wrap(p.nbar == 0.0 ? cvr::evolve_fock_pure_loss(f->tensor, p) : cvr::evolve_fock_thermal(f->tensor, p));
  });
}

cvr_status cvr_fock_joint(const cvr_ccm* kernel, const int orders[8], const cvr_channel* ch, int cutoff,
                          cvr_fock** out, double* raw_trace) {
  return guarded([&] {
    require(kernel, "kernel");
    require(ch, "ch");
    require(out, "out");
    cvr::PhotonFock pf = cvr::joint_quadratic_fock(to_cpp(*kernel), to_spec(orders), to_cpp(*ch), cutoff);
    if (raw_trace) *raw_trace = pf.raw_trace;
    *out = wrap(std::move(pf.state));
  });
}

cvr_status cvr_fock_realigned_norms(const cvr_fock* f, cvr_realigned_norms* out) {
  return guarded([&] {
    require(f, "f");
    require(out, "out");
    const cvr::RealignedNorms n = cvr::realign_and_trace_norm(f->tensor);
    *out = {n.trace_norm, n.trace, n.blocks};
  });
}

cvr_status cvr_fock_moments(const cvr_fock* f, cvr_moments* out) {
  return guarded([&] {
    require(f, "f");
    require(out, "out");
    const cvr::FockMoments m = cvr::extract_moments(f->tensor);
    *out = {m.b1, m.b2, m.c1, m.c2};
  });
}

cvr_status cvr_fock_trace(const cvr_fock* f, double* out) {
  return guarded([&] {
    require(f, "f");
    require(out, "out");
    *out = f->tensor.trace();
  });
}

cvr_status cvr_fock_cutoff(const cvr_fock* f, int* out) {
  return guarded([&] {
    require(f, "f");
    require(out, "out");
    *out = f->tensor.cutoff();
  });
}

cvr_status cvr_fock_element(const cvr_fock* f, int k1, int k2, int m1, int m2, double* out) {
  return guarded([&] {
    require(f, "f");
    require(out, "out");
    const int n = f->tensor.dim();
    for (int k : {k1, k2, m1, m2})
      if (k < 0 || k >= n) throw cvr::Error(cvr::ErrorCode::InvalidArgument, "Fock index out of range");
    *out = f->tensor.at(k1, k2, m1, m2);
  });
}

cvr_status cvr_fock_save(const cvr_fock* f, const char* path) {
  return guarded([&] {
    require(f, "f");
    require(path, "path");
    cvr::save_fock(f->tensor, path);
  });
}

cvr_status cvr_fock_load(const char* path, cvr_fock** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(cvr::load_fock(path));
  });
}

void cvr_fock_free(cvr_fock* f) { delete f; }

}  // extern "C"
