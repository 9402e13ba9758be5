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

#include "cvrealign/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "cvrealign/error.hpp"
#include "cvrealign/realign.hpp"

namespace cvr {

namespace {

using Sb = SigmaBasisMatrix;

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << name << " must be a finite non-negative number, got " << v;
    throw Error(ErrorCode::DomainError, msg.str());
  }
}

void require_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    std::ostringstream msg;
    msg << "lambda must lie in (0, 1), got " << lambda;
    throw Error(ErrorCode::DomainError, msg.str());
  }
}

Eigen::MatrixXd selector(int k) { return parameter_selector(static_cast<GenGroup>(k)); }

Eigen::MatrixXd stack(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

std::vector<int> as_index(const DerivativeSpec& d) { return {d.orders.begin(), d.orders.end()}; }

Sb inverse_checked(const Sb& m, const char* what) {
  const double ev = m.min_abs_eigenvalue();
  if (ev < kSingularTol) {
    std::ostringstream msg;
    msg << what << " is singular (smallest |eigenvalue| " << ev << ")";
    throw Error(ErrorCode::SingularMatrix, msg.str());
  }
  return m.inverse();
}

struct EvolvedMaps {
  Sb eps_zeta;  // acts on (ε, ζ)
  Sb eta_xi;    // acts on (η, ξ)
};

EvolvedMaps parameter_maps(const SymmetricCCM& ccm, const ChannelParams& ch) {
  const Sb beta_inv = gamma_prime(ccm).sigma3_conjugated();
  const Sb beta_t_inv = gamma_prime(evolve_ccm(ccm, ch)).sigma3_conjugated();
  const double h = std::exp(-0.5 * ch.decay);
  const Sb s1 = Sb::sigma1_identity();
  const Sb shifted_t = inverse_checked(beta_t_inv + s1, "beta_t^{-1} + sigma1 x I");
  return {h * (inverse_checked(beta_t_inv, "beta_t^{-1}") * beta_inv), h * (shifted_t * (beta_inv + s1))};
}

double moment(const Eigen::MatrixXd& q, const DerivativeSpec& d) {
  return gaussian_moment(QuadraticExponent(q), as_index(d));
}

double normalization(const SymmetricCCM& kernel, const DerivativeSpec& d) {
  if (d.normalization) return *d.normalization;
  const Eigen::MatrixXd qp = p_quadratic_form(gamma_prime(kernel).sigma3_conjugated().dense(), selector(0),
                                              selector(1), selector(2), selector(3));
  const double tr = moment(qp, d);
  if (tr == 0.0) throw Error(ErrorCode::ZeroState, "derivative annihilates the state");
  return 1.0 / tr;
}

// γ_Rt' of the plain branch together with γ_t'.
struct EvolvedPrimes {
  Sb gt;
  Sb grt;
};

EvolvedPrimes evolved_primes(const SymmetricCCM& kernel, const ChannelParams& ch) {
  const Sb gt = gamma_prime(evolve_ccm(kernel, ch));
  const Sb rinv = realigned_inverse(inverse_checked(gt, "gamma_t'"));
  if (rinv.min_abs_eigenvalue() < kSingularTol)
    throw Error(ErrorCode::DegenerateState, "realigned evolved CCM is singular");
  return {gt, rinv.inverse()};
}

}  // namespace

Eigen::MatrixXd parameter_selector(GenGroup g) {
  const int k = static_cast<int>(g);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 8);
  s(0, 2 * k) = 1.0;
  s(1, 2 * k + 1) = 1.0;
  return s;
}

EvolvedSelectors evolved_selectors(const SymmetricCCM& ccm, const ChannelParams& ch) {
  const EvolvedMaps maps = parameter_maps(ccm, ch);
  const Eigen::MatrixXd ez = maps.eps_zeta.dense() * stack(selector(0), selector(3));
  const Eigen::MatrixXd hx = maps.eta_xi.dense() * stack(selector(2), selector(1));
  return {ez.topRows(2), hx.bottomRows(2), hx.topRows(2), ez.bottomRows(2)};
}

ChannelParams ChannelParams::from_rate(double gamma, double t, double nbar) {
  require_nonnegative(gamma, "Gamma");
  require_nonnegative(t, "t");
  return from_decay(gamma * t, nbar);
}

ChannelParams ChannelParams::from_decay(double decay, double nbar) {
  require_nonnegative(decay, "Gamma*t");
  require_nonnegative(nbar, "nbar");
  return {decay, nbar};
}

TmsvChannelScalars tmsv_scalars(double lambda, const ChannelParams& ch) {
  require_lambda(lambda);
  const double e = std::exp(-ch.decay), l2 = lambda * lambda;
  TmsvChannelScalars s;
  s.lambda = lambda;
  s.big_lambda = lambda * e / (1.0 - l2);
  s.n = l2 * e / (1.0 - l2) + ch.nbar * (1.0 - e) + 1.0;
  const double gap = 2.0 * (s.n - s.big_lambda) - 1.0;
  if (!(gap > 0.0)) throw Error(ErrorCode::DomainError, "2(N - Lambda) - 1 must be positive");
  s.q = e / ((1.0 + lambda) * gap);
  return s;
}

SymmetricCCM evolve_ccm(const SymmetricCCM& ccm, const ChannelParams& ch) {
  const double e = std::exp(-ch.decay);
  return {e * ccm.b0 + (ch.nbar + 0.5) * (1.0 - e), e * ccm.c1, e * ccm.c2};
}

GenParams evolve_gen_params(const GenParams& p, const SymmetricCCM& ccm, const ChannelParams& ch) {
  const EvolvedMaps maps = parameter_maps(ccm, ch);
  const Eigen::Vector4d ez(p[kEps1], p[kEps2], p[kZeta1], p[kZeta2]);
  const Eigen::Vector4d hx(p[kEta1], p[kEta2], p[kXi1], p[kXi2]);
  const Eigen::Vector4d ezt = maps.eps_zeta.dense() * ez;
  const Eigen::Vector4d hxt = maps.eta_xi.dense() * hx;
  return {ezt[0], ezt[1], hxt[2], hxt[3], hxt[0], hxt[1], ezt[2], ezt[3]};
}

double gen_params_residual(const GenParams& p, const GenParams& pt, const SymmetricCCM& ccm,
                           const ChannelParams& ch) {
  auto side = [](const Sb& binv, const GenParams& v) {
    const Eigen::Vector4d sum(v[kEps1] + v[kEta1], v[kEps2] + v[kEta2], v[kXi1] + v[kZeta1], v[kXi2] + v[kZeta2]);
    const Eigen::Vector4d swap(v[kXi1], v[kXi2], v[kEta1], v[kEta2]);
    return Eigen::Vector4d(binv.dense() * sum + swap);
  };
  const Sb beta_inv = gamma_prime(ccm).sigma3_conjugated();
  const Sb beta_t_inv = gamma_prime(evolve_ccm(ccm, ch)).sigma3_conjugated();
  const Eigen::Vector4d lhs = std::exp(-0.5 * ch.decay) * side(beta_inv, p);
  return (lhs - side(beta_t_inv, pt)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd p_quadratic_form(const Eigen::Matrix4d& beta_inverse, const Eigen::MatrixXd& e,
                                 const Eigen::MatrixXd& x, const Eigen::MatrixXd& h,
                                 const Eigen::MatrixXd& z) {
  const Eigen::MatrixXd u = stack(e + h, x + z);
  return -u.transpose() * beta_inverse * u - (z.transpose() * h + h.transpose() * z) -
         (e.transpose() * x + x.transpose() * e) - (h.transpose() * x + x.transpose() * h);
}

double evolved_trace_product(const SymmetricCCM& kernel, const DerivativeSpec& deriv, const ChannelParams& ch) {
  const EvolvedSelectors sel = evolved_selectors(kernel, ch);
  const EvolvedPrimes primes = evolved_primes(kernel, ch);
  const Eigen::MatrixXd e0 = selector(0), x0 = selector(1), h0 = selector(2), z0 = selector(3);
  const Eigen::MatrixXd &et = sel.eps, &zt = sel.zeta, &ht = sel.eta, &xt = sel.xi;

  const Eigen::MatrixXd qp = p_quadratic_form(gamma_prime(kernel).sigma3_conjugated().dense(), e0, x0, h0, z0);
  const Eigen::MatrixXd qpt = p_quadratic_form(primes.gt.sigma3_conjugated().dense(), et, xt, ht, zt);

  // Realigned parameters: (ξ^R, η^R) = (ξ_t, η_t) Z and (ε^R, ζ^R) = (ε_t, ζ_t) Z.
  Eigen::Matrix4d perm = Eigen::Matrix4d::Zero();
  perm(0, 0) = perm(1, 2) = perm(2, 1) = perm(3, 3) = 1.0;
  const Eigen::MatrixXd xhr = perm * stack(xt, ht);
  const Eigen::MatrixXd ezr = perm * stack(et, zt);
  const Eigen::MatrixXd qpr = p_quadratic_form(primes.grt.sigma3_conjugated().dense(), ezr.topRows(2),
                                               xhr.topRows(2), xhr.bottomRows(2), ezr.bottomRows(2));

  const double pref = std::sqrt(primes.grt.determinant() / primes.gt.determinant());
  return pref * normalization(kernel, deriv) * moment(qp - qpt + qpr, deriv);
}

double evolved_trace_quadratic(const SymmetricCCM& kernel, const DerivativeSpec& deriv, const ChannelParams& ch) {
  const Sb s1 = Sb::sigma1_identity();
  const Sb gp = gamma_prime(kernel);
  const EvolvedPrimes primes = evolved_primes(kernel, ch);
  const Sb gpp = gp - s1, gtpp = primes.gt - s1, grtpp = primes.grt - s1;
  if (gpp.min_abs_eigenvalue() < kSingularTol)
    throw Error(ErrorCode::SingularMatrix, "gamma'' is singular; use the product route or a closed form");
  const Sb it = inverse_checked(primes.gt, "gamma_t'");
  const Sb itt = inverse_checked(gtpp, "gamma_t''");
  const double e = std::exp(-ch.decay);

  const Sb m = gp + e * (gp * (-it + it * primes.grt.zprime_conjugated() * it) * gp);
  const Sb mpp = gpp + e * (gpp * (-itt + itt * grtpp.zprime_conjugated() * itt) * gpp);
  const Sb cross = gpp - e * (gp * it * gpp) - e * (gp * it * grtpp.zprime_conjugated() * Sb::sigma1_sigma1() * itt * gpp);

  Eigen::MatrixXd big(8, 8);
  big << m.dense(), cross.dense(), cross.dense().transpose(), mpp.dense();
  // v = (ε, -ζ, η, -ξ) as a linear map of the parameter vector.
  const Eigen::MatrixXd d = stack(stack(selector(0), -selector(3)), stack(selector(2), -selector(1)));
  const Eigen::MatrixXd q = -d.transpose() * big * d;

  const double pref = std::sqrt(primes.grt.determinant() / primes.gt.determinant());
  return pref * normalization(kernel, deriv) * moment(q, deriv);
}

CriterionReport evolved_criterion_general(const SymmetricCCM& kernel, const DerivativeSpec& deriv,
                                          const ChannelParams& ch) {
  CriterionReport report;
  report.has_branch = true;
  bool fell_back = false;
  double route_gap = 0.0;
  RealignBranch best;
  bool first = true;
  for (Branch b : {Branch::Plain, Branch::PiAppended}) {
    const SymmetricCCM k = b == Branch::Plain ? kernel : kernel.parity_flipped();
    const double sign = (b == Branch::PiAppended && deriv.mode2_order() % 2 != 0) ? -1.0 : 1.0;
    const double product = evolved_trace_product(k, deriv, ch);
    double value = product;
    try {
      value = evolved_trace_quadratic(k, deriv, ch);
      route_gap = std::max(route_gap, std::abs(value - product));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::SingularMatrix) throw;
      fell_back = true;
    }
    const RealignBranch rb{b, branch_tau(evolve_ccm(k, ch), Branch::Plain), sign * value};
    if (first || rb.trace_value > best.trace_value) best = rb;
    first = false;
  }
  report.branch = best;
  report.value = best.trace_value;
  settle_verdict(report);
  if (fell_back) append_detail(report, "quadratic-form route singular; product route used");
  if (route_gap > 1e-9 * std::max(1.0, std::abs(report.value))) {
    std::ostringstream msg;
    msg << "warning: evaluation routes differ by " << route_gap;
    append_detail(report, msg.str());
  }
  append_detail(report, std::string("dominant branch: ") + branch_name(best.label));
  return report;
}

CriterionReport evolved_photon_criterion_tmsv(double lambda, const ChannelParams& ch, PhotonOp op) {
  const TmsvChannelScalars s = tmsv_scalars(lambda, ch);
  const double l = lambda, l2 = l * l;
  const double pref = 1.0 / (2.0 * (s.n - s.big_lambda) - 1.0);
  const double g = 1.0 / (1.0 - l);
  double value = 0.0;
  if (op == PhotonOp::Add) {
    const double ca = (1.0 - l2) * (1.0 - l2) / (1.0 + l2);
    const double u = l * g + s.q, w = g - s.q;
    value = pref * ca / ((1.0 + l) * (1.0 + l)) * (u * u + w * w);
  } else {
    const double cs = (1.0 - l2) * (1.0 - l2) / (l2 * (1.0 + l2));
    const double u = g + l * s.q, w = g - s.q;
    value = pref * cs * l2 / ((1.0 + l) * (1.0 + l)) * (u * u + l2 * w * w);
  }
  // value - 1 = (1 - d + photon term) / d with d = 2(N - Λ) - 1; every
  // piece carries e^{-x} or ñ(1 - e^{-x}), so late times keep their sign.
  const double e = std::exp(-ch.decay);
  const double loss = 2.0 * l * e / (1.0 + l), noise = 2.0 * ch.nbar * -std::expm1(-ch.decay);
  const double photon = op == PhotonOp::Add ? 2.0 * (1.0 - l) * (1.0 - l) * s.q * (s.q - 1.0) / (1.0 + l2)
                                            : 2.0 * l * (1.0 - l) * (1.0 - l) * s.q * (1.0 + l * s.q) / (1.0 + l2);
  CriterionReport report;
  report.value = value;
  report.gap = pref * (loss - noise + photon);
  report.gap_scale = std::max(pref * (loss + noise + std::abs(photon)), std::numeric_limits<double>::min());
  report.has_branch = true;
  report.branch = {Branch::Plain, pref * pref, value};
  settle_verdict(report);
  return report;
}

CriterionReport second_moment_evolved(double lambda, const ChannelParams& ch, PhotonOp op) {
  require_lambda(lambda);
  const double e = std::exp(-ch.decay), l2 = lambda * lambda;
  const double n_minus = l2 * e / (1.0 - l2) + ch.nbar * (1.0 - e) + 1.0 - lambda * e / (1.0 - l2);
  const double tail = std::pow(1.0 - lambda, 3) * e / (1.0 - l2 * l2);
  CriterionReport report;
  report.value = op == PhotonOp::Add ? n_minus + tail : n_minus - lambda * tail;
  report.threshold = 1.0;
  report.direction = Direction::Below;
  // value - 1 = ñ(1 - e) + e k, kept apart so late times do not round to the threshold.
  const double k = (op == PhotonOp::Add ? 1.0 : -lambda) * std::pow(1.0 - lambda, 3) / (1.0 - l2 * l2) -
                   lambda / (1.0 + lambda);
  const double thermal = ch.nbar * -std::expm1(-ch.decay);
  report.gap = -(thermal + e * k);
  report.gap_scale = std::max(thermal + e * std::abs(k), std::numeric_limits<double>::min());
  settle_verdict(report);
  return report;
}

CriticalTime critical_time(const std::function<CriterionReport(double)>& criterion) {
  auto margin = [&](double x) {
    return signed_gap(criterion(x));
  };
  CriticalTime out;
  std::vector<double> m(kCriticalScan + 1);
  for (int i = 0; i <= kCriticalScan; ++i) m[i] = margin(kCriticalBracket * i / kCriticalScan);
  for (int i = 1; i <= kCriticalScan; ++i)
    if ((m[i] > 0.0) != (m[i - 1] > 0.0)) ++out.sign_changes;
  out.non_monotonic = out.sign_changes > 1;

  if (!(m[0] > 0.0)) {
    out.detected_initially = false;
    out.decay = 0.0;
    return out;
  }
  int first = -1;
  for (int i = 1; i <= kCriticalScan; ++i)
    if (!(m[i] > 0.0)) {
      first = i;
      break;
    }
  if (first < 0) return out;

  double lo = kCriticalBracket * (first - 1) / kCriticalScan;
  double hi = kCriticalBracket * first / kCriticalScan;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (margin(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.decay = 0.5 * (lo + hi);
  return out;
}

TmsvCriterion parse_tmsv_criterion(const std::string& name) {
  if (name == "realign-sub" || name == "realignment-sub" || name == "realign-subtract")
    return TmsvCriterion::RealignSubtract;
  if (name == "realign-add" || name == "realignment-add") return TmsvCriterion::RealignAdd;
  if (name == "second-moment-sub" || name == "second-moment-subtract") return TmsvCriterion::SecondMomentSubtract;
  if (name == "second-moment-add") return TmsvCriterion::SecondMomentAdd;
  throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + name +
                                              "' (expected realign-sub, realign-add, second-moment-sub, "
                                              "second-moment-add)");
}

const char* tmsv_criterion_name(TmsvCriterion c) noexcept {
  switch (c) {
    case TmsvCriterion::RealignSubtract: return "realign-sub";
    case TmsvCriterion::RealignAdd: return "realign-add";
    case TmsvCriterion::SecondMomentSubtract: return "second-moment-sub";
    case TmsvCriterion::SecondMomentAdd: return "second-moment-add";
  }
  return "unknown";
}

CriterionReport evaluate_tmsv_criterion(TmsvCriterion c, double lambda, const ChannelParams& ch) {
  switch (c) {
    case TmsvCriterion::RealignSubtract: return evolved_photon_criterion_tmsv(lambda, ch, PhotonOp::Subtract);
    case TmsvCriterion::RealignAdd: return evolved_photon_criterion_tmsv(lambda, ch, PhotonOp::Add);
    case TmsvCriterion::SecondMomentSubtract: return second_moment_evolved(lambda, ch, PhotonOp::Subtract);
    case TmsvCriterion::SecondMomentAdd: return second_moment_evolved(lambda, ch, PhotonOp::Add);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown criterion");
}

CriticalTime critical_time_tmsv(TmsvCriterion c, double lambda, double nbar) {
  require_lambda(lambda);
  require_nonnegative(nbar, "nbar");
  return critical_time([&](double x) { return evaluate_tmsv_criterion(c, lambda, ChannelParams{x, nbar}); });
}

}  // namespace cvr
