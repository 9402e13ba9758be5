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

#include <cmath>

#include "cvrealign/channel.hpp"
#include "cvrealign/error.hpp"
#include "cvrealign/photon.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cvr;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

double relerr(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("evolve_ccm limits and scalars") {
    const SymmetricCCM s{1.2, -0.3, 0.4};
    CHECK(evolve_ccm(s, ChannelParams::from_decay(0, 0.5)) == s);
    const SymmetricCCM far = evolve_ccm(s, ChannelParams::from_decay(60, 0.7));
    CHECK(far.b0 == doctest::Approx(1.2));
    CHECK(std::abs(far.c1) < 1e-20);
    CHECK(std::abs(far.c2) < 1e-20);

    const ChannelParams ch = ChannelParams::from_decay(std::log(2.0), 0);
    const TmsvChannelScalars sc = tmsv_scalars(0.5, ch);
    CHECK(sc.big_lambda == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(sc.n == doctest::Approx(7.0 / 6).epsilon(1e-14));
    // γ_t' of the evolved squeezed vacuum is {0, -Λ, N, 0}.
    const SymmetricCCM t = evolve_ccm(SymmetricCCM::tmsv(0.5), ch);
    CHECK(max_abs_difference(gamma_prime(t), {0, -sc.big_lambda, sc.n, 0}) < 1e-14);

    CHECK(ChannelParams::from_rate(2.0, 0.25, 0.1).decay == doctest::Approx(0.5));
    CHECK(code_of([] { (void)ChannelParams::from_rate(-1, 1, 0); }) == ErrorCode::DomainError);
    CHECK(code_of([] { (void)ChannelParams::from_decay(1, -0.1); }) == ErrorCode::DomainError);
    CHECK(code_of([] { (void)tmsv_scalars(1.0, {}); }) == ErrorCode::DomainError);
  }

  TEST_CASE("property: evolution is a semigroup and stays physical") {
    oracle::Gen g(61);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto c = g.physical_ccm();
      const SymmetricCCM s{c.b0, c.c1, c.c2};
      const double x1 = g.uniform(0, 3), x2 = g.uniform(0, 3), nb = g.uniform(0, 2);
      const SymmetricCCM two = evolve_ccm(evolve_ccm(s, ChannelParams::from_decay(x1, nb)), ChannelParams::from_decay(x2, nb));
      const SymmetricCCM one = evolve_ccm(s, ChannelParams::from_decay(x1 + x2, nb));
      CHECK(std::abs(two.b0 - one.b0) < 1e-12);
      CHECK(std::abs(two.c1 - one.c1) < 1e-12);
      CHECK(std::abs(two.c2 - one.c2) < 1e-12);
      CHECK(physicality_check(one));
    }
  }

  TEST_CASE("generating-parameter map") {
    const SymmetricCCM t = SymmetricCCM::tmsv(0.5);
    const ChannelParams ch = ChannelParams::from_decay(0.5, 0.3);
    CHECK(evolve_gen_params(GenParams{}, t, ch) == GenParams{});
    oracle::Gen g(62);
    GenParams p;
    for (double& v : p) v = g.uniform(-1, 1);
    const GenParams same = evolve_gen_params(p, t, ChannelParams::from_decay(0, 0.3));
    for (int i = 0; i < 8; ++i) CHECK(same[i] == doctest::Approx(p[i]).epsilon(1e-12));
    for (int trial = 0; trial < 200; ++trial) {
      for (double& v : p) v = g.uniform(-1, 1);
      const auto c = g.physical_ccm();
      const SymmetricCCM s{c.b0, c.c1, c.c2};
      for (const SymmetricCCM& k : {t, s}) {
        const ChannelParams chk = ChannelParams::from_decay(g.uniform(0, 2), g.uniform(0, 1));
        GenParams pt;
        try {
          pt = evolve_gen_params(p, k, chk);
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::SingularMatrix);
          continue;
        }
        CHECK(gen_params_residual(p, pt, k, chk) < 1e-10);
      }
    }
  }

  TEST_CASE("prefactor and reduced-matrix identities for squeezed vacua") {
    for (double l : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      for (double x : {0.05, 0.3, 1.0, 2.5}) {
        for (double nb : {0.0, 0.5, 1.5}) {
          const ChannelParams ch = ChannelParams::from_decay(x, nb);
          const TmsvChannelScalars sc = tmsv_scalars(l, ch);
          const double d = 2 * (sc.n - sc.big_lambda) - 1;
          const SymmetricCCM evolved = evolve_ccm(SymmetricCCM::tmsv(l), ch);
          const Eigen::Matrix4d gt = gamma_prime(evolved).dense();
          const Eigen::Matrix4d grt = realigned_ccm_prime(evolved).dense();
          CHECK(std::sqrt(grt.determinant() / gt.determinant()) == doctest::Approx(1.0 / d).epsilon(1e-12));

          const Eigen::Matrix4d expected = -oracle::basis(0, 1, 1, 0) / d;
          const Eigen::Matrix4d it = oracle::inverse(gt);
          const Eigen::Matrix4d zp = oracle::zprime_perm();
          const Eigen::Matrix4d primed = -it + it * zp * grt * zp * it;
          CHECK((primed - expected).cwiseAbs().maxCoeff() < 1e-10);

          const Eigen::Matrix4d gtpp = gt - oracle::s1_i(), grtpp = grt - oracle::s1_i();
          const Eigen::Matrix4d itt = oracle::inverse(gtpp);
          const Eigen::Matrix4d reduced = -itt + itt * zp * grtpp * zp * itt;
          CHECK((reduced - expected).cwiseAbs().maxCoeff() < 1e-10);
        }
      }
    }
  }

  TEST_CASE("evolution routes agree") {
    oracle::Gen g(63);
    for (int trial = 0; trial < 300; ++trial) {
      const auto c = g.physical_ccm();
      const SymmetricCCM s{c.b0, c.c1, c.c2};
      const ChannelParams ch = ChannelParams::from_decay(g.uniform(0, 2), g.uniform(0, 1));
      const PhotonOp op = trial % 2 ? PhotonOp::Add : PhotonOp::Subtract;
      const DerivativeSpec d = DerivativeSpec::photon(op, 1 + trial % 2);
      double quad = 0;
      try {
        quad = evolved_trace_quadratic(s, d, ch);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularMatrix);
        continue;
      }
      const double prod = evolved_trace_product(s, d, ch);
      CHECK(relerr(quad, prod) < 1e-9);
    }
  }

  TEST_CASE("zero time reproduces the photon criterion") {
    const ChannelParams none = ChannelParams::from_decay(0, 0.5);
    oracle::Gen g(64);
    for (int trial = 0; trial < 100; ++trial) {
      const auto c = g.physical_ccm();
      const SymmetricCCM s{c.b0, c.c1, c.c2};
      for (PhotonOp op : {PhotonOp::Subtract, PhotonOp::Add}) {
        double got = 0;
        try {
          got = evolved_criterion_general(s, DerivativeSpec::photon(op, 1), none).value;
        } catch (const Error&) {
          continue;
        }
        CHECK(relerr(got, photon_pm_criterion(s, op, 1).value) < 1e-9);
      }
    }
    CHECK(evolved_criterion_general(SymmetricCCM::tmsv(0.5), DerivativeSpec::photon(PhotonOp::Subtract, 1), none).value ==
          doctest::Approx(5.4).epsilon(1e-10));
    CHECK(evolved_photon_criterion_tmsv(0.5, none, PhotonOp::Subtract).value == doctest::Approx(5.4).epsilon(1e-12));
    CHECK(evolved_photon_criterion_tmsv(0.5, none, PhotonOp::Add).value == doctest::Approx(5.4).epsilon(1e-12));
    CHECK(evolved_photon_criterion_tmsv(1e-6, none, PhotonOp::Add).value == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("closed forms for squeezed vacua") {
    const double l = 0.5;
    const ChannelParams ch = ChannelParams::from_decay(0.3, 0.5);
    const TmsvChannelScalars sc = tmsv_scalars(l, ch);
    const double d = 2 * (sc.n - sc.big_lambda) - 1, q = sc.q;
    const double cs = std::pow(1 - l * l, 2) / (l * l * (1 + l * l)), ca = std::pow(1 - l * l, 2) / (1 + l * l);
    const double sub = cs * l * l / std::pow(1 + l, 2) / d *
                       (std::pow(1 / (1 - l) + l * q, 2) + l * l * std::pow(1 / (1 - l) - q, 2));
    const double add = ca / std::pow(1 + l, 2) / d * (std::pow(l / (1 - l) + q, 2) + std::pow(1 / (1 - l) - q, 2));
    CHECK(q == doctest::Approx(std::exp(-0.3) / ((1 + l) * d)).epsilon(1e-14));
    CHECK(evolved_photon_criterion_tmsv(l, ch, PhotonOp::Subtract).value == doctest::Approx(sub).epsilon(1e-12));
    CHECK(evolved_photon_criterion_tmsv(l, ch, PhotonOp::Add).value == doctest::Approx(add).epsilon(1e-12));
    const SymmetricCCM t = SymmetricCCM::tmsv(l);
    CHECK(relerr(evolved_criterion_general(t, DerivativeSpec::photon(PhotonOp::Subtract, 1), ch).value, sub) < 1e-9);
    CHECK(relerr(evolved_criterion_general(t, DerivativeSpec::photon(PhotonOp::Add, 1), ch).value, add) < 1e-9);
    CHECK(code_of([] { (void)evolved_photon_criterion_tmsv(0.0, {}, PhotonOp::Add); }) == ErrorCode::DomainError);
  }

  TEST_CASE("second-moment criterion") {
    const CriterionReport r = second_moment_evolved(0.5, {}, PhotonOp::Add);
    CHECK(r.value == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(r.entangled);
    CHECK(r.direction == Direction::Below);
    for (double x = 0; x < 40; x += 0.37) CHECK(second_moment_evolved(0.5, ChannelParams::from_decay(x, 0), PhotonOp::Add).entangled);
    const CriterionReport late = second_moment_evolved(0.5, ChannelParams::from_decay(45, 0.5), PhotonOp::Add);
    CHECK(late.value == doctest::Approx(1.5).epsilon(1e-12));
    CHECK_FALSE(late.entangled);
    CHECK(code_of([] { (void)second_moment_evolved(1.2, {}, PhotonOp::Subtract); }) == ErrorCode::DomainError);
  }

  TEST_CASE("critical times") {
    const CriticalTime a = critical_time_tmsv(TmsvCriterion::SecondMomentAdd, 0.5, 0.5);
    REQUIRE(a.decay.has_value());
    CHECK(std::abs(*a.decay - std::log(1.4)) < 1e-8);
    CHECK_FALSE(critical_time_tmsv(TmsvCriterion::SecondMomentAdd, 0.5, 0.0).decay.has_value());

    const CriticalTime r = critical_time_tmsv(TmsvCriterion::RealignSubtract, 0.5, 0.5);
    REQUIRE(r.decay.has_value());
    CHECK(r.detected_initially);
    const double v = evaluate_tmsv_criterion(TmsvCriterion::RealignSubtract, 0.5, ChannelParams::from_decay(*r.decay, 0.5)).value;
    CHECK(std::abs(v - 1.0) < 1e-8);

    // A criterion that never detects reports a zero time.
    const CriticalTime never = critical_time([](double) {
      CriterionReport rep;
      rep.value = 0.5;
      settle_verdict(rep);
      return rep;
    });
    REQUIRE(never.decay.has_value());
    CHECK(*never.decay == 0.0);
    CHECK_FALSE(never.detected_initially);

    const CriticalTime wobble = critical_time([](double x) {
      CriterionReport rep;
      rep.value = 1.0 + std::cos(x);
      settle_verdict(rep);
      return rep;
    });
    CHECK(wobble.non_monotonic);
    REQUIRE(wobble.decay.has_value());
    CHECK(*wobble.decay == doctest::Approx(M_PI / 2).epsilon(1e-9));
  }

  TEST_CASE("criterion names") {
    CHECK(parse_tmsv_criterion("realign-sub") == TmsvCriterion::RealignSubtract);
    CHECK(parse_tmsv_criterion("second-moment-add") == TmsvCriterion::SecondMomentAdd);
    CHECK(code_of([] { (void)parse_tmsv_criterion("bogus"); }) == ErrorCode::InvalidArgument);
    for (TmsvCriterion c : {TmsvCriterion::RealignSubtract, TmsvCriterion::RealignAdd, TmsvCriterion::SecondMomentSubtract,
                            TmsvCriterion::SecondMomentAdd})
      CHECK(parse_tmsv_criterion(tmsv_criterion_name(c)) == c);
  }

  TEST_CASE("singular double-primed kernels are refused by the quadratic route") {
    const ChannelParams ch = ChannelParams::from_decay(0.3, 0.2);
    const DerivativeSpec d = DerivativeSpec::photon(PhotonOp::Subtract, 1);
    CHECK(code_of([&] { (void)evolved_trace_quadratic(SymmetricCCM::vacuum(), d, ch); }) == ErrorCode::SingularMatrix);
    CHECK(code_of([&] { (void)evolved_trace_quadratic({0.9, -0.5, 0.1}, d, ch); }) == ErrorCode::SingularMatrix);
    CHECK(code_of([&] { (void)evolved_trace_quadratic({2.0, 1.1, -0.4}, d, ch); }) == ErrorCode::SingularMatrix);
    // The general evaluator falls back to the product route and says so.
    const CriterionReport r = evolved_criterion_general({0.9, -0.5, 0.1}, d, ch);
    CHECK(std::isfinite(r.value));
    CHECK_FALSE(r.detail.empty());
  }

  TEST_CASE("late-time verdicts do not round onto the threshold") {
    for (double l : {0.2, 0.5, 0.8})
      for (double x : {0.0, 0.5, 2.0, 5.0})
        for (double nb : {0.0, 0.4})
          for (PhotonOp op : {PhotonOp::Subtract, PhotonOp::Add}) {
            const ChannelParams ch = ChannelParams::from_decay(x, nb);
            const CriterionReport r = evolved_photon_criterion_tmsv(l, ch, op);
            REQUIRE(r.gap.has_value());
            CHECK(std::abs((r.value - 1.0) - *r.gap) < 1e-12);
            const CriterionReport m = second_moment_evolved(l, ch, op);
            REQUIRE(m.gap.has_value());
            CHECK(std::abs((1.0 - m.value) - *m.gap) < 1e-12);
          }
    // Pure loss never destroys these states' detectability.
    for (TmsvCriterion c : {TmsvCriterion::RealignSubtract, TmsvCriterion::RealignAdd}) {
      const CriticalTime t = critical_time_tmsv(c, 0.5, 0.0);
      CHECK(t.detected_initially);
      CHECK_FALSE(t.decay.has_value());
    }
    CHECK(evaluate_tmsv_criterion(TmsvCriterion::RealignSubtract, 0.5, ChannelParams::from_decay(45, 0)).entangled);
  }
}
