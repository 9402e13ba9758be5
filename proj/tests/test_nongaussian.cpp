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

#include "cvrealign/error.hpp"
#include "cvrealign/fock.hpp"
#include "cvrealign/photon.hpp"
#include "cvrealign/quadratic.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cvr;

namespace {

SigmaBasisMatrix random_basis(oracle::Gen& g, double scale) {
  return {g.uniform(-scale, scale), g.uniform(-scale, scale), g.uniform(-scale, scale), g.uniform(-scale, scale)};
}

double subtract_tmsv_t0(double l) { return std::pow(1 + l, 3) / ((1 + l * l) * (1 - l)); }

}  // namespace

TEST_SUITE("moment engine") {
  TEST_CASE("empty multi-index gives exp(c0)") {
    QuadraticExponent q(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(3), 0.7);
    CHECK(gaussian_moment(q, {0, 0, 0}) == doctest::Approx(std::exp(0.7)));
  }

  TEST_CASE("f(1, V) is the three-pairing sum") {
    oracle::Gen g(41);
    for (int trial = 0; trial < 100; ++trial) {
      const SigmaBasisMatrix v = random_basis(g, 2.0);
      const Eigen::Matrix4d a = -oracle::basis(v.v1, v.v2, v.v3, v.v4);
      const double three = a(0, 1) * a(2, 3) + a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
      CHECK(f_moment(1, v) == doctest::Approx(three).epsilon(1e-12));
      CHECK(f_moment(1, v) == doctest::Approx(v.v2 * v.v2 + v.v3 * v.v3 + v.v4 * v.v4).epsilon(1e-12));
    }
  }

  TEST_CASE("f(2, V) closed form") {
    CHECK(f2_closed_form(SigmaBasisMatrix::identity()) == doctest::Approx(1.0));
    CHECK(f_moment(2, SigmaBasisMatrix::identity()) == doctest::Approx(1.0));
    CHECK(f2_closed_form({0, 1, 0, 0}) == doctest::Approx(4.0));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
    CHECK(oracle::pairing_sum(-oracle::basis(0, 1, 0, 0), zero, {2, 2, 2, 2}) == doctest::Approx(4.0));
    oracle::Gen g(42);
    for (int trial = 0; trial < 100; ++trial) {
      const SigmaBasisMatrix v = random_basis(g, 1.5);
      const double ref = f2_closed_form(v);
      CHECK(std::abs(f_moment(2, v) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }

  TEST_CASE("gaussian_moment equals brute-force pairing enumeration") {
    oracle::Gen g(43);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = g.integer(1, 5);
      const Eigen::MatrixXd a = g.symmetric(n, 1.0);
      Eigen::VectorXd l(n);
      for (int i = 0; i < n; ++i) l[i] = g.uniform(-1, 1);
      std::vector<int> idx(n);
      int total = 0;
      for (int i = 0; i < n; ++i) total += idx[i] = g.integer(0, 8 / n + 1);
      if (total > 9) continue;
      const double ref = oracle::pairing_sum(a, l, idx);
      const double got = gaussian_moment(QuadraticExponent(a, l), idx);
      CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }

  TEST_CASE("order guard") {
    QuadraticExponent q(Eigen::MatrixXd::Identity(2, 2));
    CHECK_NOTHROW(gaussian_moment(q, {12, 12}));
    try {
      (void)gaussian_moment(q, {13, 12});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OverflowGuard);
    }
  }

  TEST_CASE("derivative specs") {
    const DerivativeSpec s = DerivativeSpec::photon(PhotonOp::Subtract, 2);
    CHECK(s.orders == std::array<int, 8>{0, 0, 2, 2, 2, 2, 0, 0});
    CHECK(s.total_order() == 8);
    CHECK(s.mode2_order() == 4);
    CHECK(DerivativeSpec::photon(PhotonOp::Add, 1).orders == std::array<int, 8>{1, 1, 0, 0, 0, 0, 1, 1});
    CHECK_THROWS_AS(DerivativeSpec::photon(PhotonOp::Add, 7), Error);
  }
}

TEST_SUITE("nongaussian") {
  TEST_CASE("realigned gamma' closed form") {
    CHECK(max_abs_difference(realigned_ccm_prime(SymmetricCCM::vacuum()), {0, 0, 1, 0}) < 1e-15);
    for (const SymmetricCCM s : {SymmetricCCM::tmsv(0.5), SymmetricCCM{1.2, 0.3, 0.4}}) {
      const SigmaBasisMatrix viaInverse = realigned_inverse(s, Branch::Plain).inverse();
      CHECK(max_abs_difference(realigned_ccm_prime(s), viaInverse) < 1e-10);
    }
    oracle::Gen g(44);
    for (int trial = 0; trial < 500; ++trial) {
      const auto c = g.physical_ccm();
      const SymmetricCCM s{c.b0, c.c1, c.c2};
      const SigmaBasisMatrix viaInverse = realigned_inverse(s, Branch::Plain).inverse();
      CHECK(max_abs_difference(realigned_ccm_prime(s), viaInverse) < 1e-10 * std::max(1.0, branch_tau(s, Branch::Plain)));
    }
    try {
      (void)realigned_ccm_prime({1.0, -0.5, 0.5});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateState);
    }
  }

  TEST_CASE("single-photon closed form equals the moment route") {
    oracle::Gen g(45);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto c = g.physical_ccm();
      const SymmetricCCM s{c.b0, c.c1, c.c2};
      for (PhotonOp op : {PhotonOp::Subtract, PhotonOp::Add}) {
        const double closed = photon_opr_closed_form(s, op);
        CHECK(std::abs(photon_opr_moment(s, op, 1) - closed) <= 1e-10 * std::max(1.0, std::abs(closed)));
      }
    }
  }

  TEST_CASE("subtracted and added squeezed vacuum") {
    const SymmetricCCM t = SymmetricCCM::tmsv(0.5);
    const CriterionReport sub = photon_pm_criterion(t, PhotonOp::Subtract, 1);
    CHECK(sub.value == doctest::Approx(5.4).epsilon(1e-12));
    CHECK(sub.value == doctest::Approx(subtract_tmsv_t0(0.5)).epsilon(1e-12));
    CHECK(sub.entangled);
    CHECK(photon_pm_criterion(t, PhotonOp::Add, 1).value == doctest::Approx(5.4).epsilon(1e-12));

    const CriterionReport add2 = photon_pm_criterion(t, PhotonOp::Add, 2);
    CHECK(add2.value > 1.0);
    const FockTensor f = gaussian_fock(t, 40);
    const PhotonFock pf = apply_photon_ops(f, PhotonOp::Add, 2);
    CHECK(realign_and_trace_norm(pf.state).trace_norm == doctest::Approx(add2.value).epsilon(1e-6));
  }

  TEST_CASE("parity branch is used for c1 > 0 kernels") {
    // The kernel (b0, -c1, 0) is the squeezed vacuum with λ -> -λ.
    const SymmetricCCM t = SymmetricCCM::tmsv(0.5).parity_flipped();
    const CriterionReport r = photon_pm_criterion(t, PhotonOp::Subtract, 1);
    CHECK(r.branch.label == Branch::PiAppended);
    CHECK(r.value == doctest::Approx(5.4).epsilon(1e-12));
    const PhotonFock pf = apply_photon_ops(gaussian_fock(t, 40), PhotonOp::Subtract, 1);
    CHECK(realign_and_trace_norm(pf.state).trace_norm == doctest::Approx(5.4).epsilon(1e-6));
  }

  TEST_CASE("normalizations match geometric series") {
    const double l = 0.5;
    const SymmetricCCM t = SymmetricCCM::tmsv(l);
    CHECK(1.0 / photon_normalization(t, PhotonOp::Subtract, 1) == doctest::Approx(oracle::tmsv_subtracted_norm(l)).epsilon(1e-12));
    CHECK(1.0 / photon_normalization(t, PhotonOp::Add, 1) == doctest::Approx(oracle::tmsv_added_norm(l)).epsilon(1e-12));
    const double c_s = std::pow(1 - l * l, 2) / (l * l * (1 + l * l)), c_a = std::pow(1 - l * l, 2) / (1 + l * l);
    CHECK(photon_normalization(t, PhotonOp::Subtract, 1) == doctest::Approx(c_s).epsilon(1e-12));
    CHECK(photon_normalization(t, PhotonOp::Add, 1) == doctest::Approx(c_a).epsilon(1e-12));
    // General m against the truncated Fock trace.
    for (int m : {2, 3}) {
      const PhotonFock pf = apply_photon_ops(gaussian_fock(t, 48), PhotonOp::Subtract, m);
      CHECK(1.0 / photon_normalization(t, PhotonOp::Subtract, m) == doctest::Approx(pf.raw_trace).epsilon(1e-6));
    }
  }

  TEST_CASE("tau = 1 kernels give exactly one") {
    oracle::Gen g(46);
    int done = 0;
    while (done < 200) {
      const double b0 = g.uniform(0.5, 3.0), c2 = g.uniform(-1.0, 1.0);
      const double c1 = -b0 + std::sqrt(0.25 + c2 * c2);
      if (!oracle::physical(b0, c1, c2)) continue;
      ++done;
      const SymmetricCCM s{b0, c1, c2};
      CHECK(branch_tau(s, Branch::Plain) == doctest::Approx(1.0).epsilon(1e-12));
      for (PhotonOp op : {PhotonOp::Subtract, PhotonOp::Add}) {
        CHECK(photon_opr_closed_form(s, op) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(photon_branch(s, op, 1, Branch::Plain).trace_value == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("property: separable kernels give separable photon states") {
    oracle::Gen g(47);
    int checked = 0;
    for (int trial = 0; trial < 20000 && checked < 3000; ++trial) {
      const auto c = g.physical_ccm();
      const SymmetricCCM s{c.b0, c.c1, c.c2};
      if (branch_tau(s, Branch::Plain) > 1.0 || branch_tau(s, Branch::PiAppended) > 1.0) continue;
      ++checked;
      for (PhotonOp op : {PhotonOp::Subtract, PhotonOp::Add}) {
        CHECK(photon_pm_criterion(s, op, 1).value <= 1.0 + 1e-9);
        CHECK(photon_pm_criterion(s, op, 2).value <= 1.0 + 1e-9);
      }
    }
    CHECK(checked > 100);
  }

  TEST_CASE("property: value grows past the tau = 1 limit along the squeezed-vacuum family") {
    double prev = 1.0;
    for (int i = 1; i < 95; ++i) {
      const double l = 0.01 * i;
      const double v = photon_pm_criterion(SymmetricCCM::tmsv(l), PhotonOp::Subtract, 1).value;
      CHECK(v > 1.0);
      CHECK(v > prev);
      prev = v;
    }
  }

  TEST_CASE("mixture criteria examples") {
    const MixtureCriteria a = mixture_criteria(-0.3, 0.2, 0.4);
    CHECK(a.second_moment.value == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_FALSE(a.second_moment.entangled);
    CHECK(a.fock.value == doctest::Approx(-0.06));
    CHECK(a.fock.entangled);
    CHECK(a.realignment.value == doctest::Approx(-0.12));
    CHECK(a.realignment.entangled);

    const MixtureCriteria b = mixture_criteria(-0.3, 0.2, 0.5);
    CHECK(b.second_moment.value == doctest::Approx(-0.05));
    CHECK(b.fock.value == doctest::Approx(-0.11));
    CHECK(b.realignment.value == doctest::Approx(-0.17));
    CHECK((b.second_moment.entangled && b.fock.entangled && b.realignment.entangled));

    const MixtureCriteria c = mixture_criteria(-0.2, 0.7, 1.0);
    CHECK(c.second_moment.value == doctest::Approx(-0.2));
    CHECK(c.second_moment.entangled);
    CHECK(c.fock.entangled);
    CHECK(c.realignment.entangled);

    const MixtureCriteria d = mixture_criteria(0.3, 0.2, 0.5);
    CHECK(d.realignment.detail.find("warning") != std::string::npos);
    CHECK_THROWS_AS(mixture_criteria(-0.3, 0.2, 1.2), Error);
  }

  TEST_CASE("property: detection sets are nested") {
    oracle::Gen g(48);
    for (int trial = 0; trial < 5000; ++trial) {
      const MixtureCriteria m = mixture_criteria(g.uniform(-0.5, 0.0), g.uniform(0.0, 1.0), g.uniform(0.0, 1.0));
      if (m.second_moment.entangled) CHECK(m.fock.entangled);
      if (m.fock.entangled) CHECK(m.realignment.entangled);
    }
  }
}
