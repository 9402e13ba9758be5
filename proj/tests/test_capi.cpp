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
#include <cstring>
#include <filesystem>
#include <string>
#include <thread>

#include "cvrealign/cvrealign.h"
#include "doctest.h"

extern "C" int cvr_c_header_smoke(void);

TEST_CASE("header is usable from C") { CHECK(cvr_c_header_smoke() == 1); }

TEST_CASE("version and status names") {
  CHECK(std::string(cvr_version()) == "1.0.0");
  CHECK(std::string(cvr_status_name(CVR_OK)) == "Ok");
  CHECK(std::string(cvr_status_name(CVR_ERR_SINGULAR_MATRIX)) == "SingularMatrix");
  CHECK(std::string(cvr_status_name(CVR_ERR_IO)) == "Io");
  CHECK(std::string(cvr_status_name(CVR_ERR_INTERNAL)) == "Internal");
}

TEST_CASE("gaussian entry points") {
  cvr_ccm t{};
  REQUIRE(cvr_tmsv_ccm(0.5, &t) == CVR_OK);
  CHECK(t.b0 == doctest::Approx(5.0 / 6));
  CHECK(t.c1 == doctest::Approx(-2.0 / 3));
  cvr_report r{};
  REQUIRE(cvr_gaussian_criterion(&t, &r) == CVR_OK);
  CHECK(r.value == doctest::Approx(3.0));
  CHECK(r.entangled == 1);
  CHECK(r.above == 1);
  CHECK(r.branch == CVR_BRANCH_PLAIN);
  CHECK(r.has_product == 1);

  const cvr_ccm vac{0.5, 0, 0};
  REQUIRE(cvr_gaussian_criterion(&vac, &r) == CVR_OK);
  CHECK(r.boundary == 1);
  CHECK(r.entangled == 0);

  int flag = -1;
  REQUIRE(cvr_physicality_check(&t, &flag) == CVR_OK);
  CHECK(flag == 1);
  REQUIRE(cvr_simon_ppt_check(&t, &flag) == CVR_OK);
  CHECK(flag == 0);
  cvr_ccm mix{};
  REQUIRE(cvr_mixture_ccm(0.5, &t, &vac, &mix) == CVR_OK);
  CHECK(mix.b0 == doctest::Approx(2.0 / 3));
  CHECK(mix.c1 == doctest::Approx(-1.0 / 3));

  REQUIRE(cvr_gaussian_criterion_nonsymmetric(5.0 / 6, 5.0 / 6, -2.0 / 3, 0, &r) == CVR_OK);
  CHECK(r.value == doctest::Approx(3.0));
}

TEST_CASE("errors are reported through status and last_error") {
  cvr_ccm t{};
  CHECK(cvr_tmsv_ccm(1.5, &t) != CVR_OK);
  CHECK(std::strlen(cvr_last_error()) > 0);
  cvr_report r{};
  CHECK(cvr_gaussian_criterion(nullptr, &r) == CVR_ERR_INVALID_ARGUMENT);
  CHECK(cvr_gaussian_criterion(&t, nullptr) == CVR_ERR_INVALID_ARGUMENT);
  CHECK(cvr_gaussian_criterion_nonsymmetric(0.3, 1.0, 0, 0, &r) == CVR_ERR_DOMAIN);
  CHECK(std::string(cvr_last_error()).size() > 0);
  const cvr_ccm t5{5.0 / 6, -2.0 / 3, 0};
  CHECK(cvr_photon_criterion(&t5, CVR_ADD, 9, &r) == CVR_ERR_INVALID_ARGUMENT);
  cvr_report three[3];
  CHECK(cvr_mixture_criteria(-0.3, 0.2, 2.0, three) == CVR_ERR_DOMAIN);
  cvr_channel ch{};
  CHECK(cvr_channel_from_rate(-1, 1, 0, &ch) == CVR_ERR_DOMAIN);
  cvr_tmsv_criterion c{};
  CHECK(cvr_parse_tmsv_criterion("nope", &c) == CVR_ERR_INVALID_ARGUMENT);
  CHECK(cvr_parse_tmsv_criterion(nullptr, &c) == CVR_ERR_INVALID_ARGUMENT);

  // A successful call clears the message.
  REQUIRE(cvr_tmsv_ccm(0.5, &t) == CVR_OK);
  CHECK(std::string(cvr_last_error()).empty());

  // The message is per thread.
  std::string other;
  std::thread th([&] {
    cvr_ccm x{};
    (void)cvr_tmsv_ccm(2.0, &x);
    other = cvr_last_error();
  });
  th.join();
  CHECK_FALSE(other.empty());
  CHECK(std::string(cvr_last_error()).empty());
}

TEST_CASE("photon, mixture and channel entry points") {
  const cvr_ccm t{5.0 / 6, -2.0 / 3, 0};
  cvr_report r{};
  REQUIRE(cvr_photon_criterion(&t, CVR_SUBTRACT, 1, &r) == CVR_OK);
  CHECK(r.value == doctest::Approx(5.4));
  double c = 0;
  REQUIRE(cvr_photon_normalization(&t, CVR_ADD, 1, &c) == CVR_OK);
  CHECK(c == doctest::Approx(0.5625 / 1.25));

  cvr_report three[3];
  REQUIRE(cvr_mixture_criteria(-0.3, 0.2, 0.4, three) == CVR_OK);
  CHECK(three[0].entangled == 0);
  CHECK(three[1].value == doctest::Approx(-0.06));
  CHECK(three[2].value == doctest::Approx(-0.12));
  CHECK(three[2].above == 0);

  cvr_channel ch{};
  REQUIRE(cvr_channel_from_rate(2.0, 0.15, 0.5, &ch) == CVR_OK);
  CHECK(ch.decay == doctest::Approx(0.3));
  cvr_ccm e{};
  REQUIRE(cvr_evolve_ccm(&t, &ch, &e) == CVR_OK);
  CHECK(e.c1 == doctest::Approx(-2.0 / 3 * std::exp(-0.3)));

  const int sub[8] = {0, 0, 1, 1, 1, 1, 0, 0};
  cvr_report general{}, closed{};
  REQUIRE(cvr_evolved_criterion_general(&t, sub, &ch, &general) == CVR_OK);
  cvr_tmsv_criterion crit{};
  REQUIRE(cvr_parse_tmsv_criterion("realign-sub", &crit) == CVR_OK);
  CHECK(crit == CVR_REALIGN_SUB);
  CHECK(std::string(cvr_tmsv_criterion_name(crit)) == "realign-sub");
  REQUIRE(cvr_evaluate_tmsv_criterion(crit, 0.5, &ch, &closed) == CVR_OK);
  CHECK(general.value == doctest::Approx(closed.value).epsilon(1e-9));

  cvr_critical_time ct{};
  REQUIRE(cvr_critical_time_tmsv(CVR_SECOND_MOMENT_ADD, 0.5, 0.5, &ct) == CVR_OK);
  CHECK(ct.found == 1);
  CHECK(ct.decay == doctest::Approx(std::log(1.4)).epsilon(1e-10));
  REQUIRE(cvr_critical_time_tmsv(CVR_SECOND_MOMENT_ADD, 0.5, 0.0, &ct) == CVR_OK);
  CHECK(ct.found == 0);
}

TEST_CASE("fock handle lifecycle") {
  const cvr_ccm t{5.0 / 6, -2.0 / 3, 0};
  cvr_fock* g = nullptr;
  REQUIRE(cvr_fock_gaussian(&t, 30, &g) == CVR_OK);
  REQUIRE(g != nullptr);
  int cutoff = 0;
  REQUIRE(cvr_fock_cutoff(g, &cutoff) == CVR_OK);
  CHECK(cutoff == 30);
  double x = 0;
  REQUIRE(cvr_fock_element(g, 1, 1, 0, 0, &x) == CVR_OK);
  CHECK(x == doctest::Approx(0.75 * 0.5));
  CHECK(cvr_fock_element(g, 31, 0, 0, 0, &x) == CVR_ERR_INVALID_ARGUMENT);

  cvr_fock* s = nullptr;
  double raw = 0;
  REQUIRE(cvr_fock_photon(g, CVR_SUBTRACT, 1, &s, &raw) == CVR_OK);
  CHECK(raw == doctest::Approx(1.0 / 1.8));
  cvr_realigned_norms n{};
  REQUIRE(cvr_fock_realigned_norms(s, &n) == CVR_OK);
  CHECK(n.trace_norm == doctest::Approx(5.4).epsilon(1e-5));

  const cvr_channel ch{0.3, 0.0};
  cvr_fock* ev = nullptr;
  REQUIRE(cvr_fock_evolve(s, &ch, &ev) == CVR_OK);
  cvr_fock* joint = nullptr;
  const int sub[8] = {0, 0, 1, 1, 1, 1, 0, 0};
  REQUIRE(cvr_fock_joint(&t, sub, &ch, 20, &joint, nullptr) == CVR_OK);
  double a = 0, b = 0;
  REQUIRE(cvr_fock_element(ev, 2, 2, 1, 1, &a) == CVR_OK);
  REQUIRE(cvr_fock_element(joint, 2, 2, 1, 1, &b) == CVR_OK);
  CHECK(a == doctest::Approx(b).epsilon(1e-8));
  cvr_moments m{};
  REQUIRE(cvr_fock_moments(g, &m) == CVR_OK);
  CHECK(m.c1 == doctest::Approx(-2.0 / 3).epsilon(1e-8));
  double tr = 0;
  REQUIRE(cvr_fock_trace(ev, &tr) == CVR_OK);
  CHECK(tr == doctest::Approx(1.0).epsilon(1e-10));

  const std::string path = (std::filesystem::temp_directory_path() / "cvrealign_capi_test.bin").string();
  REQUIRE(cvr_fock_save(s, path.c_str()) == CVR_OK);
  cvr_fock* back = nullptr;
  REQUIRE(cvr_fock_load(path.c_str(), &back) == CVR_OK);
  REQUIRE(cvr_fock_element(back, 3, 3, 2, 2, &a) == CVR_OK);
  REQUIRE(cvr_fock_element(s, 3, 3, 2, 2, &b) == CVR_OK);
  CHECK(a == b);
  std::filesystem::remove(path);
  cvr_fock* missing = nullptr;
  CHECK(cvr_fock_load(path.c_str(), &missing) == CVR_ERR_IO);
  CHECK(missing == nullptr);

  cvr_fock* vac = nullptr;
  const cvr_ccm v{0.5, 0, 0};
  REQUIRE(cvr_fock_gaussian(&v, 4, &vac) == CVR_OK);
  cvr_fock* dead = nullptr;
  CHECK(cvr_fock_photon(vac, CVR_SUBTRACT, 1, &dead, nullptr) == CVR_ERR_ZERO_STATE);
  CHECK(cvr_fock_photon(vac, CVR_ADD, 3, &dead, nullptr) == CVR_ERR_CUTOFF_TOO_SMALL);
  CHECK(dead == nullptr);
  CHECK(cvr_fock_trace(nullptr, &tr) == CVR_ERR_INVALID_ARGUMENT);

  for (cvr_fock* f : {g, s, ev, joint, back, vac}) cvr_fock_free(f);
  cvr_fock_free(nullptr);
}
