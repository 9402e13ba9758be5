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

#include "cvrealign/sigma_basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cvrealign/error.hpp"

namespace cvr {

namespace {

// Sign patterns (s1, s2) in eigenvalue order.
constexpr std::array<std::array<double, 2>, 4> kSigns = {{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

}  // namespace

SigmaBasisMatrix SigmaBasisMatrix::from_eigenvalues(const std::array<double, 4>& ev) {
  SigmaBasisMatrix out;
  for (std::size_t i = 0; i < 4; ++i) {
    const double s1 = kSigns[i][0];
    const double s2 = kSigns[i][1];
    out.v1 += ev[i];
    out.v2 += s2 * ev[i];
    out.v3 += s1 * ev[i];
    out.v4 += s1 * s2 * ev[i];
  }
  return 0.25 * out;
}

std::array<double, 4> SigmaBasisMatrix::eigenvalues() const {
  std::array<double, 4> ev{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double s1 = kSigns[i][0];
    const double s2 = kSigns[i][1];
    ev[i] = v1 + v2 * s2 + v3 * s1 + v4 * s1 * s2;
  }
  return ev;
}

double SigmaBasisMatrix::determinant() const {
  const auto ev = eigenvalues();
  return ev[0] * ev[1] * ev[2] * ev[3];
}

double SigmaBasisMatrix::min_abs_eigenvalue() const {
  const auto ev = eigenvalues();
  double m = std::abs(ev[0]);
  for (double e : ev) m = std::min(m, std::abs(e));
  return m;
}

SigmaBasisMatrix SigmaBasisMatrix::inverse() const {
  auto ev = eigenvalues();
  for (double& e : ev) {
    if (std::abs(e) < kSingularTol) {
      std::ostringstream msg;
      msg << "sigma-basis matrix {" << v1 << ", " << v2 << ", " << v3 << ", " << v4
          << "} is singular (eigenvalue " << e << ")";
      throw Error(ErrorCode::SingularMatrix, msg.str());
    }
    e = 1.0 / e;
  }
  return from_eigenvalues(ev);
}

Eigen::Matrix4d SigmaBasisMatrix::dense() const {
  Eigen::Matrix4d m;
  // clang-format off
  m << v1, v2, v3, v4,
       v2, v1, v4, v3,
       v3, v4, v1, v2,
       v4, v3, v2, v1;
  // clang-format on
  return m;
}

SigmaBasisMatrix operator*(const SigmaBasisMatrix& a, const SigmaBasisMatrix& b) {
  const auto ea = a.eigenvalues();
  const auto eb = b.eigenvalues();
  std::array<double, 4> ev{};
  for (std::size_t i = 0; i < 4; ++i) ev[i] = ea[i] * eb[i];
  return SigmaBasisMatrix::from_eigenvalues(ev);
}

double max_abs_difference(const SigmaBasisMatrix& a, const SigmaBasisMatrix& b) {
  return std::max({std::abs(a.v1 - b.v1), std::abs(a.v2 - b.v2), std::abs(a.v3 - b.v3),
                   std::abs(a.v4 - b.v4)});
}

}  // namespace cvr
