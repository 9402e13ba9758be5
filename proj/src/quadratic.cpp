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

#include "cvrealign/quadratic.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "cvrealign/error.hpp"

namespace cvr {

QuadraticExponent::QuadraticExponent(Eigen::MatrixXd a)
    : A(std::move(a)), L(Eigen::VectorXd::Zero(A.rows())) {}

QuadraticExponent::QuadraticExponent(Eigen::MatrixXd a, Eigen::VectorXd l, double c)
    : A(std::move(a)), L(std::move(l)), c0(c) {}

double gaussian_moment(const QuadraticExponent& q, const std::vector<int>& idx) {
  const int n = q.size();
  if (q.A.cols() != n || q.L.size() != n || static_cast<int>(idx.size()) != n)
    throw Error(ErrorCode::InvalidArgument, "gaussian_moment: dimension mismatch");
  int total = 0;
  for (int k : idx) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "gaussian_moment: negative order");
    total += k;
  }
  if (total > kMaxMomentOrder) {
    std::ostringstream msg;
    msg << "derivative order " << total << " exceeds the limit " << kMaxMomentOrder;
    throw Error(ErrorCode::OverflowGuard, msg.str());
  }

  // Dense table over the box 0..idx in mixed radix. Every sub-index used by
  // the recurrence has a smaller flat position, so one forward pass suffices.
  std::vector<std::size_t> stride(n);
  std::size_t box = 1;
  for (int i = n - 1; i >= 0; --i) {
    stride[i] = box;
    box *= static_cast<std::size_t>(idx[i] + 1);
  }
  std::vector<double> table(box, 0.0);
  std::vector<int> cur(n, 0);
  table[0] = 1.0;
  for (std::size_t pos = 1; pos < box; ++pos) {
    for (int i = n - 1; i >= 0; --i) {
      if (++cur[i] <= idx[i]) break;
      cur[i] = 0;
    }
    int lead = 0;
    while (cur[lead] == 0) ++lead;
    const std::size_t prev = pos - stride[lead];
    --cur[lead];
    double s = q.L[lead] * table[prev];
    for (int j = 0; j < n; ++j) {
      if (cur[j] > 0 && q.A(lead, j) != 0.0) s += q.A(lead, j) * cur[j] * table[prev - stride[j]];
    }
    ++cur[lead];
    table[pos] = s;
  }
  return table[box - 1] * std::exp(q.c0);
}

double f_moment(int m, const SigmaBasisMatrix& v) {
  if (m < 0) throw Error(ErrorCode::InvalidArgument, "f_moment: negative order");
  return gaussian_moment(QuadraticExponent(Eigen::MatrixXd(-v.dense())), {m, m, m, m});
}

double f2_closed_form(const SigmaBasisMatrix& v) {
  const double a = v.v1 * v.v1, b = v.v2 * v.v2, c = v.v3 * v.v3, d = v.v4 * v.v4;
  const double head = a + 2.0 * (b + c + d);
  return head * head + 32.0 * v.v1 * v.v2 * v.v3 * v.v4 + 8.0 * (b * c + b * d + c * d);
}

const char* photon_op_name(PhotonOp op) noexcept { return op == PhotonOp::Subtract ? "subtract" : "add"; }

DerivativeSpec DerivativeSpec::photon(PhotonOp op, int m) {
  if (m < 1 || m > kMaxPhotonNumber) {
    std::ostringstream msg;
    msg << "photon number must lie in 1.." << kMaxPhotonNumber << ", got " << m;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  DerivativeSpec spec;
  if (op == PhotonOp::Subtract)
    spec.orders = {0, 0, m, m, m, m, 0, 0};
  else
    spec.orders = {m, m, 0, 0, 0, 0, m, m};
  return spec;
}

int DerivativeSpec::total_order() const { return std::accumulate(orders.begin(), orders.end(), 0); }

int DerivativeSpec::mode2_order() const {
  return orders[kEps2] + orders[kXi2] + orders[kEta2] + orders[kZeta2];
}

}  // namespace cvr
