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

#include <optional>
#include <string>

namespace cvr {

enum class Branch { Plain, PiAppended };

const char* branch_name(Branch b) noexcept;

/// One of the two realignment branches; `tau` is the kernel quantity
/// 1/(4[(b0 ± c1)² - c2²]) and `trace_value` the branch's Tr ρ^R.
struct RealignBranch {
  Branch label = Branch::Plain;
  double tau = 0.0;
  double trace_value = 0.0;
};

/// Which side of the threshold certifies entanglement.
enum class Direction { Above, Below };

struct CriterionReport {
  double value = 0.0;
  double threshold = 1.0;
  Direction direction = Direction::Above;
  bool entangled = false;
  bool boundary = false;
  RealignBranch branch;
  bool has_branch = false;
  // Product form of the Gaussian test, min over branches; entangled iff < 1/4.
  double product = 0.0;
  double product_threshold = 0.25;
  bool has_product = false;
  bool lower_bound_only = false;
  // Signed distance from the threshold, positive on the entangled side,
  // when a closed form gives it without cancellation. The boundary band is
  // then kVerdictTol * gap_scale.
  std::optional<double> gap;
  double gap_scale = 1.0;
  std::string detail;
};

inline constexpr double kVerdictTol = 1e-10;

/// `gap` if set, else the plain difference to the threshold.
double signed_gap(const CriterionReport& report);

/// Sets `entangled` / `boundary` from value, threshold and direction, or
/// from `gap` when present.
void settle_verdict(CriterionReport& report, double tol = kVerdictTol);

void append_detail(CriterionReport& report, const std::string& note);

}  // namespace cvr
