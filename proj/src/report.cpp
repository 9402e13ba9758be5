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

#include "cvrealign/report.hpp"

#include <cmath>

namespace cvr {

const char* branch_name(Branch b) noexcept { return b == Branch::Plain ? "plain" : "pi"; }

double signed_gap(const CriterionReport& report) {
  if (report.gap) return *report.gap;
  return report.direction == Direction::Above ? report.value - report.threshold : report.threshold - report.value;
}

void settle_verdict(CriterionReport& report, double tol) {
  const double gap = report.gap ? *report.gap : signed_gap(report);
  report.boundary = std::abs(gap) <= tol * (report.gap ? report.gap_scale : 1.0);
  report.entangled = !report.boundary && gap > 0.0;
}

void append_detail(CriterionReport& report, const std::string& note) {
  if (!report.detail.empty()) report.detail += "; ";
  report.detail += note;
}

}  // namespace cvr
