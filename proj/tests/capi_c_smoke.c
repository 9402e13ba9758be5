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

/* Compiled as C to keep the public header free of C++-isms. */
#include "cvrealign/cvrealign.h"

int cvr_c_header_smoke(void) {
  cvr_ccm ccm;
  cvr_report report;
  if (cvr_tmsv_ccm(0.5, &ccm) != CVR_OK) return -1;
  if (cvr_gaussian_criterion(&ccm, &report) != CVR_OK) return -1;
  return report.entangled;
}
