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

#include "cvrealign/error.hpp"

namespace cvr {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ZeroState: return "ZeroState";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace cvr
