// Copyright 2026 The DiaQuad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "diaquad/error.h"

namespace diaquad {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedFile: return "MALFORMED_FILE";
    case ErrorCode::kDanglingSpan: return "DANGLING_SPAN";
    case ErrorCode::kBrokenTree: return "BROKEN_TREE";
    case ErrorCode::kBadProfile: return "BAD_PROFILE";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kNotScalar: return "NOT_SCALAR";
    case ErrorCode::kGridConflict: return "GRID_CONFLICT";
    case ErrorCode::kIdMismatch: return "ID_MISMATCH";
    case ErrorCode::kBadConfig: return "BAD_CONFIG";
    case ErrorCode::kIo: return "IO_ERROR";
    case ErrorCode::kInvariant: return "INVARIANT";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kNotScalar:
    case ErrorCode::kInvariant:
      return 3;
    default:
      return 2;
  }
}

}  // namespace diaquad
