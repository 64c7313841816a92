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

#ifndef DIAQUAD_ERROR_H_
#define DIAQUAD_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace diaquad {

// Failure categories surfaced by the library. The CLI maps each category to
// a process exit code (see ExitCodeFor).
enum class ErrorCode {
  kMalformedFile,
  kDanglingSpan,
  kBrokenTree,
  kBadProfile,
  kShapeMismatch,
  kNotScalar,
  kGridConflict,
  kIdMismatch,
  kBadConfig,
  kIo,
  kInvariant,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// 2 for data/configuration problems, 3 for internal invariant failures.
int ExitCodeFor(ErrorCode code);

}  // namespace diaquad

#endif  // DIAQUAD_ERROR_H_
