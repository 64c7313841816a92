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

#ifndef DIAQUAD_CLI_H_
#define DIAQUAD_CLI_H_

#include <iostream>
#include <string>
#include <vector>

namespace diaquad::cli {

inline constexpr int kArtifactVersion = 1;

// Runs one subcommand; args excludes the program name. Returns 0 on
// success, 1 on usage errors, 2 on data errors and 3 on internal failures.
int Run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace diaquad::cli

#endif  // DIAQUAD_CLI_H_
