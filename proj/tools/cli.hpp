// Copyright 2026 The lculab Authors
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

#pragma once

// Command-line driver. A run reads one JSON experiment config, executes the
// named command, and writes its artifacts into the output directory.
//
// Exit codes: 0 success, 1 malformed config, 2 precondition violation,
// 3 validation failure.

#include <cstdint>
#include <optional>
#include <string>

namespace lculab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitMalformedConfig = 1,
  kExitPrecondition = 2,
  kExitValidation = 3,
};

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int jobs = 1;
  std::string constants_path;
};

int run(const RunOptions& options);
int main_entry(int argc, char** argv);

}  // namespace lculab::cli
