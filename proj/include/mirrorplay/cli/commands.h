// Copyright 2026 The Mirrorplay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIRRORPLAY_CLI_COMMANDS_H_
#define MIRRORPLAY_CLI_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mirrorplay/cli/config.h"
#include "mirrorplay/cli/report.h"

namespace mirrorplay::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfigError = 2,
  kExitNumericError = 3,
};

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::string>> checks;
};

// Applies command-line overrides; check names are validated.
void apply_overrides(RunConfig& cfg, const Overrides& overrides);

// Each command writes into cfg.output.dir and returns an ExitCode.
// Numeric errors are reported on stderr, recorded in the partial output
// with "failed": true, and mapped to kExitNumericError.
int run_simulate(const RunConfig& cfg);
int run_verify(const RunConfig& cfg);
int run_mc(const RunConfig& cfg);

// Builds the report without touching the filesystem; exposed for tests.
VerificationReport verify_report(const RunConfig& cfg,
                                 const std::string& command = "verify");

// Full entry point: parse, override, dispatch, map exceptions to codes.
int run_command(const std::string& command, const std::string& config_path,
                const Overrides& overrides);

}  // namespace mirrorplay::cli

#endif  // MIRRORPLAY_CLI_COMMANDS_H_
