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

#ifndef MIRRORPLAY_CLI_REPORT_H_
#define MIRRORPLAY_CLI_REPORT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mirrorplay/cli/config.h"

namespace mirrorplay::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class CheckStatus { kPass, kFail, kSkipped };

const char* to_string(CheckStatus status);

struct CheckRecord {
  std::string name;
  CheckStatus status = CheckStatus::kSkipped;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;  // positive means the check passed with room to spare
  double wall_time_seconds = 0.0;
  std::string message;
};

struct VerificationReport {
  int schema = 1;
  std::string artifact_version = kArtifactVersion;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string command;
  bool failed = false;  // set when the run aborted before completing
  std::string failure;
  std::vector<CheckRecord> checks;

  bool any_check_failed() const;
};

// FNV-1a over the canonical serialized config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

// Non-finite values become the strings "inf", "-inf" and "nan".
Json number_json(double value);

Json to_json(const CheckRecord& record, bool include_timing = true);
Json to_json(const VerificationReport& report, bool include_timing = true);

// %.17g, with "inf"/"-inf"/"nan" for non-finite values.
std::string csv_number(double value);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace mirrorplay::cli

#endif  // MIRRORPLAY_CLI_REPORT_H_
