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

#include "mirrorplay/cli/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace mirrorplay::cli {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kSkipped:
      return "skipped";
  }
  return "unknown";
}

bool VerificationReport::any_check_failed() const {
  for (const CheckRecord& r : checks) {
    if (r.status == CheckStatus::kFail) return true;
  }
  return false;
}

std::string config_hash(const RunConfig& cfg) {
  // The output directory only says where artifacts go, so reruns into a
  // different directory keep the same hash.
  Json j = serialize_config(cfg);
  if (j.contains("output")) j["output"].erase("dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Json number_json(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

Json to_json(const CheckRecord& r, bool include_timing) {
  Json j;
  j["name"] = r.name;
  j["status"] = to_string(r.status);
  j["lhs"] = number_json(r.lhs);
  j["rhs"] = number_json(r.rhs);
  j["residual"] = number_json(r.residual);
  j["tolerance"] = number_json(r.tolerance);
  j["margin"] = number_json(r.margin);
  if (include_timing) j["wall_time_seconds"] = r.wall_time_seconds;
  j["message"] = r.message;
  return j;
}

Json to_json(const VerificationReport& report, bool include_timing) {
  Json j;
  j["schema"] = report.schema;
  j["artifact_version"] = report.artifact_version;
  j["command"] = report.command;
  j["config_hash"] = report.config_hash;
  j["seed"] = report.seed;
  j["failed"] = report.failed;
  if (report.failed) j["failure"] = report.failure;
  j["checks"] = Json::array();
  for (const CheckRecord& r : report.checks) {
    j["checks"].push_back(to_json(r, include_timing));
  }
  return j;
}

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace mirrorplay::cli
