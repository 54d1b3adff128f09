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

// Run configuration: JSON schema version 1.

#ifndef MIRRORPLAY_CLI_CONFIG_H_
#define MIRRORPLAY_CLI_CONFIG_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirrorplay/dynamics.h"
#include "mirrorplay/games.h"
#include "mirrorplay/stochastic.h"

namespace mirrorplay::cli {

using Json = nlohmann::ordered_json;

enum class GameKind { kCournot, kBilinear, kQuadratic };

struct GameConfig {
  GameKind kind = GameKind::kCournot;
  CournotParams cournot;
  Matrix bilinear;
  QuadraticGameParams quadratic;
};

struct MirrorConfig {
  MirrorFamily family = MirrorFamily::kQuadratic;
  Matrix a;  // quadratic only
};

struct OutputConfig {
  std::string dir = "out";
  int stride = 1;
  std::vector<std::string> formats{"csv", "json"};
  int raw_paths = 0;  // per-path CSVs emitted by `mc`
  bool wants(const std::string& format) const;
};

struct RunConfig {
  int schema = 1;
  std::uint64_t seed = 0;
  GameConfig game;
  std::vector<MirrorConfig> mirror;
  SimConfig sim;
  std::optional<SdeConfig> stochastic;
  std::vector<std::string> checks;
  OutputConfig output;
};

// Registered check names in report order.
const std::vector<std::string>& registered_checks();

// Throws ConfigError with a line (syntax) or field (validation) diagnostic.
RunConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<config>");
RunConfig parse_config(const std::string& path);

Json serialize_config(const RunConfig& cfg);

std::unique_ptr<Game> build_game(const RunConfig& cfg);
AggregatedMirror build_mirror(const RunConfig& cfg);

}  // namespace mirrorplay::cli

#endif  // MIRRORPLAY_CLI_CONFIG_H_
