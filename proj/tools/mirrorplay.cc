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

// Command-line front end: simulate | verify | mc.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mirrorplay/cli/commands.h"
#include "mirrorplay/parallel.h"

int main(int argc, char** argv) {
  CLI::App app{"Mirror-play dynamics: simulation and verification"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string checks;

  for (const char* name : {"simulate", "verify", "mc"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Path to the JSON run config")
        ->required();
    sub->add_option("--out", out_dir, "Output directory (overrides config)");
    sub->add_option("--seed", seed, "Master seed (overrides config)");
    sub->add_option("--checks", checks,
                    "Comma-separated check names (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mirrorplay::cli::kExitConfigError;
  }

  mirrorplay::configure_threads_from_env();

  mirrorplay::cli::Overrides overrides;
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--out")) overrides.out_dir = out_dir;
  if (sub->count("--seed")) overrides.seed = seed;
  if (sub->count("--checks")) {
    std::vector<std::string> names;
    std::string item;
    for (char c : checks + ",") {
      if (c == ',') {
        if (!item.empty()) names.push_back(item);
        item.clear();
      } else if (c != ' ') {
        item += c;
      }
    }
    overrides.checks = names;
  }
  return mirrorplay::cli::run_command(sub->get_name(), config_path, overrides);
}
