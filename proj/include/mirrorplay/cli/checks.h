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

#ifndef MIRRORPLAY_CLI_CHECKS_H_
#define MIRRORPLAY_CLI_CHECKS_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mirrorplay/cli/config.h"
#include "mirrorplay/cli/report.h"
#include "mirrorplay/mdg.h"
#include "mirrorplay/stochastic.h"

namespace mirrorplay::cli {

// Owns the game, mirror and equilibrium for one config and caches the
// expensive artifacts (MP trajectory, Monte Carlo ensemble) across checks.
class CheckSession {
 public:
  explicit CheckSession(const RunConfig& cfg);

  const RunConfig& config() const { return cfg_; }
  const Game& game() const { return *game_; }
  const AggregatedMirror& mirror() const { return mirror_; }
  const MdgContext& context() const { return *ctx_; }
  std::optional<double> mu() const { return mu_; }

  const DualTrajectory& trajectory();
  // Uses cfg.stochastic; throws ConfigError when it is absent.
  const SdeConfig& sde() const;
  const Ensemble& ensemble();
  const EnsembleStats& ensemble_stats();

  // Runs one registered check; numeric errors other than the
  // statistical ones propagate.
  CheckRecord run(const std::string& name);

 private:
  RunConfig cfg_;
  std::unique_ptr<Game> game_;
  AggregatedMirror mirror_;
  std::unique_ptr<MdgContext> ctx_;
  std::optional<double> mu_;
  std::optional<DualTrajectory> trajectory_;
  std::optional<Ensemble> ensemble_;
  std::optional<EnsembleStats> stats_;
};

// Checks requested by the config, or every registered check if none are.
std::vector<std::string> requested_checks(const RunConfig& cfg);

}  // namespace mirrorplay::cli

#endif  // MIRRORPLAY_CLI_CHECKS_H_
