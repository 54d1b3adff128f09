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

// Times the serial reference ensemble against the OpenMP kernel and checks
// that both produce the same bits.
//
//   bench_ensemble [paths] [horizon]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "mirrorplay/games.h"
#include "mirrorplay/mdg.h"
#include "mirrorplay/parallel.h"
#include "mirrorplay/reference.h"
#include "mirrorplay/stochastic.h"

namespace {

template <typename F>
double seconds(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

bool same(const mirrorplay::Ensemble& a, const mirrorplay::Ensemble& b) {
  if (a.paths.size() != b.paths.size()) return false;
  for (size_t p = 0; p < a.paths.size(); ++p) {
    if (a.paths[p].divergence != b.paths[p].divergence) return false;
    if (a.paths[p].recorded != b.paths[p].recorded) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mirrorplay;
  configure_threads_from_env();
  const int paths = argc > 1 ? std::atoi(argv[1]) : 400;
  const double horizon = argc > 2 ? std::atof(argv[2]) : 5.0;

  Vector m(1), p1(1), p2(1);
  m << 10;
  p1 << 1;
  p2 << 2;
  const CournotGame game({m, p1, p2});
  const AggregatedMirror mirror = AggregatedMirror::Identity({1, 1});
  const MdgContext ctx(game, mirror, *game.equilibrium());

  SdeConfig cfg;
  cfg.paths = paths;
  cfg.horizon = horizon;
  cfg.x0 = Vector::Zero(2);
  cfg.seed = 2026;

  Ensemble serial, parallel;
  const double t_serial = seconds(
      [&] { serial = reference::euler_maruyama_paths_serial(ctx, cfg); });
  const double t_parallel =
      seconds([&] { parallel = euler_maruyama_paths(ctx, cfg); });

  SimConfig sim{horizon, 1e-3, Vector::Zero(2)};
  const double t_deviation = seconds(
      [&] { deviation_test(ctx, sim, PerturbationSpec{}, 50, 1, 0); });

  std::printf("threads            %d\n", omp_get_max_threads());
  std::printf("paths x steps      %d x %d\n", cfg.paths, cfg.steps());
  std::printf("serial reference   %.3f s\n", t_serial);
  std::printf("openmp kernel      %.3f s (speedup %.2fx)\n", t_parallel,
              t_serial / t_parallel);
  std::printf("deviation, 50 runs %.3f s\n", t_deviation);
  std::printf("bitwise identical  %s\n", same(serial, parallel) ? "yes" : "NO");
  return same(serial, parallel) ? 0 : 1;
}
