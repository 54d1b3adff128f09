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

#include <cmath>

#include "mirrorplay/reference.h"
#include "mirrorplay/rng.h"

namespace mirrorplay::reference {

Ensemble euler_maruyama_paths_serial(const MdgContext& ctx,
                                     const SdeConfig& cfg) {
  cfg.validate();
  const Game& game = ctx.game;
  const AggregatedMirror& mirror = ctx.mirror;
  const int n = game.total_dim();
  const int steps = cfg.steps();
  const int stride = cfg.effective_stride();
  const double dt = cfg.dt;

  Ensemble ensemble;
  for (int k = 0; k <= steps; k += stride) ensemble.record_times.push_back(k * dt);
  if ((steps % stride) != 0) ensemble.record_times.push_back(steps * dt);
  const auto records = static_cast<Eigen::Index>(ensemble.record_times.size());

  for (int p = 0; p < cfg.paths; ++p) {
    PathResult r;
    r.recorded.resize(n, records);
    Vector x = cfg.x0;
    Vector integral = Vector::Zero(n);
    Eigen::Index next = 0;
    try {
      for (int k = 0; k <= steps; ++k) {
        if (k % stride == 0 || k == steps) {
          r.recorded.col(next++) = x;
          r.divergence.push_back(total_value(ctx, x));
        }
        if (k == steps) break;
        const Vector y = mirror.grad_phi_conj(x);
        const Vector drift = -game.pseudogradient(y);
        const std::vector<Matrix> sigma =
            volatility_blocks(mirror, x, cfg.epsilon);
        PhiloxStream rng(cfg.seed, static_cast<std::uint64_t>(p),
                         static_cast<std::uint32_t>(k));
        Vector noise(n);
        for (int j = 0; j < n; ++j) noise[j] = rng.normal();
        Vector increment(n);
        for (int i = 0; i < mirror.num_players(); ++i) {
          increment.segment(mirror.offset(i), mirror.dim(i)) =
              sigma[i] * noise.segment(mirror.offset(i), mirror.dim(i));
        }
        x += dt * drift + std::sqrt(dt) * increment;
        if (!x.allFinite()) {
          throw DomainEscapeError("non-finite SDE state", (k + 1) * dt);
        }
        const Vector y_next = mirror.grad_phi_conj(x);
        game.check_state(y_next, (k + 1) * dt);
        integral += 0.5 * dt * (y + y_next);
      }
    } catch (const Error& e) {
      r.aborted = true;
      r.message = e.what();
    }
    r.time_average = integral / cfg.horizon;
    ensemble.aborted += r.aborted;
    ensemble.paths.push_back(std::move(r));
  }
  return ensemble;
}

}  // namespace mirrorplay::reference
