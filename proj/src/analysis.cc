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

#include "mirrorplay/analysis.h"

#include <algorithm>
#include <cmath>

namespace mirrorplay {

double LyapunovSeries::max_increase() const {
  double worst = -kInfinity;
  for (size_t k = 1; k < total.size(); ++k) {
    worst = std::max(worst, total[k] - total[k - 1]);
  }
  return worst;
}

double LyapunovSeries::max_drift() const {
  double worst = 0.0;
  for (double v : total) worst = std::max(worst, std::abs(v - total.front()));
  return worst;
}

LyapunovSeries lyapunov_series(const MdgContext& ctx,
                               const DualTrajectory& traj) {
  const int players = ctx.num_players();
  const int nodes = traj.num_nodes();
  LyapunovSeries series;
  series.times = traj.times;
  series.total.assign(nodes, 0.0);
  series.per_player = Matrix::Zero(players, nodes);
  std::vector<ValueFn> vfs;
  for (int i = 0; i < players; ++i) vfs.push_back(make_value_fn(ctx, i));
  for (int k = 0; k < nodes; ++k) {
    const Vector x = traj.state(k);
    for (int i = 0; i < players; ++i) {
      series.per_player(i, k) = value(vfs[i], x);
      series.total[k] += series.per_player(i, k);
    }
  }
  return series;
}

Vector average_strategy(const DualTrajectory& traj) {
  const int nodes = traj.num_nodes();
  Vector integral = Vector::Zero(traj.primal.rows());
  for (int k = 1; k < nodes; ++k) {
    integral += 0.5 * (traj.times[k] - traj.times[k - 1]) *
                (traj.primal.col(k) + traj.primal.col(k - 1));
  }
  return integral / traj.times.back();
}

TimeAverageReport time_average_bound_check(const MdgContext& ctx,
                                           const DualTrajectory& traj) {
  const Game& game = ctx.game;
  TimeAverageReport report;
  report.horizon = traj.times.back();
  const Vector avg = average_strategy(traj);
  report.lhs = game.pseudogradient(ctx.y_bar).dot(avg - ctx.y_bar);
  report.lhs_display = game.pseudogradient(avg).dot(avg - ctx.y_bar);
  report.rhs = ctx.mirror.bregman(ctx.y_bar, traj.y(0)) / report.horizon;
  report.slack = report.rhs - report.lhs;
  return report;
}

std::vector<double> average_convergence_probe(
    const MdgContext& ctx, const Vector& x0,
    const std::vector<double>& horizons, double dt) {
  std::vector<double> out;
  for (double horizon : horizons) {
    const DualTrajectory traj =
        integrate_mp(ctx.game, ctx.mirror, SimConfig{horizon, dt, x0});
    out.push_back((average_strategy(traj) - ctx.y_bar).norm());
  }
  return out;
}

ExponentialDecayReport exponential_decay_check(const MdgContext& ctx,
                                               const DualTrajectory& traj,
                                               double mu) {
  constexpr double kFloor = 1e-10;
  constexpr double kRelativeSlack = 1e-3;
  const LyapunovSeries series = lyapunov_series(ctx, traj);
  const std::vector<double>& v = series.total;

  ExponentialDecayReport report;
  report.mu = mu;
  if (v.front() < kFloor) {
    // V(0) ~ 0: the bound only asks V to stay at zero.
    report.vacuous = true;
    for (double value : v) {
      report.pointwise_holds &= value <= v.front() * (1 + kRelativeSlack) +
                                            1e-300;
    }
    return report;
  }

  for (size_t k = 0; k < v.size(); ++k) {
    const double bound = std::exp(-mu * series.times[k]) * v.front();
    report.worst_ratio = std::max(report.worst_ratio, v[k] / bound);
    if (v[k] > bound * (1 + kRelativeSlack)) report.pointwise_holds = false;
  }

  double st = 0, sl = 0, stt = 0, stl = 0;
  int m = 0;
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k] < kFloor) continue;
    const double t = series.times[k], l = std::log(v[k]);
    st += t;
    sl += l;
    stt += t * t;
    stl += t * l;
    ++m;
  }
  if (m < 10) {
    throw InsufficientDecayData(
        "fewer than 10 nodes with V >= 1e-10 for the log-slope fit");
  }
  report.fit_nodes = m;
  report.fitted_slope = (m * stl - st * sl) / (m * stt - st * st);
  return report;
}

LyapunovIdentities lyapunov_identities(const MdgContext& ctx,
                                       const DualTrajectory& traj,
                                       double mu) {
  const Game& game = ctx.game;
  const int players = game.num_players();
  LyapunovIdentities out;
  out.stability_violation = -kInfinity;
  out.strong_violation = -kInfinity;
  const Vector grad_at_eq = game.pseudogradient(ctx.y_bar);
  for (int k = 0; k < traj.num_nodes(); ++k) {
    const Vector x = traj.state(k), y = traj.y(k), u = traj.u(k);
    double dv = 0.0, cost = 0.0;
    for (int i = 0; i < players; ++i) {
      dv += value_gradient(ctx, i, x).dot(u);
      cost += stage_cost(ctx, i, x,
                         u.segment(game.offset(i), game.dim(i)));
    }
    const double stability = grad_at_eq.dot(ctx.y_bar - y);
    const double divergence = ctx.mirror.bregman(ctx.y_bar, y);
    out.identity_residual = std::max(out.identity_residual,
                                     std::abs(dv + cost));
    out.stability_violation =
        std::max(out.stability_violation, dv - stability);
    out.strong_violation =
        std::max(out.strong_violation, dv + mu * divergence);
  }
  return out;
}

}  // namespace mirrorplay
