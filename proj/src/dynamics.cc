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

#include "mirrorplay/dynamics.h"

#include <cmath>
#include <sstream>

namespace mirrorplay {

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvariantError("sim: dt must be positive");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon) || dt > horizon) {
    throw InvariantError("sim: horizon must be positive and >= dt");
  }
  const double ratio = horizon / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw InvariantError("sim: horizon / dt must be an integer step count");
  }
  if (!x0.allFinite()) throw InvariantError("sim: x0 must be finite");
}

int SimConfig::steps() const {
  return static_cast<int>(std::llround(horizon / dt));
}

Vector mp_vector_field(const Game& game, const AggregatedMirror& mirror,
                       const Vector& x) {
  return -game.pseudogradient(mirror.grad_phi_conj(x));
}

Vector dual_state(const AggregatedMirror& mirror, const Vector& y) {
  return mirror.grad_phi(y);
}

namespace {

[[noreturn]] void escape(double t, const std::string& why) {
  std::ostringstream os;
  os << "trajectory left the mirror domain at t=" << t << ": " << why;
  throw DomainEscapeError(os.str(), t);
}

Vector checked_eval(const ControlLaw& control, double t, const Vector& x) {
  if (!x.allFinite()) escape(t, "non-finite dual state");
  Vector u;
  try {
    u = control(t, x);
  } catch (const DomainError& e) {
    escape(t, e.what());
  }
  if (!u.allFinite()) escape(t, "non-finite control");
  return u;
}

}  // namespace

DualTrajectory integrate_controlled(const Game& game,
                                    const AggregatedMirror& mirror,
                                    const SimConfig& cfg,
                                    const ControlLaw& control,
                                    ControlProvenance provenance) {
  cfg.validate();
  const int n = game.total_dim();
  if (mirror.dim() != n || cfg.x0.size() != n) {
    throw InvariantError("game, mirror and x0 dimensions differ");
  }
  const int steps = cfg.steps();
  const double h = cfg.dt;

  DualTrajectory traj;
  traj.times.resize(steps + 1);
  traj.states.resize(n, steps + 1);
  traj.primal.resize(n, steps + 1);
  traj.control.provenance = provenance;
  traj.control.values.resize(n, steps + 1);

  Vector x = cfg.x0;
  for (int k = 0; k <= steps; ++k) {
    const double t = k * h;
    traj.times[k] = t;
    traj.states.col(k) = x;
    Vector y;
    try {
      y = mirror.grad_phi_conj(x);
    } catch (const DomainError& e) {
      escape(t, e.what());
    }
    game.check_state(y, t);
    traj.primal.col(k) = y;
    const Vector k1 = checked_eval(control, t, x);
    traj.control.values.col(k) = k1;
    if (k == steps) break;

    const Vector k2 = checked_eval(control, t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = checked_eval(control, t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = checked_eval(control, t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return traj;
}

DualTrajectory integrate_mp(const Game& game, const AggregatedMirror& mirror,
                            const SimConfig& cfg) {
  ControlLaw law = [&](double, const Vector& x) {
    return mp_vector_field(game, mirror, x);
  };
  return integrate_controlled(game, mirror, cfg, law,
                              ControlProvenance::kClosedLoop);
}

std::vector<Vector> primal_path(const DualTrajectory& traj) {
  std::vector<Vector> out;
  out.reserve(traj.num_nodes());
  for (int k = 0; k < traj.num_nodes(); ++k) out.push_back(traj.y(k));
  return out;
}

Vector equilibrium_by_flow(const Game& game, const AggregatedMirror& mirror,
                           const Vector& x0, double tolerance,
                           double max_horizon) {
  SimConfig chunk{10.0, 1e-2, x0};
  double elapsed = 0.0;
  while (elapsed < max_horizon) {
    const DualTrajectory traj = integrate_mp(game, mirror, chunk);
    chunk.x0 = traj.state(traj.num_nodes() - 1);
    elapsed += chunk.horizon;
    const Vector y = mirror.grad_phi_conj(chunk.x0);
    if (vi_residual(game, y) <= tolerance) return y;
  }
  throw NonconvergenceError("mirror play did not reach the VI tolerance");
}

Vector resolve_equilibrium(const Game& game, const AggregatedMirror& mirror,
                           const Vector& x_start) {
  if (std::optional<Vector> eq = game.equilibrium()) return *eq;
  return equilibrium_by_flow(game, mirror, x_start);
}

OrderCheck rk4_order_ratio(const Game& game, const AggregatedMirror& mirror,
                           const Vector& x0, double horizon, double h) {
  auto terminal = [&](double dt) {
    const DualTrajectory traj =
        integrate_mp(game, mirror, SimConfig{horizon, dt, x0});
    return Vector(traj.state(traj.num_nodes() - 1));
  };
  const Vector a = terminal(h);
  const Vector b = terminal(h / 2);
  const Vector c = terminal(h / 4);
  OrderCheck out;
  out.coarse_dt = h;
  out.ratio = (a - b).norm() / (b - c).norm();
  return out;
}

}  // namespace mirrorplay
