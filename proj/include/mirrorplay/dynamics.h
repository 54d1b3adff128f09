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

// Deterministic mirror play: x' = -Psi(Phi*(x)), integrated with fixed-step
// classical Runge-Kutta.

#ifndef MIRRORPLAY_DYNAMICS_H_
#define MIRRORPLAY_DYNAMICS_H_

#include <functional>
#include <vector>

#include "mirrorplay/games.h"
#include "mirrorplay/mirror_maps.h"
#include "mirrorplay/types.h"

namespace mirrorplay {

struct SimConfig {
  double horizon = 10.0;
  double dt = 1e-3;
  Vector x0;

  // Throws InvariantError unless 0 < dt <= horizon and horizon/dt is an
  // integer within 1e-9.
  void validate() const;
  int steps() const;
};

enum class ControlProvenance { kClosedLoop, kPerturbed };

struct ControlSignal {
  ControlProvenance provenance = ControlProvenance::kClosedLoop;
  Matrix values;  // n x (K + 1), column k is u(t_k)
};

struct DualTrajectory {
  std::vector<double> times;  // t_0 = 0, ..., t_K = T
  Matrix states;              // n x (K + 1)
  Matrix primal;              // y(t_k) = Phi*(x(t_k))
  ControlSignal control;

  int num_nodes() const { return static_cast<int>(times.size()); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  Vector state(int k) const { return states.col(k); }
  Vector y(int k) const { return primal.col(k); }
  Vector u(int k) const { return control.values.col(k); }
};

// Closed-loop policy u(t, x) on the stacked dual state.
using ControlLaw = std::function<Vector(double t, const Vector& x)>;

// -Psi(Phi*(x)); the mirror-play (closed-loop equilibrium) control.
Vector mp_vector_field(const Game& game, const AggregatedMirror& mirror,
                       const Vector& x);

// Fixed-step RK4 under mirror play. Throws DomainEscapeError if a stage
// produces a non-finite state or primal image, PriceRegionError when the
// game's region check fails at a node.
DualTrajectory integrate_mp(const Game& game, const AggregatedMirror& mirror,
                            const SimConfig& cfg);

// Same integrator under an arbitrary control law.
DualTrajectory integrate_controlled(const Game& game,
                                    const AggregatedMirror& mirror,
                                    const SimConfig& cfg,
                                    const ControlLaw& control,
                                    ControlProvenance provenance);

std::vector<Vector> primal_path(const DualTrajectory& traj);

// Dual image x = grad phi(y) of a primal profile.
Vector dual_state(const AggregatedMirror& mirror, const Vector& y);

// Equilibrium for games without a closed form: integrates mirror play in
// chunks until the VI residual is <= tolerance, then returns Phi*(x).
Vector equilibrium_by_flow(const Game& game, const AggregatedMirror& mirror,
                           const Vector& x0, double tolerance = 1e-10,
                           double max_horizon = 1e4);

// Equilibrium data, either from the game or computed by the flow.
Vector resolve_equilibrium(const Game& game, const AggregatedMirror& mirror,
                           const Vector& x_start);

struct OrderCheck {
  double ratio = 0.0;  // |x_h - x_{h/2}| / |x_{h/2} - x_{h/4}|
  double coarse_dt = 0.0;
};

// Richardson ratio of terminal states on the dt ladder (h, h/2, h/4).
OrderCheck rk4_order_ratio(const Game& game, const AggregatedMirror& mirror,
                           const Vector& x0, double horizon, double h);

}  // namespace mirrorplay

#endif  // MIRRORPLAY_DYNAMICS_H_
