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

// Mirror differential game: the finite-horizon game whose closed-loop
// equilibrium path is the mirror-play path. Player i pays the stage cost
//
//   c_i(x, u) = psi_i(Phi*(x)) + psi_i*(-u_i | y_{-i}) + <u_i, ybar_i>
//
// and the terminal cost q_i(x_T) = D_{phi_i*}(x_{i,T}, xbar_i). The value
// function is V_i(x) = D_{phi_i*}(x_i, xbar_i).

#ifndef MIRRORPLAY_MDG_H_
#define MIRRORPLAY_MDG_H_

#include <cstdint>
#include <vector>

#include "mirrorplay/dynamics.h"
#include "mirrorplay/games.h"
#include "mirrorplay/mirror_maps.h"

namespace mirrorplay {

// Game, mirror and equilibrium data shared by every MDG evaluator.
struct MdgContext {
  const Game& game;
  const AggregatedMirror& mirror;
  Vector y_bar;  // Nash equilibrium of the static game
  Vector x_bar;  // its dual image grad phi(y_bar)

  MdgContext(const Game& game, const AggregatedMirror& mirror, Vector y_bar);
  int num_players() const { return game.num_players(); }
};

struct ValueFn {
  int player;
  MirrorMap map;
  Vector x_bar_i;
  int offset;
};

ValueFn make_value_fn(const MdgContext& ctx, int i);

// V_i(x) = D_{phi_i*}(x_i, xbar_i); x is the stacked dual state.
double value(const ValueFn& vf, const Vector& x);
// Sum over players.
double total_value(const MdgContext& ctx, const Vector& x);
// grad_x V_i: grad phi_i*(x_i) - ybar_i on block i, exact zeros elsewhere.
Vector value_gradient(const MdgContext& ctx, int i, const Vector& x);

// u_i is player i's control block. Returns kInfinity when the partial
// conjugate is infinite.
double stage_cost(const MdgContext& ctx, int i, const Vector& x,
                  const Vector& u_i);

double terminal_cost(const MdgContext& ctx, int i, const Vector& x_t);

// Trapezoid quadrature of c_i along the stored grid plus q_i(x(T)).
double cumulative_cost(const MdgContext& ctx, const DualTrajectory& traj,
                       const ControlSignal& control, int i);

// H_i = c_i(x, u) + <p_i, u>; u is the stacked control.
double hamiltonian(const MdgContext& ctx, int i, const Vector& p_i,
                   const Vector& x, const Vector& u);

struct CostatePath {
  int player = 0;
  std::vector<double> times;
  Matrix values;  // n x (K + 1)
};

// Backward trapezoid integration of p_i' = -[0, grad_i psi_i(y), 0] from
// p_i(T) = [0, grad_i psi_i(y(T)) - grad_i psi_i(ybar), 0].
std::vector<CostatePath> costate_path(const MdgContext& ctx,
                                      const DualTrajectory& traj);

struct VariationalResidual {
  // Per player rows, per node columns. The finite-difference series is
  // defined on interior nodes; endpoints hold zero.
  Matrix analytic;
  Matrix finite_difference;
  double max_analytic = 0.0;
  double max_finite_difference = 0.0;
};

// r_i = c_i(x, u*) + dV_i/dt along a mirror-play trajectory, with dV_i/dt
// both analytic and by central differences of V_i.
VariationalResidual variational_residual(const MdgContext& ctx,
                                         const DualTrajectory& traj);

struct Lemma1Scan {
  int samples = 0;
  double min_value = kInfinity;       // over all sampled (x, u_i)
  double max_abs_at_mp = 0.0;         // |value| at u_i = MP control
  double min_off_policy = kInfinity;  // over u_i != MP control
};

// <grad V_i, (u_i, gamma*_{-i})> + c_i at random states in the box
// xbar + [-radius, radius]^n with random controls in the box
// u* + [-control_radius, control_radius]^{n_i}.
Lemma1Scan lemma1_scan(const MdgContext& ctx, int samples, std::uint64_t seed,
                       double radius = 1.0, double control_radius = 5.0);

// u_i(t) = u_i*(t) + amplitude * sin(omega t + phase) * direction.
struct Perturbation {
  double amplitude = 0.0;
  double omega = 1.0;
  double phase = 0.0;
  Vector direction;  // unit vector in player i's block
};

struct PerturbationSpec {
  double amplitude_min = 0.05;
  double amplitude_max = 1.0;
  double omega_min = 0.5;
  double omega_max = 3.0;
};

// J_i(x0, perturbed u_i, gamma*_{-i}) - V_i(x0); kInfinity when a stage cost
// is infinite.
double deviation_gap(const MdgContext& ctx, const SimConfig& cfg, int i,
                     const Perturbation& perturbation);

struct DeviationReport {
  int player = 0;
  int trials = 0;
  int rejected = 0;  // resampled because the path left the game's region
  int infinite = 0;  // trials with J_i = +infinity
  double min_gap = kInfinity;
  double max_gap = -kInfinity;
  double zero_perturbation_gap = 0.0;
  std::vector<double> gaps;  // indexed by trial
};

// Random smooth perturbations of player i's control with the opponents on
// the closed-loop policy. Trials run in parallel; each trial's draws come
// from its own counter-based stream so the report is schedule-independent.
DeviationReport deviation_test(const MdgContext& ctx, const SimConfig& cfg,
                               const PerturbationSpec& spec, int trials,
                               std::uint64_t seed, int player);

}  // namespace mirrorplay

#endif  // MIRRORPLAY_MDG_H_
