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

// Finite-time quantification of the mirror path: Lyapunov decay of
// V = sum_i V_i, the time-average variational bound and the exponential
// rate for strongly monotone games.

#ifndef MIRRORPLAY_ANALYSIS_H_
#define MIRRORPLAY_ANALYSIS_H_

#include <vector>

#include "mirrorplay/dynamics.h"
#include "mirrorplay/mdg.h"

namespace mirrorplay {

struct LyapunovSeries {
  std::vector<double> times;
  std::vector<double> total;  // V(t_k)
  Matrix per_player;          // players x nodes

  // max_k V(t_{k+1}) - V(t_k); <= 0 for a nonincreasing series.
  double max_increase() const;
  // max_k |V(t_k) - V(0)|.
  double max_drift() const;
};

LyapunovSeries lyapunov_series(const MdgContext& ctx,
                               const DualTrajectory& traj);

// (1/T) * integral of y(t) by the trapezoid rule on the trajectory grid.
Vector average_strategy(const DualTrajectory& traj);

struct TimeAverageReport {
  double horizon = 0.0;
  double lhs = 0.0;          // sum_i <grad_i psi_i(ybar), avg_i - ybar_i>
  double lhs_display = 0.0;  // <Psi(avg), avg - ybar>, logged only
  double rhs = 0.0;          // (1/T) sum_i D_phi_i(ybar_i, y_i(0))
  double slack = 0.0;        // rhs - lhs
};

TimeAverageReport time_average_bound_check(const MdgContext& ctx,
                                           const DualTrajectory& traj);

// ||avg_[0,T] - ybar|| for each horizon; every run starts from x0.
std::vector<double> average_convergence_probe(const MdgContext& ctx,
                                              const Vector& x0,
                                              const std::vector<double>& horizons,
                                              double dt);

struct ExponentialDecayReport {
  double mu = 0.0;
  bool vacuous = false;     // V(0) below the fit floor
  bool pointwise_holds = true;
  double worst_ratio = 0.0;  // max_k V(t_k) / (exp(-mu t_k) V(0))
  double fitted_slope = 0.0;
  int fit_nodes = 0;
};

// Pointwise V(t_k) <= exp(-mu t_k) V(0) (1 + 1e-3) and least-squares slope
// of log V over nodes with V >= 1e-10. Throws InsufficientDecayData if
// fewer than 10 nodes remain above the floor.
ExponentialDecayReport exponential_decay_check(const MdgContext& ctx,
                                               const DualTrajectory& traj,
                                               double mu);

struct LyapunovIdentities {
  double identity_residual = 0.0;     // max |dV/dt + sum_i c_i|
  double stability_violation = 0.0;   // max dV/dt - sum <grad psi(ybar), ybar - y>
  double strong_violation = 0.0;      // max dV/dt + mu D_phi(ybar, y)
};

// Node-wise checks of the Lyapunov derivative chain along a mirror-play
// trajectory; mu = 0 makes the last entry the plain decay condition.
LyapunovIdentities lyapunov_identities(const MdgContext& ctx,
                                       const DualTrajectory& traj, double mu);

}  // namespace mirrorplay

#endif  // MIRRORPLAY_ANALYSIS_H_
