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

// Stochastic mirror play. The dual state follows
//
//   dX = -Psi(Phi*(X)) dt + sigma(X) dW,
//   sigma sigma' = 2 eps diag_i (hess phi_i*(X_i))^{-1},
//
// under which the Ito correction of V_i is the constant eps * n_i and the
// value functions are V_i(t, x) = D_{phi_i*}(x_i, xbar_i) + eps n_i (T - t).

#ifndef MIRRORPLAY_STOCHASTIC_H_
#define MIRRORPLAY_STOCHASTIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mirrorplay/mdg.h"

namespace mirrorplay {

struct SdeConfig {
  double epsilon = 0.01;
  double horizon = 10.0;
  double dt = 1e-3;
  int paths = 1000;
  std::uint64_t seed = 0;
  Vector x0;
  // Record every stride-th node (the final node is always recorded);
  // 0 picks a stride giving at most ~1000 records.
  int record_stride = 0;

  void validate() const;
  int steps() const;
  int effective_stride() const;
};

// sigma_i = sqrt(2 eps) (hess phi_i*(x_i))^{-1/2} per player block. Throws
// SingularHessianError if an eigenvalue of the Hessian is below 1e-14.
std::vector<Matrix> volatility_blocks(const AggregatedMirror& mirror,
                                      const Vector& x, double epsilon);

// 1/2 tr(sigma_i sigma_i' hess V_i), which must equal eps * n_i.
double ito_correction(const AggregatedMirror& mirror, int i, const Vector& x,
                      double epsilon);

struct PathResult {
  bool aborted = false;
  std::string message;
  Matrix recorded;                  // n x records
  std::vector<double> divergence;   // D_phi(ybar, Y_t) at recorded nodes
  Vector time_average;              // (1/T) integral of Y_t dt
};

struct Ensemble {
  std::vector<double> record_times;
  std::vector<PathResult> paths;
  int aborted = 0;
};

// Euler-Maruyama paths, parallel over paths (OpenMP). The Gaussian
// increment of path p at step k comes from the stream (seed, p, k), so the
// ensemble does not depend on the thread count.
Ensemble euler_maruyama_paths(const MdgContext& ctx, const SdeConfig& cfg);

struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean;  // E[D_phi(ybar, Y_t)]
  std::vector<double> standard_error;
  std::vector<Vector> time_averages;  // per non-aborted path
  int paths_used = 0;
  int aborted = 0;
};

EnsembleStats ensemble_stats(const Ensemble& ensemble);

// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

double stochastic_value(const MdgContext& ctx, int i, double t,
                        const Vector& x, double horizon, double epsilon);

// dV_i/dt + 1/2 tr(sigma sigma' hess V_i) + <grad V_i, u> + c_i, with u
// entering through player i's block only.
double hjb_residual(const MdgContext& ctx, int i, const Vector& x,
                    const Vector& u_i, double epsilon);

struct HjbScanReport {
  int samples = 0;
  double max_abs_at_mp = 0.0;
  double min_off_policy = kInfinity;
  int grid_argmin_misses = 0;  // states whose grid minimum is not at u*
};

HjbScanReport hjb_residual_scan(const MdgContext& ctx, double epsilon,
                                int samples, std::uint64_t seed,
                                int off_policy_per_state = 20,
                                double radius = 1.0);

struct McTimeAverageReport {
  double lhs_mean = 0.0;  // E[<Psi(ybar), Ytilde_T - ybar>]
  double lhs_se = 0.0;
  double rhs = 0.0;       // (1/T) sum D_{phi*}(x0_i, xbar_i) + eps n
  double noise_term = 0.0;
  double slack = 0.0;     // rhs - (lhs_mean - 3 SE)
  bool holds = false;
  int paths_used = 0;
  int aborted = 0;
};

McTimeAverageReport mc_time_average_bound(const MdgContext& ctx,
                                          const SdeConfig& cfg,
                                          const EnsembleStats& stats);

// exp(-mu t) d0 + (1 - exp(-mu t)) eps n / mu.
double stochastic_exponential_bound(double d0, double mu, double epsilon,
                                    int n, double t);

struct McExpCheckpoint {
  double t = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double bound = 0.0;
};

struct McExponentialReport {
  double mu = 0.0;
  double noise_floor = 0.0;  // eps n / mu
  double terminal_mean = 0.0;
  std::vector<McExpCheckpoint> checkpoints;  // 20-point subsample
  bool holds = false;
  double worst_margin = kInfinity;  // min bound - (mean - 3 SE)
};

// Throws InsufficientPaths if SE / bound > 0.5 at a checked time.
McExponentialReport mc_exponential_bound(const MdgContext& ctx,
                                         const SdeConfig& cfg,
                                         const EnsembleStats& stats,
                                         double mu);

}  // namespace mirrorplay

#endif  // MIRRORPLAY_STOCHASTIC_H_
