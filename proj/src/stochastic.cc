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

#include "mirrorplay/stochastic.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mirrorplay/rng.h"

namespace mirrorplay {

void SdeConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvariantError("sde: epsilon must be positive");
  if (paths < 2) throw InvariantError("sde: at least 2 paths are required");
  if (record_stride < 0) throw InvariantError("sde: stride must be >= 0");
  SimConfig{horizon, dt, x0}.validate();
}

int SdeConfig::steps() const {
  return static_cast<int>(std::llround(horizon / dt));
}

int SdeConfig::effective_stride() const {
  if (record_stride > 0) return record_stride;
  return std::max(1, (steps() + 999) / 1000);
}

std::vector<Matrix> volatility_blocks(const AggregatedMirror& mirror,
                                      const Vector& x, double epsilon) {
  std::vector<Matrix> blocks;
  const double scale = std::sqrt(2.0 * epsilon);
  for (int i = 0; i < mirror.num_players(); ++i) {
    const Matrix h = mirror.part(i).hess_phi_conj(mirror.block(x, i));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < 1e-14) {
      throw SingularHessianError("conjugate Hessian is numerically singular");
    }
    const Matrix& v = eig.eigenvectors();
    blocks.push_back(scale * v *
                     eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                     v.transpose());
  }
  return blocks;
}

double ito_correction(const AggregatedMirror& mirror, int i, const Vector& x,
                      double epsilon) {
  const Matrix sigma = volatility_blocks(mirror, x, epsilon)[i];
  const Matrix h = mirror.part(i).hess_phi_conj(mirror.block(x, i));
  return 0.5 * (sigma * sigma.transpose() * h).trace();
}

namespace {

struct RecordPlan {
  int steps;
  int stride;
  std::vector<int> nodes;
};

RecordPlan plan_records(const SdeConfig& cfg) {
  RecordPlan plan{cfg.steps(), cfg.effective_stride(), {}};
  for (int k = 0; k <= plan.steps; k += plan.stride) plan.nodes.push_back(k);
  if (plan.nodes.back() != plan.steps) plan.nodes.push_back(plan.steps);
  return plan;
}

// One Euler-Maruyama path. With `cached_sigma` set the volatility is reused
// at every step (quadratic mirrors have constant conjugate Hessians).
PathResult simulate_path(const MdgContext& ctx, const SdeConfig& cfg,
                         const RecordPlan& plan, int path,
                         const std::optional<std::vector<Matrix>>& cached_sigma) {
  const Game& game = ctx.game;
  const AggregatedMirror& mirror = ctx.mirror;
  const int n = game.total_dim();
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);

  PathResult result;
  result.recorded.resize(n, static_cast<Eigen::Index>(plan.nodes.size()));
  result.divergence.reserve(plan.nodes.size());

  Vector x = cfg.x0;
  Vector y = mirror.grad_phi_conj(x);
  Vector integral = Vector::Zero(n);
  Vector noise(n);
  size_t next_record = 0;
  try {
    for (int k = 0;; ++k) {
      if (next_record < plan.nodes.size() && plan.nodes[next_record] == k) {
        result.recorded.col(static_cast<Eigen::Index>(next_record)) = x;
        result.divergence.push_back(total_value(ctx, x));
        ++next_record;
      }
      if (k == plan.steps) break;

      const Vector drift = mp_vector_field(game, mirror, x);
      PhiloxStream rng(cfg.seed, static_cast<std::uint64_t>(path),
                       static_cast<std::uint32_t>(k));
      for (int j = 0; j < n; ++j) noise[j] = rng.normal();
      std::vector<Matrix> fresh;
      if (!cached_sigma) fresh = volatility_blocks(mirror, x, cfg.epsilon);
      const std::vector<Matrix>& sigma = cached_sigma ? *cached_sigma : fresh;
      Vector increment(n);
      for (int i = 0; i < mirror.num_players(); ++i) {
        increment.segment(mirror.offset(i), mirror.dim(i)) =
            sigma[i] * noise.segment(mirror.offset(i), mirror.dim(i));
      }
      x += dt * drift + sqrt_dt * increment;
      if (!x.allFinite()) {
        throw DomainEscapeError("non-finite SDE state", (k + 1) * dt);
      }
      const Vector y_next = mirror.grad_phi_conj(x);
      game.check_state(y_next, (k + 1) * dt);
      integral += 0.5 * dt * (y + y_next);
      y = y_next;
    }
  } catch (const Error& e) {
    result.aborted = true;
    result.message = e.what();
  }
  result.time_average = integral / cfg.horizon;
  return result;
}

std::vector<double> record_times(const SdeConfig& cfg,
                                 const RecordPlan& plan) {
  std::vector<double> times;
  for (int k : plan.nodes) times.push_back(k * cfg.dt);
  return times;
}

}  // namespace

Ensemble euler_maruyama_paths(const MdgContext& ctx, const SdeConfig& cfg) {
  cfg.validate();
  const RecordPlan plan = plan_records(cfg);
  std::optional<std::vector<Matrix>> cached;
  if (ctx.mirror.all_quadratic()) {
    cached = volatility_blocks(ctx.mirror, cfg.x0, cfg.epsilon);
  }

  Ensemble ensemble;
  ensemble.record_times = record_times(cfg, plan);
  ensemble.paths.resize(cfg.paths);
#pragma omp parallel for schedule(dynamic, 8)
  for (int p = 0; p < cfg.paths; ++p) {
    ensemble.paths[p] = simulate_path(ctx, cfg, plan, p, cached);
  }
  for (const PathResult& r : ensemble.paths) ensemble.aborted += r.aborted;
  return ensemble;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

void mean_and_se(const std::vector<double>& samples, double& mean,
                 double& se) {
  const double m = static_cast<double>(samples.size());
  mean = pairwise_sum(samples) / m;
  std::vector<double> sq(samples.size());
  for (size_t j = 0; j < samples.size(); ++j) {
    sq[j] = (samples[j] - mean) * (samples[j] - mean);
  }
  se = samples.size() > 1 ? std::sqrt(pairwise_sum(sq) / (m - 1.0) / m) : 0.0;
}

}  // namespace

EnsembleStats ensemble_stats(const Ensemble& ensemble) {
  EnsembleStats stats;
  stats.times = ensemble.record_times;
  stats.aborted = ensemble.aborted;
  std::vector<const PathResult*> ok;
  for (const PathResult& r : ensemble.paths) {
    if (!r.aborted) ok.push_back(&r);
  }
  stats.paths_used = static_cast<int>(ok.size());
  if (ok.empty()) throw InsufficientPaths("every path was aborted");
  std::vector<double> samples(ok.size());
  for (size_t k = 0; k < stats.times.size(); ++k) {
    for (size_t p = 0; p < ok.size(); ++p) samples[p] = ok[p]->divergence[k];
    double mean, se;
    mean_and_se(samples, mean, se);
    stats.mean.push_back(mean);
    stats.standard_error.push_back(se);
  }
  for (const PathResult* r : ok) stats.time_averages.push_back(r->time_average);
  return stats;
}

double stochastic_value(const MdgContext& ctx, int i, double t,
                        const Vector& x, double horizon, double epsilon) {
  return value(make_value_fn(ctx, i), x) +
         epsilon * ctx.game.dim(i) * (horizon - t);
}

double hjb_residual(const MdgContext& ctx, int i, const Vector& x,
                    const Vector& u_i, double epsilon) {
  const double c = stage_cost(ctx, i, x, u_i);
  if (c == kInfinity) return kInfinity;
  const int off = ctx.game.offset(i), ni = ctx.game.dim(i);
  const double dv_dt = -epsilon * ni;
  const double second_order = ito_correction(ctx.mirror, i, x, epsilon);
  const double transport =
      value_gradient(ctx, i, x).segment(off, ni).dot(u_i);
  return dv_dt + second_order + transport + c;
}

HjbScanReport hjb_residual_scan(const MdgContext& ctx, double epsilon,
                                int samples, std::uint64_t seed,
                                int off_policy_per_state, double radius) {
  constexpr double kControlRadius = 5.0;
  const Game& game = ctx.game;
  HjbScanReport report;
  report.samples = samples;
  for (int s = 0; s < samples; ++s) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(s));
    Vector x = ctx.x_bar;
    for (int j = 0; j < x.size(); ++j) x[j] += rng.uniform(-radius, radius);
    const Vector field = mp_vector_field(game, ctx.mirror, x);
    for (int i = 0; i < game.num_players(); ++i) {
      const int off = game.offset(i), ni = game.dim(i);
      const Vector u_star = field.segment(off, ni);
      const double at_mp = hjb_residual(ctx, i, x, u_star, epsilon);
      report.max_abs_at_mp = std::max(report.max_abs_at_mp, std::abs(at_mp));

      for (int q = 0; q < off_policy_per_state; ++q) {
        Vector u = u_star;
        for (int j = 0; j < ni; ++j) {
          u[j] += rng.uniform(-kControlRadius, kControlRadius);
        }
        report.min_off_policy =
            std::min(report.min_off_policy, hjb_residual(ctx, i, x, u, epsilon));
      }

      // Coordinate grid u* + delta e_j, delta in [-1, 1] step 0.1.
      for (int j = 0; j < ni; ++j) {
        int best = 0;
        double best_value = kInfinity;
        for (int g = -10; g <= 10; ++g) {
          Vector u = u_star;
          u[j] += 0.1 * g;
          const double r = hjb_residual(ctx, i, x, u, epsilon);
          if (r < best_value) {
            best_value = r;
            best = g;
          }
        }
        if (best != 0) ++report.grid_argmin_misses;
      }
    }
  }
  return report;
}

McTimeAverageReport mc_time_average_bound(const MdgContext& ctx,
                                          const SdeConfig& cfg,
                                          const EnsembleStats& stats) {
  const Vector grad_at_eq = ctx.game.pseudogradient(ctx.y_bar);
  std::vector<double> lhs;
  for (const Vector& avg : stats.time_averages) {
    lhs.push_back(grad_at_eq.dot(avg - ctx.y_bar));
  }
  McTimeAverageReport report;
  report.paths_used = stats.paths_used;
  report.aborted = stats.aborted;
  mean_and_se(lhs, report.lhs_mean, report.lhs_se);
  report.noise_term = cfg.epsilon * ctx.game.total_dim();
  report.rhs = total_value(ctx, cfg.x0) / cfg.horizon + report.noise_term;
  report.slack = report.rhs - (report.lhs_mean - 3.0 * report.lhs_se);
  report.holds = report.slack >= 0.0;
  return report;
}

double stochastic_exponential_bound(double d0, double mu, double epsilon,
                                    int n, double t) {
  const double decay = std::exp(-mu * t);
  return decay * d0 + (1.0 - decay) * epsilon * n / mu;
}

McExponentialReport mc_exponential_bound(const MdgContext& ctx,
                                         const SdeConfig& cfg,
                                         const EnsembleStats& stats,
                                         double mu) {
  if (!(mu > 0.0)) {
    throw InvariantError("mc exponential bound requires mu > 0");
  }
  constexpr int kCheckpoints = 20;
  const int n = ctx.game.total_dim();
  const int records = static_cast<int>(stats.times.size());
  const double d0 = total_value(ctx, cfg.x0);

  McExponentialReport report;
  report.mu = mu;
  report.noise_floor = cfg.epsilon * n / mu;
  report.terminal_mean = stats.mean.back();
  report.holds = true;
  for (int j = 0; j < kCheckpoints; ++j) {
    const int k = static_cast<int>(std::lround(
        static_cast<double>(j) * (records - 1) / (kCheckpoints - 1)));
    McExpCheckpoint cp;
    cp.t = stats.times[k];
    cp.mean = stats.mean[k];
    cp.se = stats.standard_error[k];
    cp.bound = stochastic_exponential_bound(d0, mu, cfg.epsilon, n, cp.t);
    if (cp.se > 0.5 * cp.bound) {
      std::ostringstream os;
      os << "standard error " << cp.se << " exceeds half the bound "
         << cp.bound << " at t=" << cp.t << " with " << stats.paths_used
         << " paths";
      throw InsufficientPaths(os.str());
    }
    const double margin = cp.bound - (cp.mean - 3.0 * cp.se);
    report.worst_margin = std::min(report.worst_margin, margin);
    // At t = 0 mean and bound coincide up to summation roundoff.
    if (margin < -1e-12 * cp.bound) report.holds = false;
    report.checkpoints.push_back(cp);
  }
  return report;
}

}  // namespace mirrorplay
