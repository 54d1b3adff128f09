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

#include "mirrorplay/cli/checks.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "mirrorplay/analysis.h"
#include "mirrorplay/rng.h"

namespace mirrorplay::cli {
namespace {

constexpr int kDeviationTrials = 200;
constexpr int kLemmaSamples = 500;
constexpr int kItoStates = 100;
constexpr int kHjbSamples = 100;
constexpr double kDefaultEpsilon = 0.01;

// Fills lhs/rhs/margin for a one-sided "value <= limit" comparison.
void upper_bound(CheckRecord& r, double value, double limit) {
  r.lhs = value;
  r.rhs = limit;
  r.residual = value;
  r.tolerance = limit;
  r.margin = limit - value;
  r.status = value <= limit ? CheckStatus::kPass : CheckStatus::kFail;
}

std::string format(const char* fmt, double a, double b = 0.0,
                   double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

bool is_conservative(const Game& game) {
  const std::optional<Matrix> j = game.pseudogradient_jacobian();
  if (!j) return false;
  return (*j + j->transpose()).cwiseAbs().maxCoeff() <= 1e-14;
}

double epsilon_of(const RunConfig& cfg) {
  return cfg.stochastic ? cfg.stochastic->epsilon : kDefaultEpsilon;
}

CheckRecord check_lemma1(CheckSession& s) {
  CheckRecord r;
  const Lemma1Scan scan =
      lemma1_scan(s.context(), kLemmaSamples, s.config().seed);
  r.lhs = scan.min_value;
  r.rhs = -1e-10;
  r.residual = scan.max_abs_at_mp;
  r.tolerance = 1e-9;
  r.margin = std::min(scan.min_value + 1e-10, 1e-9 - scan.max_abs_at_mp);
  r.status = r.margin >= 0 ? CheckStatus::kPass : CheckStatus::kFail;
  r.message = format("%g samples; min off-policy value %.3g", scan.samples,
                     scan.min_off_policy);
  return r;
}

CheckRecord check_variational(CheckSession& s) {
  CheckRecord r;
  const DualTrajectory& traj = s.trajectory();
  const VariationalResidual coarse = variational_residual(s.context(), traj);
  SimConfig fine_cfg = s.config().sim;
  fine_cfg.dt /= 2;
  const VariationalResidual fine = variational_residual(
      s.context(), integrate_mp(s.game(), s.mirror(), fine_cfg));
  const double ratio =
      coarse.max_finite_difference / fine.max_finite_difference;
  r.lhs = coarse.max_analytic;
  r.rhs = ratio;
  r.residual = coarse.max_analytic;
  r.tolerance = 1e-9;
  r.margin = std::min(1e-9 - coarse.max_analytic,
                      0.5 - std::abs(ratio - 4.0));
  const bool stationary = coarse.max_finite_difference < 1e-13;
  if (stationary) r.margin = 1e-9 - coarse.max_analytic;
  r.status = r.margin >= 0 ? CheckStatus::kPass : CheckStatus::kFail;
  r.message = format(
      "finite-difference residual %.3g -> %.3g when dt halves (ratio %.3f)",
      coarse.max_finite_difference, fine.max_finite_difference, ratio);
  if (stationary) r.message += "; trajectory is stationary, ratio not used";
  return r;
}

CheckRecord check_bellman(CheckSession& s) {
  CheckRecord r;
  const MdgContext& ctx = s.context();
  const DualTrajectory& traj = s.trajectory();
  double worst = 0.0;
  std::ostringstream msg;
  for (int i = 0; i < ctx.num_players(); ++i) {
    const double j = cumulative_cost(ctx, traj, traj.control, i);
    const double v = value(make_value_fn(ctx, i), traj.state(0));
    worst = std::max(worst, std::abs(j - v));
    msg << (i ? "; " : "") << "J_" << i + 1 << "=" << j << " V_" << i + 1
        << "=" << v;
  }
  upper_bound(r, worst, 1e-4);
  r.message = msg.str();
  return r;
}

CheckRecord check_deviation(CheckSession& s) {
  CheckRecord r;
  double min_gap = kInfinity, worst_zero = 0.0;
  int rejected = 0, infinite = 0;
  for (int i = 0; i < s.game().num_players(); ++i) {
    const DeviationReport rep =
        deviation_test(s.context(), s.config().sim, PerturbationSpec{},
                       kDeviationTrials, s.config().seed, i);
    min_gap = std::min(min_gap, rep.min_gap);
    worst_zero = std::max(worst_zero, std::abs(rep.zero_perturbation_gap));
    rejected += rep.rejected;
    infinite += rep.infinite;
  }
  r.lhs = min_gap;
  r.rhs = -1e-8;
  r.residual = worst_zero;
  r.tolerance = 1e-4;
  r.margin = std::min(min_gap + 1e-8, 1e-4 - worst_zero);
  r.status = r.margin >= 0 ? CheckStatus::kPass : CheckStatus::kFail;
  std::ostringstream msg;
  msg << kDeviationTrials << " trials per player; " << rejected
      << " resampled; " << infinite << " with infinite cost";
  r.message = msg.str();
  return r;
}

CheckRecord check_lyapunov(CheckSession& s) {
  CheckRecord r;
  const LyapunovSeries series = lyapunov_series(s.context(), s.trajectory());
  const double increase = series.max_increase();
  r.lhs = increase;
  r.rhs = 1e-10;
  r.residual = increase;
  r.tolerance = 1e-10;
  r.margin = 1e-10 - increase;
  r.message = format("max per-step increase %.3g", increase);
  if (is_conservative(s.game())) {
    const double drift = series.max_drift();
    r.margin = std::min(r.margin, 1e-6 - drift);
    r.message += format("; conservative game, max drift %.3g (tol 1e-6)",
                        drift);
  }
  r.status = r.margin >= 0 ? CheckStatus::kPass : CheckStatus::kFail;
  return r;
}

CheckRecord check_time_average(CheckSession& s) {
  CheckRecord r;
  const TimeAverageReport rep =
      time_average_bound_check(s.context(), s.trajectory());
  r.lhs = rep.lhs;
  r.rhs = rep.rhs;
  r.residual = rep.slack;
  r.tolerance = -1e-8;
  r.margin = rep.slack + 1e-8;
  r.status = r.margin >= 0 ? CheckStatus::kPass : CheckStatus::kFail;
  r.message = format("display-form left side %.6g (logged only)",
                     rep.lhs_display);
  return r;
}

CheckRecord check_exp_decay(CheckSession& s) {
  CheckRecord r;
  const std::optional<double> mu = s.mu();
  if (!mu || *mu <= 0) {
    r.message = "game is not strongly monotone for this mirror (mu = 0)";
    return r;
  }
  const ExponentialDecayReport rep =
      exponential_decay_check(s.context(), s.trajectory(), *mu);
  r.lhs = rep.fitted_slope;
  r.rhs = -*mu + 0.05;
  r.residual = rep.worst_ratio;
  r.tolerance = 1 + 1e-3;
  if (rep.vacuous) {
    r.margin = rep.pointwise_holds ? 0.0 : -1.0;
    r.message = "V(0) below the fit floor; bound is vacuous";
  } else {
    r.margin = std::min(r.rhs - r.lhs, r.tolerance - rep.worst_ratio);
    r.message = format("mu = %.6g; worst V(t)/(exp(-mu t)V(0)) = %.6g; %g fit nodes",
                       *mu, rep.worst_ratio, rep.fit_nodes);
  }
  r.status = rep.pointwise_holds && r.margin >= 0 ? CheckStatus::kPass
                                                  : CheckStatus::kFail;
  return r;
}

CheckRecord check_ito(CheckSession& s) {
  CheckRecord r;
  const double eps = epsilon_of(s.config());
  const AggregatedMirror& mirror = s.mirror();
  double worst = 0.0;
  for (int k = 0; k < kItoStates; ++k) {
    PhiloxStream rng(s.config().seed, static_cast<std::uint64_t>(k), 7);
    Vector x = s.context().x_bar;
    for (Eigen::Index j = 0; j < x.size(); ++j) x[j] += rng.uniform(-1, 1);
    for (int i = 0; i < mirror.num_players(); ++i) {
      worst = std::max(worst, std::abs(ito_correction(mirror, i, x, eps) -
                                       eps * mirror.dim(i)));
    }
  }
  upper_bound(r, worst, 1e-12);
  r.message = format("epsilon = %g, %g random states", eps, kItoStates);
  return r;
}

CheckRecord check_hjb(CheckSession& s) {
  CheckRecord r;
  const double eps = epsilon_of(s.config());
  const HjbScanReport rep =
      hjb_residual_scan(s.context(), eps, kHjbSamples, s.config().seed);
  r.lhs = rep.max_abs_at_mp;
  r.rhs = rep.min_off_policy;
  r.residual = rep.max_abs_at_mp;
  r.tolerance = 1e-9;
  r.margin = 1e-9 - rep.max_abs_at_mp;
  const bool ok = r.margin >= 0 && rep.min_off_policy > 0 &&
                  rep.grid_argmin_misses == 0;
  r.status = ok ? CheckStatus::kPass : CheckStatus::kFail;
  r.message = format(
      "%g states; min off-policy residual %.3g; grid argmin misses %g",
      rep.samples, rep.min_off_policy, rep.grid_argmin_misses);
  return r;
}

CheckRecord check_mc_time_average(CheckSession& s) {
  CheckRecord r;
  if (!s.config().stochastic) {
    r.message = "no stochastic section in the config";
    return r;
  }
  const McTimeAverageReport rep =
      mc_time_average_bound(s.context(), s.sde(), s.ensemble_stats());
  r.lhs = rep.lhs_mean - 3 * rep.lhs_se;
  r.rhs = rep.rhs;
  r.residual = rep.lhs_mean;
  r.tolerance = 3 * rep.lhs_se;
  r.margin = rep.slack;
  r.status = rep.holds ? CheckStatus::kPass : CheckStatus::kFail;
  std::ostringstream msg;
  msg << rep.paths_used << " paths (" << rep.aborted << " aborted); noise term "
      << rep.noise_term;
  r.message = msg.str();
  return r;
}

CheckRecord check_mc_exp(CheckSession& s) {
  CheckRecord r;
  if (!s.config().stochastic) {
    r.message = "no stochastic section in the config";
    return r;
  }
  const std::optional<double> mu = s.mu();
  if (!mu || *mu <= 0) {
    r.message = "game is not strongly monotone for this mirror (mu = 0)";
    return r;
  }
  try {
    const McExponentialReport rep = mc_exponential_bound(
        s.context(), s.sde(), s.ensemble_stats(), *mu);
    r.lhs = rep.terminal_mean;
    r.rhs = rep.noise_floor;
    r.residual = rep.worst_margin;
    r.tolerance = 0.0;
    r.margin = rep.worst_margin;
    r.status = rep.holds ? CheckStatus::kPass : CheckStatus::kFail;
    r.message = format("mu = %.6g; terminal mean %.6g vs noise floor %.6g",
                       *mu, rep.terminal_mean, rep.noise_floor);
  } catch (const InsufficientPaths& e) {
    r.status = CheckStatus::kFail;
    r.margin = -kInfinity;
    r.message = std::string("insufficient paths: ") + e.what();
  }
  return r;
}

CheckRecord check_order(CheckSession& s) {
  CheckRecord r;
  const OrderCheck rep =
      rk4_order_ratio(s.game(), s.mirror(), s.config().sim.x0, 2.0, 0.1);
  r.lhs = rep.ratio;
  r.rhs = 16.0;
  r.residual = std::abs(rep.ratio - 16.0);
  r.tolerance = 4.0;
  if (!std::isfinite(rep.ratio)) {
    r.message = "trajectory is stationary; order ratio undefined";
    return r;
  }
  r.margin = 4.0 - r.residual;
  r.status = r.margin >= 0 ? CheckStatus::kPass : CheckStatus::kFail;
  r.message = format("dt ladder %g, %g, %g over T = 2", rep.coarse_dt,
                     rep.coarse_dt / 2, rep.coarse_dt / 4);
  return r;
}

using CheckFn = std::function<CheckRecord(CheckSession&)>;

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> checks{
      {"lemma1_scan", check_lemma1},
      {"variational_identity", check_variational},
      {"bellman_value", check_bellman},
      {"deviation", check_deviation},
      {"lyapunov_decay", check_lyapunov},
      {"time_average_bound", check_time_average},
      {"exp_decay", check_exp_decay},
      {"ito_correction", check_ito},
      {"hjb_residual", check_hjb},
      {"mc_time_average", check_mc_time_average},
      {"mc_exp_bound", check_mc_exp},
      {"order_check", check_order}};
  return checks;
}

}  // namespace

CheckSession::CheckSession(const RunConfig& cfg)
    : cfg_(cfg), game_(build_game(cfg_)), mirror_(build_mirror(cfg_)) {
  const Vector y_bar =
      resolve_equilibrium(*game_, mirror_, cfg_.sim.x0);
  ctx_ = std::make_unique<MdgContext>(*game_, mirror_, y_bar);
  mu_ = strong_monotonicity_modulus(*game_, mirror_);
}

const DualTrajectory& CheckSession::trajectory() {
  if (!trajectory_) trajectory_ = integrate_mp(*game_, mirror_, cfg_.sim);
  return *trajectory_;
}

const SdeConfig& CheckSession::sde() const {
  if (!cfg_.stochastic) {
    throw ConfigError("config has no 'stochastic' section");
  }
  return *cfg_.stochastic;
}

const Ensemble& CheckSession::ensemble() {
  if (!ensemble_) ensemble_ = euler_maruyama_paths(*ctx_, sde());
  return *ensemble_;
}

const EnsembleStats& CheckSession::ensemble_stats() {
  if (!stats_) stats_ = mirrorplay::ensemble_stats(ensemble());
  return *stats_;
}

CheckRecord CheckSession::run(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown check '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  CheckRecord record;
  try {
    record = it->second(*this);
  } catch (const InsufficientDecayData& e) {
    record = CheckRecord{};
    record.status = CheckStatus::kFail;
    record.margin = -kInfinity;
    record.message = std::string("insufficient decay data: ") + e.what();
  }
  record.name = name;
  record.wall_time_seconds = std::chrono::duration<double>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
  return record;
}

std::vector<std::string> requested_checks(const RunConfig& cfg) {
  return cfg.checks.empty() ? registered_checks() : cfg.checks;
}

}  // namespace mirrorplay::cli
