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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from closed forms computed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mirrorplay/analysis.h"
#include "mirrorplay/cli/report.h"
#include "mirrorplay/mdg.h"
#include "mirrorplay/rng.h"
#include "mirrorplay/stochastic.h"
#include "oracles.h"

using namespace mirrorplay;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

// Scalar Cournot with M = 10, p = (1, 2) and the identity mirror.
struct Cournot {
  CournotGame game{{vec({10}), vec({1}), vec({2})}};
  AggregatedMirror mirror = AggregatedMirror::Identity({1, 1});
  MdgContext ctx{game, mirror, *game.equilibrium()};
};

struct Bilinear {
  explicit Bilinear(double b = 1.0) : game(b * Matrix::Ones(1, 1)) {}
  BilinearGame game;
  AggregatedMirror mirror = AggregatedMirror::Identity({1, 1});
  MdgContext ctx{game, mirror, vec({0, 0})};
};

// Closed-form equilibrium of the scalar Cournot game.
const Vector kCournotNash = vec({10.0 / 3, 7.0 / 3});

// Shared by criteria 11 and 12.
struct CournotEnsemble {
  Cournot c;
  SdeConfig cfg;
  EnsembleStats stats;
  double seconds = 0;
};

CournotEnsemble& cournot_ensemble() {
  static CournotEnsemble e = [] {
    CournotEnsemble out;
    out.cfg.epsilon = 0.01;
    out.cfg.paths = 1000;
    out.cfg.dt = 1e-3;
    out.cfg.horizon = 10;
    out.cfg.seed = 20260101;
    out.cfg.x0 = vec({0, 0});
    const auto start = std::chrono::steady_clock::now();
    out.stats = ensemble_stats(euler_maruyama_paths(out.c.ctx, out.cfg));
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return out;
  }();
  return e;
}

Outcome variational_identity() {
  Cournot c;
  const VariationalResidual coarse = variational_residual(
      c.ctx, integrate_mp(c.game, c.mirror, SimConfig{5, 1e-3, vec({0, 0})}));
  const VariationalResidual fine = variational_residual(
      c.ctx, integrate_mp(c.game, c.mirror, SimConfig{5, 5e-4, vec({0, 0})}));
  const double ratio = coarse.max_finite_difference / fine.max_finite_difference;
  return {coarse.max_analytic <= 1e-9 && ratio >= 3.5 && ratio <= 4.5,
          fmt("analytic max %.2e (<= 1e-9); finite-difference %.3e -> %.3e, "
              "ratio %.3f (in [3.5, 4.5])",
              coarse.max_analytic, coarse.max_finite_difference,
              fine.max_finite_difference, ratio)};
}

Outcome bellman_value() {
  Cournot c;
  const DualTrajectory traj =
      integrate_mp(c.game, c.mirror, SimConfig{5, 1e-3, vec({0, 0})});
  // V_i(0) = |x_bar_i|^2 / 2 from the closed-form equilibrium.
  const double v1 = 0.5 * kCournotNash[0] * kCournotNash[0];
  const double v2 = 0.5 * kCournotNash[1] * kCournotNash[1];
  const double e1 = std::abs(cumulative_cost(c.ctx, traj, traj.control, 0) - v1);
  const double e2 = std::abs(cumulative_cost(c.ctx, traj, traj.control, 1) - v2);
  return {e1 <= 1e-4 && e2 <= 1e-4 && std::abs(v1 - 50.0 / 9) < 1e-14,
          fmt("|J_1 - 50/9| = %.2e, |J_2 - 49/18| = %.2e (<= 1e-4)", e1, e2)};
}

Outcome deviation() {
  Cournot c;
  const SimConfig cfg{5, 1e-3, vec({0, 0})};
  double min_gap = kInfinity, zero = 0;
  for (int i = 0; i < 2; ++i) {
    const DeviationReport r =
        deviation_test(c.ctx, cfg, PerturbationSpec{}, 200, 1234, i);
    min_gap = std::min(min_gap, r.min_gap);
    zero = std::max(zero, std::abs(r.zero_perturbation_gap));
  }
  return {min_gap >= -1e-8 && zero <= 1e-4,
          fmt("200 trials per player: min gap %.3e (>= -1e-8); zero "
              "perturbation |gap| %.2e (<= 1e-4)",
              min_gap, zero)};
}

Outcome lemma1() {
  Cournot c;
  const Lemma1Scan s = lemma1_scan(c.ctx, 500, 77);
  return {s.min_value >= -1e-10 && s.max_abs_at_mp <= 1e-9 &&
              s.min_off_policy > 0,
          fmt("500 samples: min %.3e (>= -1e-10); max |value| at MP control "
              "%.2e (<= 1e-9); min off-policy %.3e (> 0)",
              s.min_value, s.max_abs_at_mp, s.min_off_policy)};
}

Outcome lyapunov_decay() {
  Cournot c;
  double worst = -kInfinity;
  worst = std::max(worst, lyapunov_series(c.ctx, integrate_mp(c.game, c.mirror,
                                                                SimConfig{10, 1e-3, vec({0, 0})}))
                              .max_increase());
  // Same game under entropy and weighted quadratic mirrors.
  const AggregatedMirror ent({MirrorMap::NegativeEntropy(1),
                              MirrorMap::NegativeEntropy(1)});
  const MdgContext ectx(c.game, ent, *c.game.equilibrium());
  worst = std::max(worst, lyapunov_series(ectx, integrate_mp(c.game, ent,
                                                             SimConfig{10, 1e-3, vec({0, 0})}))
                              .max_increase());
  const AggregatedMirror quad({MirrorMap::Quadratic(2 * Matrix::Identity(1, 1)),
                               MirrorMap::Quadratic(0.5 * Matrix::Identity(1, 1))});
  const MdgContext qctx(c.game, quad, *c.game.equilibrium());
  worst = std::max(worst, lyapunov_series(qctx, integrate_mp(c.game, quad,
                                                             SimConfig{10, 1e-3, vec({0, 0})}))
                              .max_increase());
  // Two-dimensional Cournot and a coupled quadratic game.
  const CournotGame c2({vec({12, 9}), vec({1, 2}), vec({2, 1})});
  const AggregatedMirror id2 = AggregatedMirror::Identity({2, 2});
  const MdgContext c2ctx(c2, id2, *c2.equilibrium());
  worst = std::max(worst, lyapunov_series(c2ctx, integrate_mp(c2, id2,
                                                              SimConfig{10, 1e-3, Vector::Zero(4)}))
                              .max_increase());
  QuadraticGameParams qp;
  qp.players.push_back({2 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), vec({-3, -3})});
  qp.players.push_back({2 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), vec({-2, -4})});
  const QuadraticGame qg(qp);
  const AggregatedMirror ent2({MirrorMap::NegativeEntropy(2),
                               MirrorMap::NegativeEntropy(2)});
  const MdgContext qgctx(qg, ent2, *qg.equilibrium());
  worst = std::max(worst, lyapunov_series(qgctx, integrate_mp(qg, ent2,
                                                              SimConfig{10, 1e-3, Vector::Zero(4)}))
                              .max_increase());

  Bilinear b;
  const LyapunovSeries bs = lyapunov_series(
      b.ctx, integrate_mp(b.game, b.mirror, SimConfig{10, 1e-3, vec({1, 0})}));
  worst = std::max(worst, bs.max_increase());
  const double drift = bs.max_drift();
  return {worst <= 1e-10 && drift <= 1e-6,
          fmt("max per-step increase %.2e over 6 monotone setups (<= 1e-10); "
              "bilinear drift over T=10 %.2e (<= 1e-6)",
              worst, drift)};
}

Outcome exponential_rate() {
  Cournot c;
  const double mu = *strong_monotonicity_modulus(c.game, c.mirror);
  // Oracle: S = [[2, 1], [1, 2]], A = I, so mu = 2 * lambda_min(S) = 2.
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  const double mu_oracle =
      2 * Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues().minCoeff();
  const ExponentialDecayReport r = exponential_decay_check(
      c.ctx, integrate_mp(c.game, c.mirror, SimConfig{5, 1e-3, vec({0, 0})}), mu);
  return {std::abs(mu - 2) < 1e-12 && std::abs(mu_oracle - 2) < 1e-12 &&
              r.pointwise_holds && r.fitted_slope <= -2 + 0.05,
          fmt("mu %.12g (oracle %.12g); worst V/(e^{-2t}V0) %.6f (<= 1.001); "
              "fitted slope %.4f (<= -1.95)",
              mu, mu_oracle, r.worst_ratio, r.fitted_slope)};
}

Outcome time_average_bound() {
  Cournot c;
  const TimeAverageReport rc = time_average_bound_check(
      c.ctx, integrate_mp(c.game, c.mirror, SimConfig{10, 1e-3, vec({0, 0})}));
  Bilinear b;
  const TimeAverageReport rb = time_average_bound_check(
      b.ctx, integrate_mp(b.game, b.mirror, SimConfig{10, 1e-3, vec({1, 0})}));
  // Rotation rate pi/15: |avg| = 2|sin(bT/2)|/(bT) halves exactly on 10/20/40.
  Bilinear slow(std::numbers::pi / 15);
  const std::vector<double> d =
      average_convergence_probe(slow.ctx, vec({1, 0}), {10, 20, 40}, 1e-3);
  const double r1 = d[1] / d[0], r2 = d[2] / d[1];
  const bool pass = rc.slack >= -1e-8 && rb.slack >= -1e-8 && r1 >= 0.4 &&
                    r1 <= 0.6 && r2 >= 0.4 && r2 <= 0.6;
  return {pass, fmt("slack cournot %.3e, bilinear %.3e (>= -1e-8); "
                    "average-distance ratios %.4f, %.4f (in [0.4, 0.6])",
                    rc.slack, rb.slack, r1, r2)};
}

Outcome cournot_closed_form() {
  Cournot c;
  const CournotEquilibrium eq = cournot_nash(c.game.cournot_params());
  const DualTrajectory traj =
      integrate_mp(c.game, c.mirror, SimConfig{30, 1e-3, vec({0, 0})});
  const double gap = (eq.y - traj.y(traj.num_nodes() - 1)).lpNorm<Eigen::Infinity>();
  const double vi = vi_residual(c.game, eq.y);
  const double oracle = (eq.y - kCournotNash).lpNorm<Eigen::Infinity>();
  return {gap <= 1e-6 && vi <= 1e-10 && oracle < 1e-14,
          fmt("|nash - MP(T=30)| %.2e (<= 1e-6); VI residual %.2e (<= 1e-10)",
              gap, vi)};
}

Outcome ito_correction_check() {
  PhiloxStream rng(5, 5);
  const AggregatedMirror quad({MirrorMap::Quadratic(vec({2, 3}).asDiagonal()),
                               MirrorMap::Identity(1)});
  const AggregatedMirror ent({MirrorMap::NegativeEntropy(2),
                              MirrorMap::NegativeEntropy(1)});
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    const Vector x = vec({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)});
    for (const AggregatedMirror* m : {&quad, &ent}) {
      for (int i = 0; i < 2; ++i) {
        worst = std::max(worst, std::abs(ito_correction(*m, i, x, 0.01) -
                                         0.01 * m->dim(i)));
      }
    }
  }
  return {worst <= 1e-12,
          fmt("100 states x 2 families: max |tr/2 - eps n_i| %.2e (<= 1e-12)", worst)};
}

Outcome hjb_residual_check() {
  Cournot c;
  const HjbScanReport q = hjb_residual_scan(c.ctx, 0.01, 100, 3, 20);
  const AggregatedMirror ent({MirrorMap::NegativeEntropy(1),
                              MirrorMap::NegativeEntropy(1)});
  const MdgContext ectx(c.game, ent, *c.game.equilibrium());
  const HjbScanReport e = hjb_residual_scan(ectx, 0.01, 100, 4, 20);
  const double at_mp = std::max(q.max_abs_at_mp, e.max_abs_at_mp);
  const double off = std::min(q.min_off_policy, e.min_off_policy);
  return {at_mp <= 1e-9 && off > 0 && q.grid_argmin_misses == 0 &&
              e.grid_argmin_misses == 0,
          fmt("max |residual| at MP %.2e (<= 1e-9); min over 20 off-policy "
              "controls per state %.3e (> 0); grid argmin misses %g",
              at_mp, off, q.grid_argmin_misses + e.grid_argmin_misses)};
}

Outcome stochastic_exponential() {
  CournotEnsemble& e = cournot_ensemble();
  const McExponentialReport r =
      mc_exponential_bound(e.c.ctx, e.cfg, e.stats, 2.0);
  return {r.holds && e.seconds < 60,
          fmt("1000 paths, T=10, dt=1e-3: worst margin %.3e (>= 0) at 20 "
              "times; terminal mean %.5f vs floor %.3f; %.1f s (< 60 s)",
              r.worst_margin, r.terminal_mean, r.noise_floor, e.seconds)};
}

Outcome stochastic_time_average() {
  CournotEnsemble& e = cournot_ensemble();
  const McTimeAverageReport rc = mc_time_average_bound(e.c.ctx, e.cfg, e.stats);
  Bilinear b;
  SdeConfig cfg = e.cfg;
  cfg.x0 = vec({1, 0});
  cfg.seed = 99;
  const EnsembleStats bs = ensemble_stats(euler_maruyama_paths(b.ctx, cfg));
  const McTimeAverageReport rb = mc_time_average_bound(b.ctx, cfg, bs);
  return {rc.holds && rb.holds && rc.paths_used == 1000 && rb.paths_used == 1000,
          fmt("slack with 3 SE: cournot %.4f, bilinear %.4f (>= 0); "
              "1000 paths each",
              rc.slack, rb.slack)};
}

std::string ensemble_bytes(const MdgContext& ctx, const SdeConfig& cfg) {
  const EnsembleStats s = ensemble_stats(euler_maruyama_paths(ctx, cfg));
  std::ostringstream os;
  for (size_t k = 0; k < s.times.size(); ++k) {
    os << cli::csv_number(s.mean[k]) << "," << cli::csv_number(s.standard_error[k])
       << "\n";
  }
  for (const Vector& v : s.time_averages) {
    for (Eigen::Index j = 0; j < v.size(); ++j) os << cli::csv_number(v[j]) << ",";
  }
  return os.str();
}

Outcome numerical_hygiene() {
  PhiloxStream rng(13, 0);
  double grad_err = 0, hess_err = 0;
  Matrix a(2, 2);
  a << 2, 0.5, 0.5, 1;
  const MirrorMap maps[] = {MirrorMap::Quadratic(a), MirrorMap::NegativeEntropy(2)};
  for (int s = 0; s < 50; ++s) {
    const Vector x = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    for (const MirrorMap& m : maps) {
      const Vector y = m.grad_phi_conj(x);
      grad_err = std::max(grad_err, oracles::rel_err(
          oracles::fd_gradient([&](const Vector& z) { return m.phi(z); }, y),
          m.grad_phi(y)));
      grad_err = std::max(grad_err, oracles::rel_err(
          oracles::fd_gradient([&](const Vector& z) { return m.phi_conj(z); }, x),
          m.grad_phi_conj(x)));
      hess_err = std::max(hess_err, oracles::rel_err(
          oracles::fd_jacobian([&](const Vector& z) { return m.grad_phi_conj(z); },
                               x, 1e-5),
          m.hess_phi_conj(x)));
    }
    const CournotGame g({vec({12, 9}), vec({1, 2}), vec({2, 1})});
    const Vector yj = vec({rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 4),
                           rng.uniform(0, 4)});
    for (int i = 0; i < 2; ++i) {
      grad_err = std::max(grad_err, oracles::rel_err(
          oracles::fd_gradient(
              [&](const Vector& yi) { return g.cost(i, g.joint(i, yi, g.others(yj, i))); },
              Vector(g.block(yj, i))),
          g.partial_gradient(i, yj)));
    }
  }
  Cournot c;
  const double ratio =
      rk4_order_ratio(c.game, c.mirror, vec({0, 0}), 2.0, 0.1).ratio;
  SdeConfig cfg;
  cfg.paths = 64;
  cfg.horizon = 2;
  cfg.dt = 1e-2;
  cfg.seed = 4242;
  cfg.x0 = vec({0, 0});
  const bool same = ensemble_bytes(c.ctx, cfg) == ensemble_bytes(c.ctx, cfg);
  return {grad_err < 1e-5 && hess_err < 1e-4 && ratio >= 12 && ratio <= 20 && same,
          fmt("gradient rel err %.2e (< 1e-5); Hessian rel err %.2e (< 1e-4); "
              "RK4 order ratio %.3f (in [12, 20])",
              grad_err, hess_err, ratio) +
              (same ? "; seeded reruns byte-identical" : "; seeded reruns differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"variational identity", variational_identity},
      {"bellman value attainment", bellman_value},
      {"equilibrium deviation", deviation},
      {"pointwise cost inequality", lemma1},
      {"lyapunov decay", lyapunov_decay},
      {"exponential rate", exponential_rate},
      {"time-average bound", time_average_bound},
      {"cournot closed form", cournot_closed_form},
      {"ito correction", ito_correction_check},
      {"stochastic hjb residual", hjb_residual_check},
      {"stochastic exponential bound", stochastic_exponential},
      {"stochastic time-average bound", stochastic_time_average},
      {"numerical hygiene", numerical_hygiene},
  };
  int failures = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %2zu  %-30s %s\n", o.pass ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
