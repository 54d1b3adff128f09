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

#include "mirrorplay/mdg.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "mirrorplay/rng.h"

namespace mirrorplay {

MdgContext::MdgContext(const Game& game, const AggregatedMirror& mirror,
                       Vector y_bar)
    : game(game),
      mirror(mirror),
      y_bar(std::move(y_bar)),
      x_bar(mirror.grad_phi(this->y_bar)) {
  if (mirror.num_players() != game.num_players() ||
      mirror.dim() != game.total_dim()) {
    throw InvariantError("mirror does not match the game's player blocks");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (mirror.dim(i) != game.dim(i)) {
      throw InvariantError("mirror block dimension differs from the game's");
    }
  }
}

ValueFn make_value_fn(const MdgContext& ctx, int i) {
  return ValueFn{i, ctx.mirror.part(i), ctx.mirror.block(ctx.x_bar, i),
                 ctx.mirror.offset(i)};
}

double value(const ValueFn& vf, const Vector& x) {
  return bregman_conj(vf.map, x.segment(vf.offset, vf.map.dim()), vf.x_bar_i);
}

double total_value(const MdgContext& ctx, const Vector& x) {
  double total = 0.0;
  for (int i = 0; i < ctx.num_players(); ++i) {
    total += value(make_value_fn(ctx, i), x);
  }
  return total;
}

Vector value_gradient(const MdgContext& ctx, int i, const Vector& x) {
  const AggregatedMirror& m = ctx.mirror;
  Vector grad = Vector::Zero(m.dim());
  grad.segment(m.offset(i), m.dim(i)) =
      m.part(i).grad_phi_conj(m.block(x, i)) - m.block(ctx.y_bar, i);
  return grad;
}

double stage_cost(const MdgContext& ctx, int i, const Vector& x,
                  const Vector& u_i) {
  const Game& game = ctx.game;
  const Vector y = ctx.mirror.grad_phi_conj(x);
  const double conj = game.partial_conjugate(i, -u_i, game.others(y, i));
  if (conj == kInfinity) return kInfinity;
  return game.cost(i, y) + conj + u_i.dot(game.block(ctx.y_bar, i));
}

double terminal_cost(const MdgContext& ctx, int i, const Vector& x_t) {
  return value(make_value_fn(ctx, i), x_t);
}

double cumulative_cost(const MdgContext& ctx, const DualTrajectory& traj,
                       const ControlSignal& control, int i) {
  const int nodes = traj.num_nodes();
  if (control.values.cols() != nodes) {
    throw InvariantError("control grid does not match the trajectory grid");
  }
  const int off = ctx.game.offset(i), ni = ctx.game.dim(i);
  double integral = 0.0;
  double previous = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double c = stage_cost(ctx, i, traj.state(k),
                                control.values.col(k).segment(off, ni));
    if (c == kInfinity) return kInfinity;
    if (k > 0) integral += 0.5 * (traj.times[k] - traj.times[k - 1]) *
                           (previous + c);
    previous = c;
  }
  return integral + terminal_cost(ctx, i, traj.state(nodes - 1));
}

double hamiltonian(const MdgContext& ctx, int i, const Vector& p_i,
                   const Vector& x, const Vector& u) {
  const double c =
      stage_cost(ctx, i, x, u.segment(ctx.game.offset(i), ctx.game.dim(i)));
  if (c == kInfinity) return kInfinity;
  return c + p_i.dot(u);
}

std::vector<CostatePath> costate_path(const MdgContext& ctx,
                                      const DualTrajectory& traj) {
  const Game& game = ctx.game;
  const int nodes = traj.num_nodes();
  std::vector<CostatePath> out;
  for (int i = 0; i < game.num_players(); ++i) {
    const int off = game.offset(i), ni = game.dim(i);
    CostatePath path;
    path.player = i;
    path.times = traj.times;
    path.values = Matrix::Zero(game.total_dim(), nodes);

    Vector g_next = game.partial_gradient(i, traj.y(nodes - 1));
    Vector p = g_next - game.partial_gradient(i, ctx.y_bar);
    path.values.col(nodes - 1).segment(off, ni) = p;
    for (int k = nodes - 2; k >= 0; --k) {
      const Vector g = game.partial_gradient(i, traj.y(k));
      p += 0.5 * (traj.times[k + 1] - traj.times[k]) * (g + g_next);
      path.values.col(k).segment(off, ni) = p;
      g_next = g;
    }
    out.push_back(std::move(path));
  }
  return out;
}

VariationalResidual variational_residual(const MdgContext& ctx,
                                         const DualTrajectory& traj) {
  const Game& game = ctx.game;
  const int players = game.num_players();
  const int nodes = traj.num_nodes();
  VariationalResidual out;
  out.analytic = Matrix::Zero(players, nodes);
  out.finite_difference = Matrix::Zero(players, nodes);

  for (int i = 0; i < players; ++i) {
    const ValueFn vf = make_value_fn(ctx, i);
    const int off = game.offset(i), ni = game.dim(i);
    std::vector<double> v(nodes), c(nodes);
    for (int k = 0; k < nodes; ++k) {
      const Vector x = traj.state(k);
      const Vector u = traj.u(k);
      v[k] = value(vf, x);
      c[k] = stage_cost(ctx, i, x, u.segment(off, ni));
      out.analytic(i, k) = c[k] + value_gradient(ctx, i, x).dot(u);
    }
    for (int k = 1; k + 1 < nodes; ++k) {
      const double dv = (v[k + 1] - v[k - 1]) /
                        (traj.times[k + 1] - traj.times[k - 1]);
      out.finite_difference(i, k) = c[k] + dv;
    }
  }
  out.max_analytic = out.analytic.cwiseAbs().maxCoeff();
  out.max_finite_difference = out.finite_difference.cwiseAbs().maxCoeff();
  return out;
}

Lemma1Scan lemma1_scan(const MdgContext& ctx, int samples, std::uint64_t seed,
                       double radius, double control_radius) {
  const Game& game = ctx.game;
  const int n = game.total_dim();
  Lemma1Scan scan;
  scan.samples = samples;
  for (int s = 0; s < samples; ++s) {
    PhiloxStream rng(seed, static_cast<std::uint64_t>(s));
    const int i = s % game.num_players();
    const int off = game.offset(i), ni = game.dim(i);
    Vector x = ctx.x_bar;
    for (int j = 0; j < n; ++j) x[j] += rng.uniform(-radius, radius);
    const Vector grad_block = value_gradient(ctx, i, x).segment(off, ni);
    const Vector u_star =
        mp_vector_field(game, ctx.mirror, x).segment(off, ni);

    auto lemma_value = [&](const Vector& u_i) {
      return grad_block.dot(u_i) + stage_cost(ctx, i, x, u_i);
    };
    const double at_mp = lemma_value(u_star);
    Vector u_i = u_star;
    for (int j = 0; j < ni; ++j) {
      u_i[j] += rng.uniform(-control_radius, control_radius);
    }
    const double off_policy = lemma_value(u_i);

    scan.max_abs_at_mp = std::max(scan.max_abs_at_mp, std::abs(at_mp));
    scan.min_off_policy = std::min(scan.min_off_policy, off_policy);
    scan.min_value = std::min({scan.min_value, at_mp, off_policy});
  }
  return scan;
}

double deviation_gap(const MdgContext& ctx, const SimConfig& cfg, int i,
                     const Perturbation& perturbation) {
  const Game& game = ctx.game;
  const int off = game.offset(i), ni = game.dim(i);
  const bool perturbed = perturbation.amplitude != 0.0;
  ControlLaw law = [&](double t, const Vector& x) {
    Vector u = mp_vector_field(game, ctx.mirror, x);
    if (perturbed) {
      u.segment(off, ni) += perturbation.amplitude *
                            std::sin(perturbation.omega * t +
                                     perturbation.phase) *
                            perturbation.direction;
    }
    return u;
  };
  const DualTrajectory traj = integrate_controlled(
      game, ctx.mirror, cfg, law,
      perturbed ? ControlProvenance::kPerturbed
                : ControlProvenance::kClosedLoop);
  const double j = cumulative_cost(ctx, traj, traj.control, i);
  if (j == kInfinity) return kInfinity;
  return j - value(make_value_fn(ctx, i), cfg.x0);
}

DeviationReport deviation_test(const MdgContext& ctx, const SimConfig& cfg,
                               const PerturbationSpec& spec, int trials,
                               std::uint64_t seed, int player) {
  constexpr int kMaxAttempts = 20;
  const int ni = ctx.game.dim(player);

  DeviationReport report;
  report.player = player;
  report.trials = trials;
  report.gaps.assign(trials, 0.0);
  report.zero_perturbation_gap =
      deviation_gap(ctx, cfg, player, Perturbation{0.0, 1.0, 0.0, Vector()});

  std::vector<int> rejected(trials, 0);
  std::vector<std::exception_ptr> errors(trials);
  const std::uint64_t stream_base = static_cast<std::uint64_t>(player) << 32;

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < trials; ++k) {
    try {
      bool done = false;
      for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
        PhiloxStream rng(seed, stream_base + k,
                         static_cast<std::uint32_t>(attempt));
        Perturbation p;
        p.amplitude = rng.uniform(spec.amplitude_min, spec.amplitude_max);
        p.omega = rng.uniform(spec.omega_min, spec.omega_max);
        p.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        p.direction.resize(ni);
        for (int j = 0; j < ni; ++j) p.direction[j] = rng.normal();
        p.direction.normalize();
        try {
          report.gaps[k] = deviation_gap(ctx, cfg, player, p);
          done = true;
        } catch (const PriceRegionError&) {
          ++rejected[k];
        }
      }
      if (!done) {
        throw NonconvergenceError(
            "deviation trial could not stay inside the game's region");
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (int k = 0; k < trials; ++k) {
    report.rejected += rejected[k];
    const double gap = report.gaps[k];
    if (gap == kInfinity) {
      ++report.infinite;
    } else {
      report.max_gap = std::max(report.max_gap, gap);
    }
    report.min_gap = std::min(report.min_gap, gap);
  }
  return report;
}

}  // namespace mirrorplay
