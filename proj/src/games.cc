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

#include "mirrorplay/games.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

namespace mirrorplay {

Game::Game(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvariantError("a game needs at least one player");
  for (int d : dims_) {
    if (d <= 0) throw InvariantError("player dimensions must be positive");
    offsets_.push_back(total_dim_);
    total_dim_ += d;
  }
}

Vector Game::others(const Vector& y, int i) const {
  Vector out(total_dim_ - dims_[i]);
  int pos = 0;
  for (int j = 0; j < num_players(); ++j) {
    if (j == i) continue;
    out.segment(pos, dims_[j]) = block(y, j);
    pos += dims_[j];
  }
  return out;
}

Vector Game::joint(int i, const Vector& y_i, const Vector& y_minus_i) const {
  if (y_i.size() != dims_[i] || y_minus_i.size() != total_dim_ - dims_[i]) {
    throw DomainError("joint(): block sizes do not match the game");
  }
  Vector y(total_dim_);
  int pos = 0;
  for (int j = 0; j < num_players(); ++j) {
    if (j == i) {
      y.segment(offsets_[j], dims_[j]) = y_i;
    } else {
      y.segment(offsets_[j], dims_[j]) = y_minus_i.segment(pos, dims_[j]);
      pos += dims_[j];
    }
  }
  return y;
}

void Game::check_joint(const Vector& y) const {
  if (y.size() != total_dim_ || !y.allFinite()) {
    throw DomainError("joint strategy must be finite with size " +
                      std::to_string(total_dim_));
  }
}

double Game::partial_conjugate(int i, const Vector& v,
                               const Vector& y_minus_i) const {
  return numeric_partial_conjugate(*this, i, v, y_minus_i);
}

void Game::check_state(const Vector& /*y*/, double /*t*/) const {}

Vector Game::pseudogradient(const Vector& y) const {
  check_joint(y);
  Vector out(total_dim_);
  for (int i = 0; i < num_players(); ++i) {
    out.segment(offsets_[i], dims_[i]) = partial_gradient(i, y);
  }
  return out;
}

double numeric_partial_conjugate(const Game& game, int i, const Vector& v,
                                 const Vector& y_minus_i) {
  constexpr int kMaxIterations = 100;
  constexpr double kGradTolerance = 1e-10;
  const int n = game.dim(i);
  if (v.size() != n || !v.allFinite()) {
    throw DomainError("conjugate argument must be finite");
  }

  auto objective = [&](const Vector& yi) {
    return v.dot(yi) - game.cost(i, game.joint(i, yi, y_minus_i));
  };
  auto ascent = [&](const Vector& yi) {
    return Vector(v - game.partial_gradient(i, game.joint(i, yi, y_minus_i)));
  };

  Vector yi = Vector::Zero(n);
  double value = objective(yi);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Vector g = ascent(yi);
    if (g.lpNorm<Eigen::Infinity>() <= kGradTolerance) return value;

    Matrix hess(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(yi[j]));
      Vector plus = yi, minus = yi;
      plus[j] += h;
      minus[j] -= h;
      hess.col(j) = (ascent(minus) - ascent(plus)) / (2.0 * h);
    }
    hess = 0.5 * (hess + hess.transpose()).eval();
    Eigen::LDLT<Matrix> ldlt(hess);
    Vector step = ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      throw NonconvergenceError("numeric conjugate: singular inner Hessian");
    }

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      const Vector trial = yi + scale * step;
      const double trial_value = objective(trial);
      if (trial_value >= value) {
        yi = trial;
        value = trial_value;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      // No ascent possible at machine precision; accept if stationary enough.
      if (ascent(yi).lpNorm<Eigen::Infinity>() <= 1e3 * kGradTolerance) {
        return value;
      }
      break;
    }
  }
  if (ascent(yi).lpNorm<Eigen::Infinity>() <= kGradTolerance) return value;
  throw NonconvergenceError("numeric conjugate exceeded iteration budget");
}

std::vector<int> QuadraticGame::dims_of(const QuadraticGameParams& params) {
  std::vector<int> dims;
  for (const QuadraticPlayer& p : params.players) {
    dims.push_back(static_cast<int>(p.q.rows()));
  }
  return dims;
}

QuadraticGame::QuadraticGame(QuadraticGameParams params)
    : Game(dims_of(params)), params_(std::move(params)) {
  const int n = total_dim();
  jacobian_ = Matrix::Zero(n, n);
  offset_b_ = Vector::Zero(n);
  for (int i = 0; i < num_players(); ++i) {
    const QuadraticPlayer& p = params_.players[i];
    const int ni = dim(i);
    if (p.q.cols() != ni || p.c.rows() != ni || p.c.cols() != n - ni ||
        p.b.size() != ni) {
      std::ostringstream os;
      os << "quadratic game: inconsistent block sizes for player " << i + 1;
      throw InvariantError(os.str());
    }
    if ((p.q - p.q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw InvariantError("quadratic game: Q_i must be symmetric");
    }
    q_llt_.emplace_back(p.q);
    if (q_llt_.back().info() != Eigen::Success) {
      throw InvariantError("quadratic game: Q_i must be positive definite");
    }
    jacobian_.block(offset(i), offset(i), ni, ni) = p.q;
    int pos = 0;
    for (int j = 0; j < num_players(); ++j) {
      if (j == i) continue;
      jacobian_.block(offset(i), offset(j), ni, dim(j)) =
          p.c.middleCols(pos, dim(j));
      pos += dim(j);
    }
    offset_b_.segment(offset(i), ni) = p.b;
  }
}

double QuadraticGame::cost(int i, const Vector& y) const {
  check_joint(y);
  const QuadraticPlayer& p = params_.players[i];
  const Vector yi = block(y, i);
  return 0.5 * yi.dot(p.q * yi) + yi.dot(p.c * others(y, i)) + p.b.dot(yi);
}

Vector QuadraticGame::partial_gradient(int i, const Vector& y) const {
  check_joint(y);
  const QuadraticPlayer& p = params_.players[i];
  return p.q * block(y, i) + p.c * others(y, i) + p.b;
}

double QuadraticGame::partial_conjugate(int i, const Vector& v,
                                        const Vector& y_minus_i) const {
  const QuadraticPlayer& p = params_.players[i];
  if (v.size() != dim(i) || y_minus_i.size() != total_dim() - dim(i)) {
    throw DomainError("partial_conjugate: argument size mismatch");
  }
  // sup_y <v - c, y> - 1/2 y'Qy = 1/2 (v - c)' Q^{-1} (v - c).
  const Vector shifted = v - p.c * y_minus_i - p.b;
  return 0.5 * shifted.dot(q_llt_[i].solve(shifted));
}

std::optional<Vector> QuadraticGame::equilibrium() const {
  Eigen::FullPivLU<Matrix> lu(jacobian_);
  if (!lu.isInvertible()) return std::nullopt;
  return Vector(lu.solve(-offset_b_));
}

CournotEquilibrium cournot_nash(const CournotParams& params) {
  const Vector& m = params.m;
  if (m.size() == 0 || params.p1.size() != m.size() ||
      params.p2.size() != m.size()) {
    throw InvariantError("cournot: M, p1, p2 must share a positive dimension");
  }
  const int n = static_cast<int>(m.size());
  CournotEquilibrium eq;
  eq.y.resize(2 * n);
  eq.y.head(n) = (m + params.p2 - 2.0 * params.p1) / 3.0;
  eq.y.tail(n) = (m + params.p1 - 2.0 * params.p2) / 3.0;
  eq.price = (m + params.p1 + params.p2) / 3.0;
  if ((eq.y.array() <= 0).any()) {
    throw InvariantError(
        "cournot: equilibrium production has a nonpositive component");
  }
  return eq;
}

QuadraticGameParams CournotGame::as_quadratic(const CournotParams& params) {
  const Eigen::Index n = params.m.size();
  if (n == 0 || params.p1.size() != n || params.p2.size() != n) {
    throw InvariantError("cournot: M, p1, p2 must share a positive dimension");
  }
  if (((params.m - params.p1).array() <= 0).any() ||
      ((params.m - params.p2).array() <= 0).any()) {
    throw InvariantError("cournot: requires M - p_i > 0 componentwise");
  }
  QuadraticGameParams q;
  for (const Vector* p : {&params.p1, &params.p2}) {
    q.players.push_back({2.0 * Matrix::Identity(n, n),
                         Matrix::Identity(n, n), *p - params.m});
  }
  return q;
}

CournotGame::CournotGame(CournotParams params)
    : QuadraticGame(as_quadratic(params)),
      cournot_(std::move(params)),
      nash_(cournot_nash(cournot_)) {}

Vector CournotGame::price(const Vector& y) const {
  return cournot_.m - block(y, 0) - block(y, 1);
}

double CournotGame::cost(int i, const Vector& y) const {
  check_joint(y);
  const Vector& pi = i == 0 ? cournot_.p1 : cournot_.p2;
  return -(price(y) - pi).dot(block(y, i));
}

Vector CournotGame::partial_gradient(int i, const Vector& y) const {
  check_joint(y);
  const Vector& pi = i == 0 ? cournot_.p1 : cournot_.p2;
  return 2.0 * block(y, i) + block(y, 1 - i) + pi - cournot_.m;
}

void CournotGame::check_state(const Vector& y, double t) const {
  const Vector p = price(y);
  if ((p.array() > 0).all()) return;
  Eigen::Index j;
  const double worst = p.minCoeff(&j);
  std::ostringstream os;
  os << "cournot: market price left the positive region at t=" << t
     << " (P[" << j + 1 << "]=" << worst << ")";
  throw PriceRegionError(os.str(), t);
}

BilinearGame::BilinearGame(Matrix b)
    : Game({static_cast<int>(b.rows()), static_cast<int>(b.cols())}),
      b_(std::move(b)) {
  if (!b_.allFinite()) throw InvariantError("bilinear: B must be finite");
}

double BilinearGame::cost(int i, const Vector& y) const {
  check_joint(y);
  const double value = block(y, 0).dot(b_ * block(y, 1));
  return i == 0 ? value : -value;
}

Vector BilinearGame::partial_gradient(int i, const Vector& y) const {
  check_joint(y);
  if (i == 0) return b_ * block(y, 1);
  return -(b_.transpose() * block(y, 0));
}

double BilinearGame::partial_conjugate(int i, const Vector& v,
                                       const Vector& y_minus_i) const {
  if (v.size() != dim(i) || y_minus_i.size() != dim(1 - i)) {
    throw DomainError("partial_conjugate: argument size mismatch");
  }
  const Vector coefficient =
      i == 0 ? Vector(b_ * y_minus_i) : Vector(-(b_.transpose() * y_minus_i));
  const double scale = 1.0 + coefficient.lpNorm<Eigen::Infinity>();
  const double gap = (v - coefficient).lpNorm<Eigen::Infinity>();
  return gap <= 1e-12 * scale ? 0.0 : kInfinity;
}

std::optional<Vector> BilinearGame::equilibrium() const {
  return Vector(Vector::Zero(total_dim()));
}

std::optional<Matrix> BilinearGame::pseudogradient_jacobian() const {
  const int n1 = dim(0), n2 = dim(1);
  Matrix j = Matrix::Zero(n1 + n2, n1 + n2);
  j.topRightCorner(n1, n2) = b_;
  j.bottomLeftCorner(n2, n1) = -b_.transpose();
  return j;
}

double vi_residual(const Game& game, const Vector& y) {
  return game.pseudogradient(y).norm();
}

MonotonicityReport monotonicity_probe(const Game& game, int sample_count,
                                      std::uint64_t seed, double radius) {
  if (sample_count < 1) throw InvariantError("sample_count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-radius, radius);
  const int n = game.total_dim();
  auto draw = [&] {
    Vector v(n);
    for (int j = 0; j < n; ++j) v[j] = unif(rng);
    return v;
  };
  MonotonicityReport report;
  report.samples = sample_count;
  for (int s = 0; s < sample_count; ++s) {
    const Vector a = draw(), b = draw();
    const double inner =
        (game.pseudogradient(a) - game.pseudogradient(b)).dot(a - b);
    report.min_inner_product = std::min(report.min_inner_product, inner);
  }
  report.violation = report.min_inner_product < -1e-10;
  return report;
}

std::optional<double> strong_monotonicity_modulus(
    const Game& game, const AggregatedMirror& mirror) {
  const std::optional<Matrix> jac = game.pseudogradient_jacobian();
  if (!jac || !mirror.all_quadratic()) return std::nullopt;
  if (mirror.dim() != game.total_dim()) {
    throw InvariantError("mirror and game dimensions differ");
  }
  const Matrix s = 0.5 * (*jac + jac->transpose());
  const Matrix a = mirror.quadratic_hessian();
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(
      s, a, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) return std::nullopt;
  const double lambda_min = solver.eigenvalues().minCoeff();
  // Roundoff on an exactly skew Jacobian gives |lambda| ~ 1e-16.
  return std::max(0.0, 2.0 * lambda_min);
}

}  // namespace mirrorplay
