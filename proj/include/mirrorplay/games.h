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

// Monotone game catalog: Cournot duopoly, bilinear zero-sum, and a general
// quadratic family. Costs follow the minimization convention; the
// pseudogradient stacks each player's partial gradient of its own cost.

#ifndef MIRRORPLAY_GAMES_H_
#define MIRRORPLAY_GAMES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mirrorplay/mirror_maps.h"
#include "mirrorplay/types.h"

namespace mirrorplay {

class Game {
 public:
  explicit Game(std::vector<int> dims);
  virtual ~Game() = default;

  virtual std::string name() const = 0;

  int num_players() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  int dim(int i) const { return dims_[i]; }
  int offset(int i) const { return offsets_[i]; }
  int total_dim() const { return total_dim_; }

  auto block(const Vector& v, int i) const {
    return v.segment(offsets_[i], dims_[i]);
  }
  // Opponents' strategies y_{-i}, stacked in player order.
  Vector others(const Vector& y, int i) const;
  // Reassembles a joint profile from y_i and y_{-i}.
  Vector joint(int i, const Vector& y_i, const Vector& y_minus_i) const;

  // psi_i(y).
  virtual double cost(int i, const Vector& y) const = 0;
  // grad_i psi_i(y), a vector of size dim(i).
  virtual Vector partial_gradient(int i, const Vector& y) const = 0;
  // psi_i*(v | y_{-i}) = sup_{y_i} <v, y_i> - psi_i(y_i, y_{-i}); may be
  // kInfinity. The default is the numeric supremum.
  virtual double partial_conjugate(int i, const Vector& v,
                                   const Vector& y_minus_i) const;

  virtual std::optional<Vector> equilibrium() const { return std::nullopt; }
  // Constant Jacobian of the pseudogradient, for affine pseudogradients.
  virtual std::optional<Matrix> pseudogradient_jacobian() const {
    return std::nullopt;
  }
  // Hook for region constraints along trajectories (Cournot price).
  virtual void check_state(const Vector& y, double t) const;

  Vector pseudogradient(const Vector& y) const;

 protected:
  void check_joint(const Vector& y) const;

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

// Damped Newton on the concave inner problem of the partial conjugate:
// at most 100 iterations, gradient tolerance 1e-10, backtracking halving.
// The inner Hessian is obtained by central differences of the partial
// gradient. Throws NonconvergenceError when the budget is exhausted.
double numeric_partial_conjugate(const Game& game, int i, const Vector& v,
                                 const Vector& y_minus_i);

// psi_i(y) = 1/2 y_i' Q_i y_i + y_i' C_i y_{-i} + b_i' y_i.
struct QuadraticPlayer {
  Matrix q;  // n_i x n_i, symmetric positive definite
  Matrix c;  // n_i x (n - n_i)
  Vector b;  // n_i
};

struct QuadraticGameParams {
  std::vector<QuadraticPlayer> players;
};

class QuadraticGame : public Game {
 public:
  explicit QuadraticGame(QuadraticGameParams params);

  std::string name() const override { return "quadratic"; }
  double cost(int i, const Vector& y) const override;
  Vector partial_gradient(int i, const Vector& y) const override;
  double partial_conjugate(int i, const Vector& v,
                           const Vector& y_minus_i) const override;
  // Solution of J y = -b when J is nonsingular.
  std::optional<Vector> equilibrium() const override;
  std::optional<Matrix> pseudogradient_jacobian() const override {
    return jacobian_;
  }

  const QuadraticGameParams& params() const { return params_; }

 private:
  static std::vector<int> dims_of(const QuadraticGameParams& params);

  QuadraticGameParams params_;
  std::vector<Eigen::LLT<Matrix>> q_llt_;
  Matrix jacobian_;
  Vector offset_b_;
};

struct CournotParams {
  Vector m;   // price intercept
  Vector p1;  // unit costs, firm 1
  Vector p2;  // unit costs, firm 2
};

struct CournotEquilibrium {
  Vector y;      // stacked (y1, y2)
  Vector price;  // P = M - y1 - y2
};

// Closed-form interior Nash equilibrium y_i = (M + p_{-i} - 2 p_i) / 3.
// Throws InvariantError if any component is nonpositive.
CournotEquilibrium cournot_nash(const CournotParams& params);

// Two-firm Cournot duopoly in the linear price region P = M - y1 - y2,
// cost psi_i = -(P - p_i)' y_i.
class CournotGame : public QuadraticGame {
 public:
  explicit CournotGame(CournotParams params);

  std::string name() const override { return "cournot"; }
  double cost(int i, const Vector& y) const override;
  Vector partial_gradient(int i, const Vector& y) const override;
  std::optional<Vector> equilibrium() const override { return nash_.y; }
  // Throws PriceRegionError unless M - y1 - y2 is strictly positive.
  void check_state(const Vector& y, double t) const override;

  const CournotParams& cournot_params() const { return cournot_; }
  Vector price(const Vector& y) const;

 private:
  static QuadraticGameParams as_quadratic(const CournotParams& params);

  CournotParams cournot_;
  CournotEquilibrium nash_;
};

// Zero-sum bilinear game psi_1 = y1' B y2 = -psi_2.
class BilinearGame : public Game {
 public:
  explicit BilinearGame(Matrix b);

  std::string name() const override { return "bilinear"; }
  double cost(int i, const Vector& y) const override;
  Vector partial_gradient(int i, const Vector& y) const override;
  // Indicator: 0 if v equals the linear coefficient, +infinity otherwise.
  double partial_conjugate(int i, const Vector& v,
                           const Vector& y_minus_i) const override;
  std::optional<Vector> equilibrium() const override;
  std::optional<Matrix> pseudogradient_jacobian() const override;

  const Matrix& matrix() const { return b_; }

 private:
  Matrix b_;
};

// ||Psi(y)||; zero exactly at interior Nash equilibria.
double vi_residual(const Game& game, const Vector& y);

struct MonotonicityReport {
  int samples = 0;
  double min_inner_product = kInfinity;
  bool violation = false;
};

// Minimum of <Psi(y) - Psi(y'), y - y'> over random pairs in the box
// [-radius, radius]^n; flags values below -1e-10.
MonotonicityReport monotonicity_probe(const Game& game, int sample_count,
                                      std::uint64_t seed,
                                      double radius = 1.0);

// Largest mu >= 0 with d'Sd >= mu * 1/2 d'Ad, S the symmetric part of the
// pseudogradient Jacobian and A the block mirror Hessian. Empty for
// non-affine games or non-quadratic mirrors.
std::optional<double> strong_monotonicity_modulus(
    const Game& game, const AggregatedMirror& mirror);

}  // namespace mirrorplay

#endif  // MIRRORPLAY_GAMES_H_
