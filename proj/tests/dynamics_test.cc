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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mirrorplay/dynamics.h"
#include "oracles.h"

using namespace mirrorplay;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

const CournotGame& cournot() {
  static const CournotGame g({vec({10}), vec({1}), vec({2})});
  return g;
}

const AggregatedMirror& identity() {
  static const AggregatedMirror m = AggregatedMirror::Identity({1, 1});
  return m;
}

}  // namespace

TEST_CASE("vector field examples") {
  CHECK(mp_vector_field(cournot(), identity(), vec({0, 0})).isApprox(vec({9, 8})));
  CHECK(mp_vector_field(cournot(), identity(), vec({10.0 / 3, 7.0 / 3})).norm() <
        1e-12);
  const BilinearGame b(Matrix::Ones(1, 1));
  CHECK(mp_vector_field(b, identity(), vec({1, 0})).isApprox(vec({0, 1})));
}

TEST_CASE("cournot flow converges to the closed-form equilibrium") {
  const DualTrajectory traj =
      integrate_mp(cournot(), identity(), SimConfig{20, 1e-3, vec({0, 0})});
  CHECK(traj.num_nodes() == 20001);
  CHECK(traj.state(0) == vec({0, 0}));
  CHECK((traj.y(traj.num_nodes() - 1) - vec({10.0 / 3, 7.0 / 3})).norm() < 1e-6);
  // Stored controls are the evaluated vector field.
  for (int k : {0, 17, 5000, 20000}) {
    CHECK((traj.u(k) + cournot().pseudogradient(traj.y(k))).norm() < 1e-12);
  }
}

TEST_CASE("rk4 matches the matrix-exponential solution of the linear flow") {
  Matrix j(2, 2);
  j << 2, 1, 1, 2;
  const Vector b = vec({-9, -8});
  const Vector x0 = vec({0.5, 1.5});
  const DualTrajectory traj =
      integrate_mp(cournot(), identity(), SimConfig{3, 1e-2, x0});
  for (int k = 0; k < traj.num_nodes(); k += 37) {
    const Vector exact = oracles::linear_flow(j, b, x0, traj.times[k]);
    CHECK((traj.state(k) - exact).norm() < 1e-8);
  }
}

TEST_CASE("rest point is preserved") {
  const Vector x_bar = vec({10.0 / 3, 7.0 / 3});
  const DualTrajectory traj =
      integrate_mp(cournot(), identity(), SimConfig{2, 1e-2, x_bar});
  for (int k = 0; k < traj.num_nodes(); ++k) {
    CHECK((traj.state(k) - x_bar).norm() < 1e-12);
  }
}

TEST_CASE("bilinear rotation returns and conserves the norm") {
  const BilinearGame b(Matrix::Ones(1, 1));
  const double two_pi = 2 * std::numbers::pi;
  SimConfig cfg{two_pi, two_pi / 62832, vec({1, 0})};
  const DualTrajectory loop = integrate_mp(b, identity(), cfg);
  CHECK((loop.state(loop.num_nodes() - 1) - vec({1, 0})).norm() < 1e-5);

  const DualTrajectory traj =
      integrate_mp(b, identity(), SimConfig{10, 1e-3, vec({1, 0})});
  double drift = 0;
  for (int k = 0; k < traj.num_nodes(); ++k) {
    drift = std::max(drift, std::abs(traj.state(k).norm() - 1.0));
    const double t = traj.times[k];
    CHECK((traj.state(k) - vec({std::cos(t), std::sin(t)})).norm() < 1e-9);
  }
  CHECK(drift < 1e-6);
}

TEST_CASE("primal path images") {
  const AggregatedMirror ent({MirrorMap::NegativeEntropy(1),
                              MirrorMap::NegativeEntropy(1)});
  CHECK(ent.grad_phi_conj(vec({0, 0})).isApprox(vec({1, 1})));
  const MirrorMap q = MirrorMap::Quadratic(vec({2, 4}).asDiagonal());
  CHECK(q.grad_phi_conj(vec({2, 4})).isApprox(vec({1, 1})));

  const DualTrajectory traj =
      integrate_mp(cournot(), identity(), SimConfig{1, 1e-2, vec({0, 0})});
  const std::vector<Vector> ys = primal_path(traj);
  REQUIRE(ys.size() == static_cast<size_t>(traj.num_nodes()));
  for (int k = 0; k < traj.num_nodes(); ++k) CHECK(ys[k] == traj.state(k));
  CHECK(dual_state(identity(), vec({1, 2})) == vec({1, 2}));
}

TEST_CASE("rk4 order ratio is near sixteen") {
  const OrderCheck c = rk4_order_ratio(cournot(), identity(), vec({0, 0}), 2, 0.1);
  CHECK(c.ratio >= 12);
  CHECK(c.ratio <= 20);
}

TEST_CASE("determinism") {
  const SimConfig cfg{1, 1e-3, vec({0.1, 0.2})};
  const DualTrajectory a = integrate_mp(cournot(), identity(), cfg);
  const DualTrajectory b = integrate_mp(cournot(), identity(), cfg);
  CHECK(a.states == b.states);
}

TEST_CASE("invalid configurations and escapes") {
  CHECK_THROWS_AS((SimConfig{1, 0, vec({0, 0})}.validate()), InvariantError);
  CHECK_THROWS_AS((SimConfig{1, 2, vec({0, 0})}.validate()), InvariantError);
  CHECK_THROWS_AS((SimConfig{1, 0.3, vec({0, 0})}.validate()), InvariantError);
  // Production far above the market size makes the price negative.
  CHECK_THROWS_AS(
      integrate_mp(cournot(), identity(), SimConfig{1, 1e-2, vec({20, 20})}),
      PriceRegionError);
  // An exploding linear flow leaves the representable range.
  QuadraticGameParams unstable;
  unstable.players.push_back({Matrix::Ones(1, 1), -50 * Matrix::Ones(1, 1), vec({0})});
  unstable.players.push_back({Matrix::Ones(1, 1), -50 * Matrix::Ones(1, 1), vec({0})});
  CHECK_THROWS_AS(integrate_mp(QuadraticGame(unstable), identity(),
                               SimConfig{100, 0.1, vec({1, 1})}),
                  DomainEscapeError);
}

TEST_CASE("equilibrium by flow") {
  const BilinearGame b(2 * Matrix::Identity(1, 1));
  QuadraticGameParams params;
  params.players.push_back({Matrix::Ones(1, 1), 0.5 * Matrix::Ones(1, 1), vec({-1})});
  params.players.push_back({Matrix::Ones(1, 1), 0.5 * Matrix::Ones(1, 1), vec({1})});
  const QuadraticGame g(params);
  const Vector eq = equilibrium_by_flow(g, identity(), vec({0, 0}));
  CHECK((eq - *g.equilibrium()).norm() < 1e-9);
  CHECK(resolve_equilibrium(b, identity(), vec({1, 0})).norm() == 0.0);
}
