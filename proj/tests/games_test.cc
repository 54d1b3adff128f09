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

#include "mirrorplay/games.h"
#include "mirrorplay/rng.h"
#include "oracles.h"

using namespace mirrorplay;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

CournotGame scalar_cournot(double m = 10, double p1 = 1, double p2 = 2) {
  return CournotGame({vec({m}), vec({p1}), vec({p2})});
}

// Cost of player i written out directly from the profit definition.
double cournot_cost_oracle(const Vector& m, const Vector& p, const Vector& y1,
                           const Vector& y2, int i) {
  const Vector& yi = i == 0 ? y1 : y2;
  return -(m - y1 - y2 - p).dot(yi);
}

}  // namespace

TEST_CASE("pseudogradient examples") {
  const CournotGame g = scalar_cournot();
  CHECK(g.pseudogradient(vec({0, 0})).isApprox(vec({-9, -8})));
  CHECK(g.pseudogradient(vec({10.0 / 3, 7.0 / 3})).norm() < 1e-12);
  const BilinearGame b(Matrix::Ones(1, 1));
  CHECK(b.pseudogradient(vec({1, 2})).isApprox(vec({2, -1})));
}

TEST_CASE("cournot closed form") {
  const CournotEquilibrium eq = cournot_nash({vec({10}), vec({1}), vec({2})});
  CHECK(eq.y[0] == doctest::Approx(10.0 / 3));
  CHECK(eq.y[1] == doctest::Approx(7.0 / 3));
  CHECK(eq.price[0] == doctest::Approx(13.0 / 3));
  CHECK(std::abs(eq.price[0] - (10 - eq.y[0] - eq.y[1])) < 1e-10);
  CHECK(scalar_cournot().pseudogradient(eq.y).norm() < 1e-10);

  const CournotEquilibrium sym = cournot_nash({vec({3}), vec({0}), vec({0})});
  CHECK(sym.y.isApprox(vec({1, 1})));
  CHECK(sym.price[0] == doctest::Approx(1.0));

  const CournotEquilibrium two =
      cournot_nash({vec({12, 9}), vec({1, 1}), vec({1, 1})});
  CHECK(two.y.isApprox(vec({11.0 / 3, 8.0 / 3, 11.0 / 3, 8.0 / 3})));

  // An equilibrium with a nonpositive component is rejected.
  CHECK_THROWS_AS(cournot_nash({vec({10}), vec({1}), vec({9})}), InvariantError);
  CHECK_THROWS_AS(scalar_cournot(1, 2, 0), InvariantError);
}

TEST_CASE("partial conjugate examples") {
  const CournotGame g = scalar_cournot();
  CHECK(g.partial_conjugate(0, vec({-9}), vec({0})) == doctest::Approx(0.0));
  CHECK(g.partial_conjugate(0, vec({-7}), vec({0})) == doctest::Approx(1.0));
  const BilinearGame b(Matrix::Ones(1, 1));
  CHECK(b.partial_conjugate(0, vec({2}), vec({2})) == 0.0);
  CHECK(b.partial_conjugate(0, vec({3}), vec({2})) == kInfinity);
}

TEST_CASE("cournot gradients match finite differences of the cost") {
  PhiloxStream rng(5, 0);
  const Vector m = vec({12, 9}), p1 = vec({1, 2}), p2 = vec({2, 1});
  const CournotGame g({m, p1, p2});
  for (int s = 0; s < 50; ++s) {
    Vector y(4);
    for (int j = 0; j < 4; ++j) y[j] = rng.uniform(0, 4);
    for (int i = 0; i < 2; ++i) {
      const Vector& p = i == 0 ? p1 : p2;
      CHECK(g.cost(i, y) ==
            doctest::Approx(cournot_cost_oracle(m, p, y.head(2), y.tail(2), i)));
      const Vector fd = oracles::fd_gradient(
          [&](const Vector& yi) {
            return g.cost(i, g.joint(i, yi, g.others(y, i)));
          },
          Vector(g.block(y, i)));
      CHECK(oracles::rel_err(fd, g.partial_gradient(i, y)) < 1e-5);
    }
  }
}

TEST_CASE("closed-form conjugate agrees with numeric suprema") {
  PhiloxStream rng(6, 0);
  const CournotGame g = scalar_cournot();
  for (int s = 0; s < 50; ++s) {
    const Vector v = vec({rng.uniform(-15, 5)});
    const Vector other = vec({rng.uniform(0, 5)});
    const double closed = g.partial_conjugate(0, v, other);
    const double newton = numeric_partial_conjugate(g, 0, v, other);
    const double golden = oracles::conjugate_1d(
        [&](double yi) { return g.cost(0, vec({yi, other[0]})); }, v[0], -50,
        50);
    CHECK(std::abs(closed - newton) < 1e-8);
    CHECK(std::abs(closed - golden) < 1e-8);
  }
}

TEST_CASE("fenchel-young equality at the partial gradient") {
  PhiloxStream rng(8, 0);
  const Vector m = vec({12, 9}), p = vec({1, 2});
  const CournotGame g({m, p, p});
  for (int s = 0; s < 20; ++s) {
    Vector y(4);
    for (int j = 0; j < 4; ++j) y[j] = rng.uniform(0, 4);
    for (int i = 0; i < 2; ++i) {
      const Vector v = g.partial_gradient(i, y);
      const Vector others = g.others(y, i);
      const Vector yi = g.block(y, i);
      const double fc = fenchel_coupling(
          g.cost(i, y), g.partial_conjugate(i, v, others), yi, v);
      CHECK(std::abs(fc) <= 1e-9);
    }
  }
}

TEST_CASE("vi residual") {
  const CournotGame g = scalar_cournot();
  CHECK(vi_residual(g, *g.equilibrium()) <= 1e-10);
  CHECK(vi_residual(g, vec({0, 0})) == doctest::Approx(std::sqrt(145.0)));
  const BilinearGame b(Matrix::Ones(1, 1));
  CHECK(vi_residual(b, vec({0, 0})) == 0.0);
}

TEST_CASE("monotonicity probe") {
  CHECK_FALSE(monotonicity_probe(scalar_cournot(), 200, 1).violation);
  CHECK(monotonicity_probe(scalar_cournot(), 200, 1).min_inner_product >= 0);
  const MonotonicityReport skew =
      monotonicity_probe(BilinearGame(Matrix::Ones(1, 1)), 200, 2);
  CHECK(std::abs(skew.min_inner_product) < 1e-12);
  QuadraticGameParams bad;
  bad.players.push_back({Matrix::Ones(1, 1), 3 * Matrix::Ones(1, 1), vec({0})});
  bad.players.push_back({Matrix::Ones(1, 1), 3 * Matrix::Ones(1, 1), vec({0})});
  CHECK(monotonicity_probe(QuadraticGame(bad), 200, 3).violation);
}

TEST_CASE("strong monotonicity modulus") {
  const CournotGame g = scalar_cournot();
  CHECK(*strong_monotonicity_modulus(g, AggregatedMirror::Identity({1, 1})) ==
        doctest::Approx(2.0));
  const AggregatedMirror scaled({MirrorMap::Quadratic(2 * Matrix::Identity(1, 1)),
                                 MirrorMap::Quadratic(2 * Matrix::Identity(1, 1))});
  CHECK(*strong_monotonicity_modulus(g, scaled) == doctest::Approx(1.0));
  CHECK(*strong_monotonicity_modulus(BilinearGame(Matrix::Ones(1, 1)),
                                     AggregatedMirror::Identity({1, 1})) ==
        doctest::Approx(0.0));
  const AggregatedMirror entropy(
      {MirrorMap::NegativeEntropy(1), MirrorMap::NegativeEntropy(1)});
  CHECK_FALSE(strong_monotonicity_modulus(g, entropy).has_value());
}

TEST_CASE("quadratic game equilibrium and conjugate") {
  QuadraticGameParams params;
  params.players.push_back({2 * Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                            vec({-3, -3})});
  params.players.push_back({2 * Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                            vec({-2, -4})});
  const QuadraticGame g(params);
  const Vector eq = *g.equilibrium();
  CHECK(eq.isApprox(vec({4.0 / 3, 2.0 / 3, 1.0 / 3, 5.0 / 3})));
  CHECK(vi_residual(g, eq) < 1e-12);
  const Vector v = vec({0.3, -1.2}), others = vec({0.5, 0.1});
  CHECK(g.partial_conjugate(0, v, others) ==
        doctest::Approx(numeric_partial_conjugate(g, 0, v, others)).epsilon(1e-9));
}
