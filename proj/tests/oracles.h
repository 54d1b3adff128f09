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

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical kernels.

#ifndef MIRRORPLAY_TESTS_ORACLES_H_
#define MIRRORPLAY_TESTS_ORACLES_H_

#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracles {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using ScalarFn = std::function<double(const Vec&)>;
using VectorFn = std::function<Vec(const Vec&)>;

inline Vec fd_gradient(const ScalarFn& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vec a = x, b = x;
    a[j] += h;
    b[j] -= h;
    g[j] = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

inline Mat fd_jacobian(const VectorFn& f, const Vec& x, double h = 1e-6) {
  const Vec f0 = f(x);
  Mat jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vec a = x, b = x;
    a[j] += h;
    b[j] -= h;
    jac.col(j) = (f(a) - f(b)) / (2 * h);
  }
  return jac;
}

inline double rel_err(const Mat& approx, const Mat& exact) {
  return (approx - exact).norm() / std::max(1.0, exact.norm());
}

// sup_y <v, y> - f(y) for concave 1-D objectives by golden-section search.
inline double conjugate_1d(const std::function<double(double)>& f, double v,
                           double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  auto obj = [&](double y) { return v * y - f(y); };
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (obj(c) > obj(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return obj(0.5 * (a + b));
}

// Solution of xdot = -(J x + b) (identity mirror, affine pseudogradient).
inline Vec linear_flow(const Mat& j, const Vec& b, const Vec& x0, double t) {
  const Vec x_bar = j.fullPivLu().solve(-b);
  const Mat e = (-j * t).exp();
  return x_bar + e * (x0 - x_bar);
}

// Stationary covariance S of dX = -J X dt + sqrt(2 eps) dW:
// J S + S J^T = 2 eps I, solved by vectorization.
inline Mat ou_covariance(const Mat& j, double eps) {
  const Eigen::Index n = j.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat op = Eigen::kroneckerProduct(id, j) + Eigen::kroneckerProduct(j, id);
  const Vec rhs = Eigen::Map<const Vec>(Mat(2 * eps * id).data(), n * n);
  const Vec s = op.fullPivLu().solve(rhs);
  return Eigen::Map<const Mat>(s.data(), n, n);
}

// Trapezoid rule on a uniform grid.
inline double trapezoid(const std::function<double(double)>& f, double a,
                        double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = 0.5 * (f(a) + f(b));
  for (int k = 1; k < intervals; ++k) s += f(a + k * h);
  return s * h;
}

}  // namespace oracles

#endif  // MIRRORPLAY_TESTS_ORACLES_H_
