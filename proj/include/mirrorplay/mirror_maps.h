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

// Legendre mirror maps and the divergences built on them.
//
// A MirrorMap bridges a player's primal strategy space and the dual
// (score) space R^n. Two families are supported:
//
//   Quadratic:        phi(y) = 1/2 <y, A y>,  A symmetric positive definite,
//                     grad phi*(x) = A^{-1} x.
//   NegativeEntropy:  phi(y) = sum_j y_j log y_j - y_j on the open positive
//                     orthant, grad phi*(x) = exp(x).
//
// Values are immutable after construction.

#ifndef MIRRORPLAY_MIRROR_MAPS_H_
#define MIRRORPLAY_MIRROR_MAPS_H_

#include <vector>

#include <Eigen/Cholesky>

#include "mirrorplay/types.h"

namespace mirrorplay {

enum class MirrorFamily { kQuadratic, kNegativeEntropy };

class MirrorMap {
 public:
  // Throws InvariantError unless A is square, symmetric within 1e-12 and
  // positive definite.
  static MirrorMap Quadratic(Matrix a);
  static MirrorMap Identity(int dim);
  static MirrorMap NegativeEntropy(int dim);

  MirrorFamily family() const { return family_; }
  int dim() const { return dim_; }
  // Only meaningful for the quadratic family.
  const Matrix& matrix() const { return a_; }

  bool in_primal_domain(const Vector& y) const;

  double phi(const Vector& y) const;
  Vector grad_phi(const Vector& y) const;
  double phi_conj(const Vector& x) const;
  Vector grad_phi_conj(const Vector& x) const;
  Matrix hess_phi_conj(const Vector& x) const;

 private:
  MirrorMap(MirrorFamily family, int dim, Matrix a);

  void check_primal(const Vector& y) const;
  void check_dual(const Vector& x) const;

  MirrorFamily family_;
  int dim_;
  Matrix a_;
  Eigen::LLT<Matrix> llt_;
  Matrix a_inv_;
};

// D_phi(y, y_ref) = phi(y) - phi(y_ref) - <grad phi(y_ref), y - y_ref>.
double bregman(const MirrorMap& map, const Vector& y, const Vector& y_ref);

// D_{phi*}(x, x_ref); equals bregman(map, grad_phi_conj(x_ref),
// grad_phi_conj(x)).
double bregman_conj(const MirrorMap& map, const Vector& x,
                    const Vector& x_ref);

// FC_f(y, v) = f(y) + f*(v) - <y, v>. A +infinity conjugate yields
// +infinity.
double fenchel_coupling(double f_value, double f_conj_value, const Vector& y,
                        const Vector& v);

// Sum of per-player mirror maps acting on stacked vectors.
class AggregatedMirror {
 public:
  explicit AggregatedMirror(std::vector<MirrorMap> parts);
  static AggregatedMirror Identity(const std::vector<int>& dims);

  int num_players() const { return static_cast<int>(parts_.size()); }
  int dim() const { return dim_; }
  int dim(int i) const { return parts_[i].dim(); }
  int offset(int i) const { return offsets_[i]; }
  const MirrorMap& part(int i) const { return parts_[i]; }
  const std::vector<MirrorMap>& parts() const { return parts_; }

  auto block(const Vector& v, int i) const {
    return v.segment(offsets_[i], parts_[i].dim());
  }

  double phi(const Vector& y) const;
  Vector grad_phi(const Vector& y) const;
  // Phi*: stacked primal image of a dual vector.
  Vector grad_phi_conj(const Vector& x) const;
  // Block-diagonal Hessian of the aggregated conjugate.
  Matrix hess_phi_conj(const Vector& x) const;
  // Block-diagonal Hessian of phi, available when every part is quadratic.
  bool all_quadratic() const;
  Matrix quadratic_hessian() const;
  // D_phi(y, y_ref) summed over players.
  double bregman(const Vector& y, const Vector& y_ref) const;

 private:
  std::vector<MirrorMap> parts_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

}  // namespace mirrorplay

#endif  // MIRRORPLAY_MIRROR_MAPS_H_
