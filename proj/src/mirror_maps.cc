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

#include "mirrorplay/mirror_maps.h"

#include <cmath>
#include <sstream>
#include <utility>

namespace mirrorplay {
namespace {

constexpr double kSymmetryTolerance = 1e-12;

}  // namespace

MirrorMap::MirrorMap(MirrorFamily family, int dim, Matrix a)
    : family_(family), dim_(dim), a_(std::move(a)) {
  if (dim_ <= 0) throw InvariantError("mirror map dimension must be positive");
  if (family_ != MirrorFamily::kQuadratic) return;
  if (a_.rows() != dim_ || a_.cols() != dim_) {
    throw InvariantError("quadratic mirror matrix must be square");
  }
  if (!a_.allFinite()) throw InvariantError("quadratic mirror matrix not finite");
  const double asym = (a_ - a_.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance) {
    std::ostringstream os;
    os << "quadratic mirror matrix is not symmetric (max asymmetry " << asym
       << ")";
    throw InvariantError(os.str());
  }
  llt_.compute(a_);
  if (llt_.info() != Eigen::Success) {
    throw InvariantError("quadratic mirror matrix is not positive definite");
  }
  a_inv_ = llt_.solve(Matrix::Identity(dim_, dim_));
  a_inv_ = 0.5 * (a_inv_ + a_inv_.transpose()).eval();
}

MirrorMap MirrorMap::Quadratic(Matrix a) {
  const int dim = static_cast<int>(a.rows());
  return MirrorMap(MirrorFamily::kQuadratic, dim, std::move(a));
}

MirrorMap MirrorMap::Identity(int dim) {
  return Quadratic(Matrix::Identity(dim, dim));
}

MirrorMap MirrorMap::NegativeEntropy(int dim) {
  return MirrorMap(MirrorFamily::kNegativeEntropy, dim, Matrix());
}

bool MirrorMap::in_primal_domain(const Vector& y) const {
  if (y.size() != dim_ || !y.allFinite()) return false;
  if (family_ == MirrorFamily::kNegativeEntropy) return (y.array() > 0).all();
  return true;
}

void MirrorMap::check_primal(const Vector& y) const {
  if (in_primal_domain(y)) return;
  std::ostringstream os;
  os << "primal point outside mirror map domain (dim " << dim_ << ", got size "
     << y.size() << ")";
  throw DomainError(os.str());
}

void MirrorMap::check_dual(const Vector& x) const {
  if (x.size() == dim_ && x.allFinite()) return;
  throw DomainError("dual point must be finite with matching dimension");
}

double MirrorMap::phi(const Vector& y) const {
  check_primal(y);
  if (family_ == MirrorFamily::kQuadratic) return 0.5 * y.dot(a_ * y);
  return (y.array() * y.array().log() - y.array()).sum();
}

Vector MirrorMap::grad_phi(const Vector& y) const {
  check_primal(y);
  if (family_ == MirrorFamily::kQuadratic) return a_ * y;
  return y.array().log().matrix();
}

double MirrorMap::phi_conj(const Vector& x) const {
  check_dual(x);
  if (family_ == MirrorFamily::kQuadratic) return 0.5 * x.dot(a_inv_ * x);
  return x.array().exp().sum();
}

Vector MirrorMap::grad_phi_conj(const Vector& x) const {
  check_dual(x);
  if (family_ == MirrorFamily::kQuadratic) return llt_.solve(x);
  Vector y = x.array().exp().matrix();
  if (!y.allFinite()) throw DomainError("exp overflow in conjugate gradient");
  return y;
}

Matrix MirrorMap::hess_phi_conj(const Vector& x) const {
  check_dual(x);
  if (family_ == MirrorFamily::kQuadratic) return a_inv_;
  return x.array().exp().matrix().asDiagonal();
}

double bregman(const MirrorMap& map, const Vector& y, const Vector& y_ref) {
  if (map.family() == MirrorFamily::kQuadratic) {
    map.phi(y);  // domain check
    const Vector d = y - y_ref;
    return 0.5 * d.dot(map.matrix() * d);
  }
  map.phi(y);
  map.phi(y_ref);
  // sum y log(y / y_ref) - y + y_ref, the cancellation-free form.
  return (y.array() * (y.array() / y_ref.array()).log() - y.array() +
          y_ref.array())
      .sum();
}

double bregman_conj(const MirrorMap& map, const Vector& x,
                    const Vector& x_ref) {
  const Vector d = x - x_ref;
  if (map.family() == MirrorFamily::kQuadratic) {
    map.phi_conj(x);
    map.phi_conj(x_ref);
    return 0.5 * d.dot(map.hess_phi_conj(x_ref) * d);
  }
  map.phi_conj(x);
  // sum exp(x_ref) (exp(d) - 1 - d), with expm1 for small d.
  const Eigen::ArrayXd e_ref = x_ref.array().exp();
  double total = 0.0;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    total += e_ref[j] * (std::expm1(d[j]) - d[j]);
  }
  return total;
}

double fenchel_coupling(double f_value, double f_conj_value, const Vector& y,
                        const Vector& v) {
  if (f_conj_value == kInfinity || f_value == kInfinity) return kInfinity;
  return f_value + f_conj_value - y.dot(v);
}

AggregatedMirror::AggregatedMirror(std::vector<MirrorMap> parts)
    : parts_(std::move(parts)) {
  if (parts_.empty()) throw InvariantError("aggregated mirror needs a part");
  offsets_.reserve(parts_.size());
  for (const MirrorMap& p : parts_) {
    offsets_.push_back(dim_);
    dim_ += p.dim();
  }
}

AggregatedMirror AggregatedMirror::Identity(const std::vector<int>& dims) {
  std::vector<MirrorMap> parts;
  for (int d : dims) parts.push_back(MirrorMap::Identity(d));
  return AggregatedMirror(std::move(parts));
}

double AggregatedMirror::phi(const Vector& y) const {
  double total = 0.0;
  for (int i = 0; i < num_players(); ++i) total += parts_[i].phi(block(y, i));
  return total;
}

Vector AggregatedMirror::grad_phi(const Vector& y) const {
  Vector out(dim_);
  for (int i = 0; i < num_players(); ++i) {
    out.segment(offsets_[i], dim(i)) = parts_[i].grad_phi(block(y, i));
  }
  return out;
}

Vector AggregatedMirror::grad_phi_conj(const Vector& x) const {
  if (x.size() != dim_) throw DomainError("dual vector has wrong dimension");
  Vector out(dim_);
  for (int i = 0; i < num_players(); ++i) {
    out.segment(offsets_[i], dim(i)) = parts_[i].grad_phi_conj(block(x, i));
  }
  return out;
}

Matrix AggregatedMirror::hess_phi_conj(const Vector& x) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < num_players(); ++i) {
    out.block(offsets_[i], offsets_[i], dim(i), dim(i)) =
        parts_[i].hess_phi_conj(block(x, i));
  }
  return out;
}

bool AggregatedMirror::all_quadratic() const {
  for (const MirrorMap& p : parts_) {
    if (p.family() != MirrorFamily::kQuadratic) return false;
  }
  return true;
}

Matrix AggregatedMirror::quadratic_hessian() const {
  if (!all_quadratic()) {
    throw InvariantError("quadratic_hessian requires quadratic mirror maps");
  }
  Matrix out = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < num_players(); ++i) {
    out.block(offsets_[i], offsets_[i], dim(i), dim(i)) = parts_[i].matrix();
  }
  return out;
}

double AggregatedMirror::bregman(const Vector& y, const Vector& y_ref) const {
  double total = 0.0;
  for (int i = 0; i < num_players(); ++i) {
    total += mirrorplay::bregman(parts_[i], block(y, i), block(y_ref, i));
  }
  return total;
}

}  // namespace mirrorplay
