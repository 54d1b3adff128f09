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

#ifndef MIRRORPLAY_TYPES_H_
#define MIRRORPLAY_TYPES_H_

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mirrorplay {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Extended-real sentinel for conjugates and costs that are +infinity.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside a mirror map's (or game's) domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Violated construction invariant (non-SPD matrix, negative equilibrium...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class NonconvergenceError : public Error {
 public:
  using Error::Error;
};

// A trajectory left the domain of a mirror map during integration.
class DomainEscapeError : public Error {
 public:
  DomainEscapeError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Cournot price vector P = M - y1 - y2 lost strict positivity.
class PriceRegionError : public Error {
 public:
  PriceRegionError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class SingularHessianError : public Error {
 public:
  using Error::Error;
};

class InsufficientDecayData : public Error {
 public:
  using Error::Error;
};

class InsufficientPaths : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mirrorplay

#endif  // MIRRORPLAY_TYPES_H_
