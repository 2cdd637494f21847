// Copyright 2026 The rpitube Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RPITUBE_COMMON_HPP_
#define RPITUBE_COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rpitube {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A halfspace system (or a set represented by one) turned out to be empty.
class EmptySetError : public Error {
 public:
  using Error::Error;
};

class IllConditionedKernel : public Error {
 public:
  using Error::Error;
};

/// Anchor-grid construction would exceed the configured anchor budget.
class GridTooFine : public Error {
 public:
  using Error::Error;
};

class NoInvariantSeed : public Error {
 public:
  using Error::Error;
};

/// The outside-in chain lost per-direction monotonicity (internal inconsistency).
class MonotonicityViolation : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& msg, double last_gap)
      : Error(msg), last_gap_(last_gap) {}
  double last_gap() const { return last_gap_; }

 private:
  double last_gap_;
};

class OutOfTube : public Error {
 public:
  using Error::Error;
};

class SelectorInfeasible : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Deterministic 64-bit generator (splitmix64). All randomness in the library
/// flows through this class so results are bit-reproducible across platforms;
/// the standard <random> distributions are implementation-defined and are not
/// used anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes exactly two raw draws.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Uniformly distributed unit vector (normalized Gaussian draw).
  Eigen::VectorXd unit_vector(int dims) {
    Eigen::VectorXd v(dims);
    while (true) {
      for (int i = 0; i < dims; ++i) v[i] = normal();
      double n = v.norm();
      if (n > 1e-8) return v / n;
    }
  }

  /// Derives an independent stream for a sub-task. Fixed mixing constant so
  /// derived seeds are stable across runs.
  std::uint64_t derive(std::uint64_t salt) const {
    SplitMix64 g(state_ ^ (0xa0761d6478bd642fULL + salt));
    return g.next();
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Axis-aligned box, used for design regions and sanity bounds.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dims() const { return static_cast<int>(lo.size()); }

  bool contains(const Eigen::VectorXd& p, double tol = 0.0) const {
    for (int i = 0; i < dims(); ++i) {
      if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    }
    return true;
  }

  Eigen::VectorXd width() const { return hi - lo; }

  static Box centered(const Eigen::VectorXd& half_width) {
    return Box{-half_width, half_width};
  }

  void validate() const {
    if (lo.size() != hi.size() || lo.size() == 0)
      throw InvalidArgument("box bounds must be non-empty and equal length");
    for (int i = 0; i < dims(); ++i) {
      if (!(lo[i] <= hi[i])) throw InvalidArgument("box has lo > hi");
    }
  }
};

}  // namespace rpitube

#endif  // RPITUBE_COMMON_HPP_
