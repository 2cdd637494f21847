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

#ifndef RPITUBE_GEOM_DIRECTION_SET_HPP_
#define RPITUBE_GEOM_DIRECTION_SET_HPP_

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace rpitube::geom {

class DirectionSet;
using DirectionSetPtr = std::shared_ptr<const DirectionSet>;

/// A fixed, ordered family of unit outer normals along which set supports
/// are stored. Every set-valued computation in one synthesis run shares the
/// same family per space, so per-direction arithmetic (Minkowski sums,
/// intersections, containment checks) stays exact and monotone.
///
/// Layout: the first 2*dims entries are +e_0, -e_0, +e_1, -e_1, ...; the
/// remainder are seeded random unit vectors, reproducible for a given
/// (dims, n_f, seed) triple.
class DirectionSet {
 public:
  static DirectionSetPtr make(int dims, int n_f, std::uint64_t seed);

  /// Variant that spends part of the budget on evenly spaced fans inside
  /// the given coordinate planes before filling up with random directions.
  /// Dynamics that rotate mass within a plane produce skewed sets; axis
  /// and random normals alone bound those poorly, which inflates every
  /// iterate of a set recursion. Fan angles avoid the axes, which are
  /// already stored.
  static DirectionSetPtr make_with_planes(
      int dims, int n_f, std::uint64_t seed,
      const std::vector<std::pair<int, int>>& planes, int fan_per_plane);

  /// Wraps an explicit matrix of unit rows, typically reloaded from an
  /// artifact file. The class layout contract still applies: the first
  /// 2*dims rows must be the signed axes, every row must have unit norm.
  static DirectionSetPtr make_explicit(Eigen::MatrixXd rows);

  int dims() const { return dims_; }
  int size() const { return static_cast<int>(dirs_.rows()); }
  std::uint64_t seed() const { return seed_; }

  /// Matrix of directions, one unit row per direction (n_f x dims).
  const Eigen::MatrixXd& rows() const { return dirs_; }

  Eigen::VectorXd direction(int i) const { return dirs_.row(i).transpose(); }

  /// Index of a stored direction equal to s (component-wise within tol),
  /// or -1. s need not be normalized; it is compared after normalization.
  int find(const Eigen::VectorXd& s, double tol = 1e-12) const;

  /// Stored index of +e_axis / -e_axis.
  static int axis_index(int axis, bool positive) {
    return 2 * axis + (positive ? 0 : 1);
  }

 private:
  DirectionSet(int dims, std::uint64_t seed, Eigen::MatrixXd dirs)
      : dims_(dims), seed_(seed), dirs_(std::move(dirs)) {}

  int dims_;
  std::uint64_t seed_;
  Eigen::MatrixXd dirs_;
};

}  // namespace rpitube::geom

#endif  // RPITUBE_GEOM_DIRECTION_SET_HPP_
