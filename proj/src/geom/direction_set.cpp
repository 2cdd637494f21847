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

#include "rpitube/geom/direction_set.hpp"

#include <cmath>

#include "rpitube/common.hpp"

namespace rpitube::geom {

DirectionSetPtr DirectionSet::make(int dims, int n_f, std::uint64_t seed) {
  if (dims < 1) throw InvalidArgument("direction set: dims must be positive");
  if (n_f < 2 * dims)
    throw InvalidArgument(
        "direction set: need at least 2*dims directions to bound the set");

  Eigen::MatrixXd dirs = Eigen::MatrixXd::Zero(n_f, dims);
  for (int a = 0; a < dims; ++a) {
    dirs(2 * a, a) = 1.0;
    dirs(2 * a + 1, a) = -1.0;
  }
  SplitMix64 rng(seed);
  for (int i = 2 * dims; i < n_f; ++i) {
    dirs.row(i) = rng.unit_vector(dims).transpose();
  }
  return DirectionSetPtr(new DirectionSet(dims, seed, std::move(dirs)));
}

DirectionSetPtr DirectionSet::make_with_planes(
    int dims, int n_f, std::uint64_t seed,
    const std::vector<std::pair<int, int>>& planes, int fan_per_plane) {
  if (dims < 1) throw InvalidArgument("direction set: dims must be positive");
  if (fan_per_plane < 0)
    throw InvalidArgument("direction set: fan size must be >= 0");
  const int structured =
      2 * dims + fan_per_plane * static_cast<int>(planes.size());
  if (n_f < structured)
    throw InvalidArgument(
        "direction set: budget too small for the requested plane fans");

  Eigen::MatrixXd dirs = Eigen::MatrixXd::Zero(n_f, dims);
  for (int a = 0; a < dims; ++a) {
    dirs(2 * a, a) = 1.0;
    dirs(2 * a + 1, a) = -1.0;
  }
  int at = 2 * dims;
  for (const auto& [i, j] : planes) {
    if (i < 0 || j < 0 || i >= dims || j >= dims || i == j)
      throw InvalidArgument("direction set: bad plane axes");
    // Half-step offset keeps every fan angle away from the stored axes.
    for (int t = 0; t < fan_per_plane; ++t) {
      double theta = 2.0 * M_PI * (t + 0.5) / fan_per_plane;
      dirs(at, i) = std::cos(theta);
      dirs(at, j) = std::sin(theta);
      ++at;
    }
  }
  SplitMix64 rng(seed);
  for (; at < n_f; ++at) dirs.row(at) = rng.unit_vector(dims).transpose();
  return DirectionSetPtr(new DirectionSet(dims, seed, std::move(dirs)));
}

DirectionSetPtr DirectionSet::make_explicit(Eigen::MatrixXd rows) {
  const int dims = static_cast<int>(rows.cols());
  const int n_f = static_cast<int>(rows.rows());
  if (dims < 1) throw InvalidArgument("direction set: dims must be positive");
  if (n_f < 2 * dims)
    throw InvalidArgument(
        "direction set: need at least 2*dims directions to bound the set");
  for (int i = 0; i < n_f; ++i) {
    if (std::abs(rows.row(i).norm() - 1.0) > 1e-9)
      throw InvalidArgument("direction set: explicit rows must be unit");
  }
  for (int a = 0; a < dims; ++a) {
    if (std::abs(rows(2 * a, a) - 1.0) > 1e-12 ||
        std::abs(rows(2 * a + 1, a) + 1.0) > 1e-12)
      throw InvalidArgument(
          "direction set: explicit rows must start with the signed axes");
  }
  return DirectionSetPtr(new DirectionSet(dims, 0, std::move(rows)));
}

int DirectionSet::find(const Eigen::VectorXd& s, double tol) const {
  if (s.size() != dims_) return -1;
  double n = s.norm();
  if (n < 1e-14) return -1;
  Eigen::VectorXd unit = s / n;
  for (int i = 0; i < size(); ++i) {
    if ((dirs_.row(i).transpose() - unit).cwiseAbs().maxCoeff() <= tol)
      return i;
  }
  return -1;
}

}  // namespace rpitube::geom
