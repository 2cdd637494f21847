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

#ifndef RPITUBE_GEOM_HALFSPACE_SYSTEM_HPP_
#define RPITUBE_GEOM_HALFSPACE_SYSTEM_HPP_

#include <Eigen/Core>

#include "rpitube/common.hpp"

namespace rpitube::geom {

/// Plain H-representation { y : normals * y <= offsets }. Normals are not
/// required to be unit rows here; rows may be redundant.
struct HalfspaceSystem {
  Eigen::MatrixXd normals;  // k x d
  Eigen::VectorXd offsets;  // k

  HalfspaceSystem() = default;
  HalfspaceSystem(Eigen::MatrixXd n, Eigen::VectorXd o)
      : normals(std::move(n)), offsets(std::move(o)) {
    if (normals.rows() != offsets.size())
      throw InvalidArgument("halfspace system: row count mismatch");
  }

  int dims() const { return static_cast<int>(normals.cols()); }
  int count() const { return static_cast<int>(normals.rows()); }

  /// A system with no rows; every point satisfies it.
  static HalfspaceSystem everything(int dims) {
    return HalfspaceSystem(Eigen::MatrixXd(0, dims), Eigen::VectorXd(0));
  }

  HalfspaceSystem stacked(const HalfspaceSystem& other) const {
    if (other.dims() != dims())
      throw InvalidArgument("halfspace system: dimension mismatch in stack");
    HalfspaceSystem out;
    out.normals.resize(count() + other.count(), dims());
    out.normals << normals, other.normals;
    out.offsets.resize(count() + other.count());
    out.offsets << offsets, other.offsets;
    return out;
  }

  bool satisfied(const Eigen::VectorXd& y, double tol = 0.0) const {
    return count() == 0 || ((normals * y - offsets).maxCoeff() <= tol);
  }
};

}  // namespace rpitube::geom

#endif  // RPITUBE_GEOM_HALFSPACE_SYSTEM_HPP_
