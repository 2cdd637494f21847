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

#ifndef RPITUBE_GEOM_SUPPORT_POLYTOPE_HPP_
#define RPITUBE_GEOM_SUPPORT_POLYTOPE_HPP_

#include <vector>

#include <Eigen/Core>

#include "rpitube/geom/direction_set.hpp"
#include "rpitube/geom/halfspace_system.hpp"

namespace rpitube::geom {

/// Convex set stored as support values over a shared DirectionSet. The set
/// it denotes is the H-polytope { y : s_i^T y <= h_i for all stored i }.
///
/// Stored values are authoritative: support() along a stored direction reads
/// the table even when the value is not tight for the induced polytope. This
/// keeps identity maps and per-direction arithmetic exact.
class SupportPolytope {
 public:
  SupportPolytope(DirectionSetPtr dirs, Eigen::VectorXd h);

  /// Axis-aligned box centered at the origin with the given half-widths.
  /// Supports are exact in every stored direction.
  static SupportPolytope box(DirectionSetPtr dirs,
                             const Eigen::VectorXd& half_width);

  /// Box with arbitrary bounds.
  static SupportPolytope box(DirectionSetPtr dirs, const Box& b);

  /// Singleton {p}.
  static SupportPolytope point(DirectionSetPtr dirs, const Eigen::VectorXd& p);

  const DirectionSetPtr& direction_set() const { return dirs_; }
  const Eigen::VectorXd& values() const { return h_; }
  Eigen::VectorXd& values() { return h_; }
  int dims() const { return dirs_->dims(); }
  int count() const { return static_cast<int>(h_.size()); }

  HalfspaceSystem halfspaces() const {
    return HalfspaceSystem(dirs_->rows(), h_);
  }

  bool shares_directions(const SupportPolytope& other) const {
    return dirs_ == other.dirs_ ||
           (dirs_->dims() == other.dirs_->dims() &&
            dirs_->rows() == other.dirs_->rows());
  }

 private:
  DirectionSetPtr dirs_;
  Eigen::VectorXd h_;
};

/// Support value of P along s. Stored directions are answered from the
/// table; anything else solves a small LP over P's halfspaces. Throws
/// EmptySetError when the LP route finds the system infeasible.
double support(const SupportPolytope& P, const Eigen::VectorXd& s);

/// LP support of a raw halfspace system. Throws EmptySetError when the
/// system is empty and returns +inf when unbounded along s.
double support(const HalfspaceSystem& H, const Eigen::VectorXd& s);

/// Per-direction sum of supports; both operands must share the direction
/// family.
SupportPolytope minkowski_sum(const SupportPolytope& A,
                              const SupportPolytope& B);

/// Image M*P expressed over `out` directions: h(s) = support(P, M^T s).
SupportPolytope affine_image(const Eigen::MatrixXd& M,
                             const SupportPolytope& P, DirectionSetPtr out);

/// Re-evaluates every stored direction over P's rows stacked with H. The
/// result never exceeds P's stored values. Throws EmptySetError when the
/// combined system is empty.
SupportPolytope intersect(const SupportPolytope& P, const HalfspaceSystem& H);

/// Coordinate projection onto `coords`, expressed over `out` directions.
SupportPolytope project(const SupportPolytope& P,
                        const std::vector<int>& coords, DirectionSetPtr out);

/// Per-direction test h_inner <= h_outer + tol. This certifies containment
/// of the induced polytopes; both operands must share the direction family.
bool contains(const SupportPolytope& outer, const SupportPolytope& inner,
              double tol);

/// max_i |h_A(s_i) - h_B(s_i)|, the directed support gap over the family.
/// Throws EmptySetError when either operand is empty.
double hausdorff_gap(const SupportPolytope& A, const SupportPolytope& B);

/// LP feasibility of P's halfspace system.
bool is_empty(const SupportPolytope& P);

/// Scaling about the origin by c >= 0: supports scale linearly.
SupportPolytope scale(const SupportPolytope& P, double c);

}  // namespace rpitube::geom

#endif  // RPITUBE_GEOM_SUPPORT_POLYTOPE_HPP_
