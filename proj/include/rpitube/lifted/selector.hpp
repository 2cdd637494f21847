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

#ifndef RPITUBE_LIFTED_SELECTOR_HPP_
#define RPITUBE_LIFTED_SELECTOR_HPP_

#include <Eigen/Core>

#include "rpitube/geom/support_polytope.hpp"

namespace rpitube::lifted {

struct Selection {
  Eigen::VectorXd v;    // chosen reference offset, dimension m
  double norm = 0.0;    // Euclidean length of v
  int oracle_calls = 0; // linear minimizations spent finding it
};

/// Feedback policy extracted from a converged invariant set. At a state x
/// it returns the minimum-norm offset v such that (x, v, w) lies inside
/// the set for some admissible residual w; applying u = K x + v then keeps
/// the closed loop inside the certified tube.
///
/// The v,w-slice of the invariant set at fixed x is a polytope, and its
/// projection onto v is explored through a linear-minimization oracle, so
/// the search never needs vertex enumeration. The min-norm point is found
/// by Wolfe's algorithm over that projection.
class SelectorPolicy {
 public:
  /// z_star: converged lifted set over (x, v_prev, w_prev).
  /// input_set: the offset constraint V, kept as explicit rows because the
  /// stored lifted directions only imply it approximately.
  /// proj_x: state-space shadow of z_star, used for the membership check.
  SelectorPolicy(const geom::SupportPolytope& z_star,
                 const geom::SupportPolytope& input_set,
                 const geom::SupportPolytope& proj_x, int state_dim,
                 int input_dim);

  /// True when x satisfies every stored row of the state-space shadow.
  bool admits(Eigen::Ref<const Eigen::VectorXd> x, double tol = 1e-9) const;

  /// Minimum-norm admissible offset at x. Throws OutOfTube when x fails the
  /// membership check and SelectorInfeasible when the slice at x is empty;
  /// the latter message carries the smallest uniform row relaxation that
  /// would restore feasibility.
  Selection select(Eigen::Ref<const Eigen::VectorXd> x) const;

  int state_dim() const { return n_; }
  int input_dim() const { return m_; }

 private:
  Eigen::MatrixXd slice_normals_;  // rows over y = (v, w)
  Eigen::VectorXd slice_offsets_;  // offsets before the state correction
  Eigen::MatrixXd x_block_;        // per-row state coefficients
  geom::SupportPolytope proj_x_;
  int n_ = 0;
  int m_ = 0;
};

}  // namespace rpitube::lifted

#endif  // RPITUBE_LIFTED_SELECTOR_HPP_
