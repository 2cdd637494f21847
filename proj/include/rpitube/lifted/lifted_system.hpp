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

#ifndef RPITUBE_LIFTED_LIFTED_SYSTEM_HPP_
#define RPITUBE_LIFTED_LIFTED_SYSTEM_HPP_

#include <Eigen/Core>

#include "rpitube/lifted/plant_model.hpp"

namespace rpitube::lifted {

/// Augmented dynamics over xi = (x, v_prev, w_prev) in R^{2n+m}:
///
///   xi+ = At xi + Bt dv + Dt w
///
/// where dv is the per-step change of the reference offset and w the
/// realized residual. Carrying (v_prev, w_prev) inside the state is what
/// lets a state- and input-dependent residual bound act on an invariant
/// set computed in one shot.
struct LiftedSystem {
  Eigen::MatrixXd At;  // (2n+m) x (2n+m)
  Eigen::MatrixXd Bt;  // (2n+m) x m
  Eigen::MatrixXd Dt;  // (2n+m) x n
  int n = 0;
  int m = 0;

  int dim() const { return 2 * n + m; }
};

LiftedSystem lift(const PlantModel& plant);

}  // namespace rpitube::lifted

#endif  // RPITUBE_LIFTED_LIFTED_SYSTEM_HPP_
