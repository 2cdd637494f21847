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

#ifndef RPITUBE_LIFTED_PLANT_MODEL_HPP_
#define RPITUBE_LIFTED_PLANT_MODEL_HPP_

#include <Eigen/Core>

#include "rpitube/geom/support_polytope.hpp"

namespace rpitube::lifted {

/// Discrete-time plant x+ = A x + B u + w with pre-stabilizing feedback
/// u = K x + v, together with the constraint sets: states X, raw inputs U,
/// reference offsets V and per-step offset increments dV.
struct PlantModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd K;
  geom::SupportPolytope X;
  geom::SupportPolytope U;
  geom::SupportPolytope V;
  geom::SupportPolytope dV;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  Eigen::MatrixXd closed_loop() const { return A + B * K; }
};

/// Validates dimensions and requires the closed loop A + BK to be strictly
/// stable (spectral radius < 1).
PlantModel make_plant(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd K,
                      geom::SupportPolytope X, geom::SupportPolytope U,
                      geom::SupportPolytope V, geom::SupportPolytope dV);

/// Spectral radius via eigenvalues; exposed for tests and diagnostics.
double spectral_radius(const Eigen::MatrixXd& M);

}  // namespace rpitube::lifted

#endif  // RPITUBE_LIFTED_PLANT_MODEL_HPP_
