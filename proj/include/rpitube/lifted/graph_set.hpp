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

#ifndef RPITUBE_LIFTED_GRAPH_SET_HPP_
#define RPITUBE_LIFTED_GRAPH_SET_HPP_

#include <memory>

#include "rpitube/geom/halfspace_system.hpp"
#include "rpitube/lifted/plant_model.hpp"
#include "rpitube/wrap/disturbance_wrapper.hpp"

namespace rpitube::lifted {

/// Polyhedral outer bound of the admissible lifted states: the x block must
/// stay in X, the v block in V, and the w block inside the global residual
/// envelope of the current epoch. The state/input coupling of the residual
/// enters the iteration separately, through the slice-dependent union bound.
geom::HalfspaceSystem graph_rows(const PlantModel& plant,
                                 const wrap::DisturbanceSource& dist);

/// Membership check of a lifted point against the graph rows.
bool graph_admits(const geom::HalfspaceSystem& rows,
                  const Eigen::VectorXd& xi, double tol);

}  // namespace rpitube::lifted

#endif  // RPITUBE_LIFTED_GRAPH_SET_HPP_
