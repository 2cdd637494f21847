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

#ifndef RPITUBE_WRAP_LIPSCHITZ_HPP_
#define RPITUBE_WRAP_LIPSCHITZ_HPP_

#include <vector>

#include <Eigen/Core>

#include "rpitube/common.hpp"
#include "rpitube/geom/direction_set.hpp"
#include "rpitube/gp/regressor.hpp"

namespace rpitube::wrap {

/// Slope bounds of the posterior surfaces over the design region, measured
/// through the composed map (x, v) -> (x, Kx + v) -> posterior.
struct LipschitzBounds {
  /// Per stored residual direction s: slope of the projected mean s^T mu
  /// per unit distance in (x, v).
  Eigen::VectorXd mean_slope;
  /// Per stored residual direction s: slope of sqrt(sum_i s_i^2 var_i).
  Eigen::VectorXd sigma_slope;
};

/// Finite-difference slope estimate on a regular grid over `region`, scaled
/// by `safety` (> 1). With no training data both surfaces are constant and
/// all slopes are zero.
LipschitzBounds estimate_lipschitz(const std::vector<gp::GpComponent>& model,
                                   const Box& region,
                                   const Eigen::MatrixXd& K,
                                   const geom::DirectionSetPtr& dirs_w,
                                   int grid_density, double safety,
                                   double sigma_min2 = 1e-10,
                                   double query_time = 0.0);

}  // namespace rpitube::wrap

#endif  // RPITUBE_WRAP_LIPSCHITZ_HPP_
