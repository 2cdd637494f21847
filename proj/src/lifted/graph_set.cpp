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

#include "rpitube/lifted/graph_set.hpp"

namespace rpitube::lifted {

geom::HalfspaceSystem graph_rows(const PlantModel& plant,
                                 const wrap::DisturbanceSource& dist) {
  const int n = plant.n();
  const int m = plant.m();
  const int d = 2 * n + m;
  if (dist.w_directions()->dims() != n)
    throw InvalidArgument("graph: residual directions must be n-dimensional");

  const auto& SX = plant.X.direction_set()->rows();
  const auto& SV = plant.V.direction_set()->rows();
  const auto& SW = dist.w_directions()->rows();
  const int kx = static_cast<int>(SX.rows());
  const int kv = static_cast<int>(SV.rows());
  const int kw = static_cast<int>(SW.rows());

  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(kx + kv + kw, d);
  Eigen::VectorXd o(kx + kv + kw);
  N.block(0, 0, kx, n) = SX;
  o.head(kx) = plant.X.values();
  N.block(kx, n, kv, m) = SV;
  o.segment(kx, kv) = plant.V.values();
  N.block(kx + kv, n + m, kw, n) = SW;
  o.tail(kw) = dist.envelope();
  return geom::HalfspaceSystem(std::move(N), std::move(o));
}

bool graph_admits(const geom::HalfspaceSystem& rows, const Eigen::VectorXd& xi,
                  double tol) {
  return rows.satisfied(xi, tol);
}

}  // namespace rpitube::lifted
