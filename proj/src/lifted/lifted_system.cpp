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

#include "rpitube/lifted/lifted_system.hpp"

namespace rpitube::lifted {

LiftedSystem lift(const PlantModel& plant) {
  const int n = plant.n();
  const int m = plant.m();
  const int d = 2 * n + m;

  LiftedSystem sys;
  sys.n = n;
  sys.m = m;
  sys.At = Eigen::MatrixXd::Zero(d, d);
  sys.At.topLeftCorner(n, n) = plant.closed_loop();
  sys.At.block(0, n, n, m) = plant.B;
  sys.At.block(n, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  // The w block of At stays zero: the stored residual is not propagated,
  // it is re-drawn each step through Dt.

  sys.Bt = Eigen::MatrixXd::Zero(d, m);
  sys.Bt.topRows(n) = plant.B;
  sys.Bt.middleRows(n, m) = Eigen::MatrixXd::Identity(m, m);

  sys.Dt = Eigen::MatrixXd::Zero(d, n);
  sys.Dt.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  sys.Dt.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  return sys;
}

}  // namespace rpitube::lifted
