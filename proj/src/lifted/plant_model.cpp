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

#include "rpitube/lifted/plant_model.hpp"

#include <Eigen/Eigenvalues>

#include "rpitube/common.hpp"

namespace rpitube::lifted {

double spectral_radius(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols())
    throw InvalidArgument("spectral_radius: matrix must be square");
  return M.eigenvalues().cwiseAbs().maxCoeff();
}

PlantModel make_plant(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd K,
                      geom::SupportPolytope X, geom::SupportPolytope U,
                      geom::SupportPolytope V, geom::SupportPolytope dV) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  if (A.cols() != n) throw InvalidArgument("plant: A must be square");
  if (B.rows() != n) throw InvalidArgument("plant: B row count != n");
  if (K.rows() != m || K.cols() != n)
    throw InvalidArgument("plant: K must be m x n");
  if (X.dims() != n) throw InvalidArgument("plant: X lives in state space");
  if (U.dims() != m) throw InvalidArgument("plant: U lives in input space");
  if (V.dims() != m) throw InvalidArgument("plant: V lives in input space");
  if (dV.dims() != m) throw InvalidArgument("plant: dV lives in input space");

  double rho = spectral_radius(A + B * K);
  if (!(rho < 1.0))
    throw InvalidArgument(
        "plant: the closed loop A + BK must be strictly stable");

  PlantModel p{std::move(A), std::move(B),  std::move(K), std::move(X),
               std::move(U), std::move(V), std::move(dV)};
  return p;
}

}  // namespace rpitube::lifted
