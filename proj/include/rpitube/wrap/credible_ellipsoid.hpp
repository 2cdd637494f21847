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

#ifndef RPITUBE_WRAP_CREDIBLE_ELLIPSOID_HPP_
#define RPITUBE_WRAP_CREDIBLE_ELLIPSOID_HPP_

#include <vector>

#include <Eigen/Core>

#include "rpitube/geom/support_polytope.hpp"
#include "rpitube/gp/regressor.hpp"

namespace rpitube::wrap {

/// Axis-aligned credible region { w : (w - mu)^T diag(var)^{-1} (w - mu)
/// <= level } around one posterior point. `var` entries are the floored
/// per-component posterior variances and `level` is the chi-squared
/// quantile for the requested coverage.
struct CredibleEllipsoid {
  Eigen::VectorXd mu;
  Eigen::VectorXd var;
  double level = 0.0;

  int dims() const { return static_cast<int>(mu.size()); }

  void validate() const {
    if (mu.size() != var.size() || mu.size() == 0)
      throw InvalidArgument("ellipsoid: mu/var size mismatch");
    if (!(level > 0.0)) throw InvalidArgument("ellipsoid: level must be > 0");
    if ((var.array() <= 0.0).any())
      throw InvalidArgument("ellipsoid: variances must be positive");
  }
};

/// Credible ellipsoid of the residual at query (z, t) with coverage
/// 1 - alpha.
CredibleEllipsoid ellipsoid_at(const std::vector<gp::GpComponent>& model,
                               const Eigen::VectorXd& z, double t,
                               double alpha, double sigma_min2 = 1e-10);

/// Exact support of the ellipsoid: s^T mu + sqrt(level * sum_i s_i^2 var_i).
double ellipsoid_support(const CredibleEllipsoid& e, const Eigen::VectorXd& s);

/// Tight outer polytope over the stored directions.
geom::SupportPolytope polytopize(const CredibleEllipsoid& e,
                                 geom::DirectionSetPtr dirs);

}  // namespace rpitube::wrap

#endif  // RPITUBE_WRAP_CREDIBLE_ELLIPSOID_HPP_
