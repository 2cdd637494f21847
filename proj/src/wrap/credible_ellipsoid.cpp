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

#include "rpitube/wrap/credible_ellipsoid.hpp"

#include <cmath>

#include "rpitube/stats/chi_squared.hpp"

namespace rpitube::wrap {

CredibleEllipsoid ellipsoid_at(const std::vector<gp::GpComponent>& model,
                               const Eigen::VectorXd& z, double t,
                               double alpha, double sigma_min2) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("ellipsoid_at: alpha must lie in (0, 1)");
  gp::PosteriorPoint p = gp::posterior(model, z, t, sigma_min2);
  CredibleEllipsoid e;
  e.mu = std::move(p.mean);
  e.var = std::move(p.variance);
  e.level = stats::chi_squared_quantile(static_cast<int>(model.size()),
                                        1.0 - alpha);
  e.validate();
  return e;
}

double ellipsoid_support(const CredibleEllipsoid& e, const Eigen::VectorXd& s) {
  if (s.size() != e.dims())
    throw InvalidArgument("ellipsoid_support: direction size mismatch");
  double quad = (s.array().square() * e.var.array()).sum();
  return s.dot(e.mu) + std::sqrt(e.level * quad);
}

geom::SupportPolytope polytopize(const CredibleEllipsoid& e,
                                 geom::DirectionSetPtr dirs) {
  e.validate();
  if (dirs->dims() != e.dims())
    throw InvalidArgument("polytopize: direction set dimension mismatch");
  Eigen::VectorXd h(dirs->size());
  for (int i = 0; i < dirs->size(); ++i)
    h[i] = ellipsoid_support(e, dirs->direction(i));
  return geom::SupportPolytope(std::move(dirs), std::move(h));
}

}  // namespace rpitube::wrap
