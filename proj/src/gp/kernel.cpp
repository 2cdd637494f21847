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

#include "rpitube/gp/kernel.hpp"

#include <cmath>

namespace rpitube::gp {

double kernel_eval(const KernelParams& p, const Eigen::VectorXd& z, double t,
                   const Eigen::VectorXd& z2, double t2, bool same_point) {
  if (z.size() != z2.size())
    throw InvalidArgument("kernel: input dimensions differ");
  double se = std::exp(-(z - z2).squaredNorm() / (2.0 * p.ell * p.ell));
  double per = 1.0;
  if (p.use_periodic) {
    double s = std::sin(3.14159265358979323846 * (t - t2) / p.period);
    per = std::exp(-2.0 * s * s / (p.ell_p * p.ell_p));
  }
  return p.sigma_f2 * se * per + (same_point ? p.sigma_n2 : 0.0);
}

}  // namespace rpitube::gp
