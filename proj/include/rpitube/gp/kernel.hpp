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

#ifndef RPITUBE_GP_KERNEL_HPP_
#define RPITUBE_GP_KERNEL_HPP_

#include <Eigen/Core>

#include "rpitube/common.hpp"

namespace rpitube::gp {

/// Hyperparameters of the product kernel: a squared-exponential factor over
/// the spatial input z, optionally multiplied by a periodic factor over the
/// timestamp, plus i.i.d. observation noise on the diagonal. Values are
/// fixed by configuration; nothing here is optimized.
struct KernelParams {
  double sigma_f2 = 1.0;   // signal variance
  double ell = 1.0;        // spatial length scale
  double period = 1.0;     // period of the time factor
  double ell_p = 1.0;      // length scale of the time factor
  double sigma_n2 = 1e-4;  // observation noise variance
  bool use_periodic = false;

  void validate() const {
    if (!(sigma_f2 > 0.0)) throw InvalidArgument("kernel: sigma_f2 must be > 0");
    if (!(ell > 0.0)) throw InvalidArgument("kernel: ell must be > 0");
    if (!(sigma_n2 > 0.0)) throw InvalidArgument("kernel: sigma_n2 must be > 0");
    if (use_periodic) {
      if (!(period > 0.0)) throw InvalidArgument("kernel: period must be > 0");
      if (!(ell_p > 0.0)) throw InvalidArgument("kernel: ell_p must be > 0");
    }
  }
};

/// Kernel value between (z, t) and (z2, t2). `same_point` adds the noise
/// term, i.e. it marks the diagonal of a Gram matrix.
double kernel_eval(const KernelParams& p, const Eigen::VectorXd& z, double t,
                   const Eigen::VectorXd& z2, double t2, bool same_point);

}  // namespace rpitube::gp

#endif  // RPITUBE_GP_KERNEL_HPP_
