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

#ifndef RPITUBE_GEOM_LP_HPP_
#define RPITUBE_GEOM_LP_HPP_

#include <Eigen/Core>

namespace rpitube::geom {

enum class LpStatus {
  kOptimal,
  kInfeasible,  // constraint system N y <= b has no solution
  kUnbounded,   // objective unbounded above over the feasible set
};

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double value = 0.0;      // optimal c^T y; +inf when unbounded
  Eigen::VectorXd point;   // a maximizer, valid only when status is kOptimal
  int iterations = 0;
};

/// Solves  max c^T y  subject to  N y <= b  with N of size K x d.
///
/// Runs revised simplex on the dual (min b^T lambda s.t. N^T lambda = c,
/// lambda >= 0), which keeps the working basis at d x d regardless of how
/// many halfspaces are stacked. The maximizer is recovered from the simplex
/// multipliers at optimality. Degeneracy is handled by switching from
/// Dantzig pricing to Bland's rule after a stall.
LpSolution lp_maximize(const Eigen::Ref<const Eigen::MatrixXd>& N,
                       const Eigen::Ref<const Eigen::VectorXd>& b,
                       const Eigen::Ref<const Eigen::VectorXd>& c);

/// Feasibility check for N y <= b. Returns a feasible point when one exists.
LpSolution lp_feasible(const Eigen::Ref<const Eigen::MatrixXd>& N,
                       const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace rpitube::geom

#endif  // RPITUBE_GEOM_LP_HPP_
