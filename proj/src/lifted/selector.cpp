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

#include "rpitube/lifted/selector.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rpitube/common.hpp"
#include "rpitube/geom/lp.hpp"

namespace rpitube::lifted {
namespace {

constexpr int kMaxMajor = 200;
constexpr int kMaxMinor = 100;
constexpr double kGapTol = 1e-10;
constexpr double kWeightTol = 1e-12;

// Affine minimizer of |sum_i a_i p_i| subject to sum_i a_i = 1, through the
// bordered Gram system. A complete orthogonal decomposition keeps the solve
// meaningful when the corral happens to be affinely dependent.
Eigen::VectorXd affine_weights(const Eigen::MatrixXd& points) {
  const int k = static_cast<int>(points.cols());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = points.transpose() * points;
  kkt.topRightCorner(k, 1).setOnes();
  kkt.bottomLeftCorner(1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  Eigen::VectorXd sol =
      kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

SelectorPolicy::SelectorPolicy(const geom::SupportPolytope& z_star,
                               const geom::SupportPolytope& input_set,
                               const geom::SupportPolytope& proj_x,
                               int state_dim, int input_dim)
    : proj_x_(proj_x), n_(state_dim), m_(input_dim) {
  if (n_ < 1 || m_ < 1)
    throw InvalidArgument("selector: state and input dims must be positive");
  if (z_star.dims() != 2 * n_ + m_)
    throw InvalidArgument("selector: invariant set dimension mismatch");
  if (input_set.dims() != m_)
    throw InvalidArgument("selector: offset set dimension mismatch");
  if (proj_x.dims() != n_)
    throw InvalidArgument("selector: state shadow dimension mismatch");

  const Eigen::MatrixXd& sz = z_star.direction_set()->rows();
  const Eigen::MatrixXd& sv = input_set.direction_set()->rows();
  const int kz = static_cast<int>(sz.rows());
  const int kv = static_cast<int>(sv.rows());

  slice_normals_.resize(kz + kv, m_ + n_);
  slice_offsets_.resize(kz + kv);
  x_block_ = Eigen::MatrixXd::Zero(kz + kv, n_);

  // Lifted rows with the state block split off; at query time the offset
  // becomes h_i - s_x . x and the remaining normal acts on y = (v, w).
  x_block_.topRows(kz) = sz.leftCols(n_);
  slice_normals_.topRows(kz).leftCols(m_) = sz.middleCols(n_, m_);
  slice_normals_.topRows(kz).rightCols(n_) = sz.rightCols(n_);
  slice_offsets_.head(kz) = z_star.values();

  slice_normals_.bottomRows(kv).setZero();
  slice_normals_.bottomRows(kv).leftCols(m_) = sv;
  slice_offsets_.tail(kv) = input_set.values();
}

bool SelectorPolicy::admits(Eigen::Ref<const Eigen::VectorXd> x,
                            double tol) const {
  if (x.size() != n_)
    throw InvalidArgument("selector: query state has the wrong dimension");
  return proj_x_.halfspaces().satisfied(x, tol);
}

Selection SelectorPolicy::select(Eigen::Ref<const Eigen::VectorXd> x) const {
  if (x.size() != n_)
    throw InvalidArgument("selector: query state has the wrong dimension");

  {
    const Eigen::MatrixXd& sx = proj_x_.direction_set()->rows();
    Eigen::VectorXd margin = sx * x - proj_x_.values();
    double worst = margin.maxCoeff();
    if (worst > 1e-9) {
      std::ostringstream msg;
      msg << "selector: state leaves the certified tube (worst margin "
          << worst << ")";
      throw OutOfTube(msg.str());
    }
  }

  Eigen::VectorXd rhs = slice_offsets_ - x_block_ * x;
  int calls = 0;

  // Linear minimization oracle over the offset shadow of the slice:
  // minimizes c . v over all (v, w) satisfying the rows and reports v.
  auto lmo = [&](const Eigen::VectorXd& c) -> Eigen::VectorXd {
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(m_ + n_);
    obj.head(m_) = -c;
    geom::LpSolution sol = geom::lp_maximize(slice_normals_, rhs, obj);
    ++calls;
    if (sol.status == geom::LpStatus::kInfeasible) {
      // Smallest uniform relaxation t making every row satisfiable; tells
      // the caller how far from admissible the state actually is.
      Eigen::MatrixXd nr(slice_normals_.rows(), m_ + n_ + 1);
      nr.leftCols(m_ + n_) = slice_normals_;
      nr.rightCols(1).setConstant(-1.0);
      Eigen::VectorXd cr = Eigen::VectorXd::Zero(m_ + n_ + 1);
      cr(m_ + n_) = -1.0;
      geom::LpSolution relax = geom::lp_maximize(nr, rhs, cr);
      std::ostringstream msg;
      msg << "selector: no admissible offset at this state";
      if (relax.status == geom::LpStatus::kOptimal)
        msg << " (rows infeasible by " << -relax.value << ")";
      throw SelectorInfeasible(msg.str());
    }
    if (sol.status == geom::LpStatus::kUnbounded)
      throw Error("selector: offset slice is unbounded; invariant rows "
                  "must bound every coordinate");
    return sol.point.head(m_);
  };

  // Wolfe's minimum-norm-point search. The corral stays small (at most
  // m + 1 affinely independent points), so the dense bordered solve in
  // each minor cycle is cheap.
  Eigen::VectorXd cur = lmo(Eigen::VectorXd::Zero(m_));
  std::vector<Eigen::VectorXd> corral{cur};
  std::vector<double> weight{1.0};

  for (int major = 0; major < kMaxMajor; ++major) {
    double cur2 = cur.squaredNorm();
    Eigen::VectorXd q = lmo(cur);
    if (cur2 - cur.dot(q) <= kGapTol * (1.0 + cur2)) break;

    bool duplicate = false;
    for (const auto& p : corral)
      if ((p - q).norm() <= 1e-12) { duplicate = true; break; }
    if (duplicate) break;

    corral.push_back(q);
    weight.push_back(0.0);

    for (int minor = 0; minor < kMaxMinor; ++minor) {
      const int k = static_cast<int>(corral.size());
      Eigen::MatrixXd pts(m_, k);
      for (int i = 0; i < k; ++i) pts.col(i) = corral[i];
      Eigen::VectorXd alpha = affine_weights(pts);

      if (alpha.minCoeff() >= -kWeightTol) {
        for (int i = 0; i < k; ++i) weight[i] = std::max(alpha(i), 0.0);
        cur = pts * alpha;
        break;
      }

      // Step from the current convex weights toward the affine minimizer
      // until the first weight hits zero, then drop that point.
      double theta = 1.0;
      for (int i = 0; i < k; ++i)
        if (alpha(i) < weight[i])
          theta = std::min(theta, weight[i] / (weight[i] - alpha(i)));
      for (int i = 0; i < k; ++i)
        weight[i] = (1.0 - theta) * weight[i] + theta * alpha(i);

      for (int i = k - 1; i >= 0; --i) {
        if (weight[i] <= kWeightTol) {
          corral.erase(corral.begin() + i);
          weight.erase(weight.begin() + i);
        }
      }
      double total = 0.0;
      for (double wi : weight) total += wi;
      if (total <= 0.0 || corral.empty())
        throw Error("selector: min-norm search lost its corral");
      cur.setZero();
      for (std::size_t i = 0; i < corral.size(); ++i) {
        weight[i] /= total;
        cur += weight[i] * corral[i];
      }
    }
  }

  Selection out;
  out.v = cur;
  out.norm = cur.norm();
  out.oracle_calls = calls;
  return out;
}

}  // namespace rpitube::lifted
