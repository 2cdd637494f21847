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

#include "rpitube/geom/support_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpitube/common.hpp"
#include "rpitube/geom/lp.hpp"

namespace rpitube::geom {

SupportPolytope::SupportPolytope(DirectionSetPtr dirs, Eigen::VectorXd h)
    : dirs_(std::move(dirs)), h_(std::move(h)) {
  if (!dirs_) throw InvalidArgument("support polytope: null direction set");
  if (h_.size() != dirs_->size())
    throw InvalidArgument("support polytope: value count != direction count");
}

SupportPolytope SupportPolytope::box(DirectionSetPtr dirs,
                                     const Eigen::VectorXd& half_width) {
  if (half_width.size() != dirs->dims())
    throw InvalidArgument("box: half-width length != dims");
  if ((half_width.array() < 0.0).any())
    throw InvalidArgument("box: negative half-width");
  Eigen::VectorXd h = dirs->rows().cwiseAbs() * half_width;
  return SupportPolytope(std::move(dirs), std::move(h));
}

SupportPolytope SupportPolytope::box(DirectionSetPtr dirs, const Box& b) {
  b.validate();
  if (b.dims() != dirs->dims())
    throw InvalidArgument("box: bounds length != dims");
  const Eigen::MatrixXd& S = dirs->rows();
  Eigen::VectorXd h(dirs->size());
  for (int i = 0; i < dirs->size(); ++i) {
    double v = 0.0;
    for (int k = 0; k < dirs->dims(); ++k) {
      double s = S(i, k);
      v += s > 0.0 ? s * b.hi[k] : s * b.lo[k];
    }
    h[i] = v;
  }
  return SupportPolytope(std::move(dirs), std::move(h));
}

SupportPolytope SupportPolytope::point(DirectionSetPtr dirs,
                                       const Eigen::VectorXd& p) {
  if (p.size() != dirs->dims())
    throw InvalidArgument("point: length != dims");
  Eigen::VectorXd h = dirs->rows() * p;
  return SupportPolytope(std::move(dirs), std::move(h));
}

double support(const SupportPolytope& P, const Eigen::VectorXd& s) {
  if (s.size() != P.dims())
    throw InvalidArgument("support: direction length != dims");
  int idx = P.direction_set()->find(s);
  if (idx >= 0) return s.norm() * P.values()[idx];
  return support(P.halfspaces(), s);
}

double support(const HalfspaceSystem& H, const Eigen::VectorXd& s) {
  if (s.size() != H.dims())
    throw InvalidArgument("support: direction length != dims");
  LpSolution sol = lp_maximize(H.normals, H.offsets, s);
  if (sol.status == LpStatus::kInfeasible)
    throw EmptySetError("support: halfspace system is empty");
  if (sol.status == LpStatus::kUnbounded)
    return std::numeric_limits<double>::infinity();
  return sol.value;
}

SupportPolytope minkowski_sum(const SupportPolytope& A,
                              const SupportPolytope& B) {
  if (!A.shares_directions(B))
    throw InvalidArgument("minkowski_sum: operands use different directions");
  return SupportPolytope(A.direction_set(), A.values() + B.values());
}

SupportPolytope affine_image(const Eigen::MatrixXd& M,
                             const SupportPolytope& P, DirectionSetPtr out) {
  if (M.cols() != P.dims())
    throw InvalidArgument("affine_image: matrix columns != operand dims");
  if (M.rows() != out->dims())
    throw InvalidArgument("affine_image: matrix rows != output dims");
  const int n_f = out->size();
  Eigen::VectorXd h(n_f);
  for (int i = 0; i < n_f; ++i) {
    Eigen::VectorXd w = M.transpose() * out->direction(i);
    double norm = w.norm();
    if (norm < 1e-14) {
      // s is in the left null space of M, so the image is flat along it.
      h[i] = 0.0;
      continue;
    }
    int idx = P.direction_set()->find(w);
    h[i] = idx >= 0 ? norm * P.values()[idx] : support(P.halfspaces(), w);
  }
  return SupportPolytope(std::move(out), std::move(h));
}

SupportPolytope intersect(const SupportPolytope& P, const HalfspaceSystem& H) {
  if (H.dims() != P.dims())
    throw InvalidArgument("intersect: halfspace dims != operand dims");
  HalfspaceSystem combined = P.halfspaces().stacked(H);
  const int n_f = P.count();
  Eigen::VectorXd h(n_f);
  for (int i = 0; i < n_f; ++i) {
    LpSolution sol =
        lp_maximize(combined.normals, combined.offsets, P.direction_set()->direction(i));
    if (sol.status == LpStatus::kInfeasible)
      throw EmptySetError("intersect: result is empty");
    double v = sol.status == LpStatus::kUnbounded
                   ? std::numeric_limits<double>::infinity()
                   : sol.value;
    // The LP value cannot meaningfully exceed the stored one; clipping
    // removes solver noise so intersections never grow a direction.
    h[i] = std::min(v, P.values()[i]);
  }
  return SupportPolytope(P.direction_set(), std::move(h));
}

SupportPolytope project(const SupportPolytope& P,
                        const std::vector<int>& coords, DirectionSetPtr out) {
  if (static_cast<int>(coords.size()) != out->dims())
    throw InvalidArgument("project: coordinate count != output dims");
  for (int c : coords) {
    if (c < 0 || c >= P.dims())
      throw InvalidArgument("project: coordinate out of range");
  }
  const int n_f = out->size();
  Eigen::VectorXd h(n_f);
  for (int i = 0; i < n_f; ++i) {
    Eigen::VectorXd s = out->direction(i);
    Eigen::VectorXd lifted = Eigen::VectorXd::Zero(P.dims());
    for (int k = 0; k < out->dims(); ++k) lifted[coords[k]] = s[k];
    int idx = P.direction_set()->find(lifted);
    h[i] = idx >= 0 ? P.values()[idx] : support(P.halfspaces(), lifted);
  }
  return SupportPolytope(std::move(out), std::move(h));
}

bool contains(const SupportPolytope& outer, const SupportPolytope& inner,
              double tol) {
  if (!outer.shares_directions(inner))
    throw InvalidArgument("contains: operands use different directions");
  return ((inner.values() - outer.values()).array() <= tol).all();
}

double hausdorff_gap(const SupportPolytope& A, const SupportPolytope& B) {
  if (!A.shares_directions(B))
    throw InvalidArgument("hausdorff_gap: operands use different directions");
  if (is_empty(A) || is_empty(B))
    throw EmptySetError("hausdorff_gap: empty operand");
  return (A.values() - B.values()).cwiseAbs().maxCoeff();
}

bool is_empty(const SupportPolytope& P) {
  HalfspaceSystem H = P.halfspaces();
  return lp_feasible(H.normals, H.offsets).status != LpStatus::kOptimal;
}

SupportPolytope scale(const SupportPolytope& P, double c) {
  if (c < 0.0) throw InvalidArgument("scale: negative factor");
  return SupportPolytope(P.direction_set(), P.values() * c);
}

}  // namespace rpitube::geom
