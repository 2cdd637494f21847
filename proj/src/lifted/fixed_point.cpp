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

#include "rpitube/lifted/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rpitube::lifted {
namespace {

constexpr double kContainTol = 1e-9;

}  // namespace

SynthesisSpace make_space(PlantModel plant,
                          std::shared_ptr<const wrap::DisturbanceSource> dist,
                          geom::DirectionSetPtr dirs_lifted,
                          geom::DirectionSetPtr dirs_xv,
                          geom::DirectionSetPtr dirs_x) {
  if (!dist) throw InvalidArgument("space: null disturbance source");
  const int n = plant.n();
  const int m = plant.m();
  if (dirs_lifted->dims() != 2 * n + m)
    throw InvalidArgument("space: lifted directions must live in R^{2n+m}");
  if (dirs_xv->dims() != n + m)
    throw InvalidArgument("space: xv directions must live in R^{n+m}");
  if (dirs_x->dims() != n)
    throw InvalidArgument("space: x directions must live in R^n");

  LiftedSystem sys = lift(plant);
  geom::HalfspaceSystem graph = graph_rows(plant, *dist);
  geom::SupportPolytope bt_dv =
      geom::affine_image(sys.Bt, plant.dV, dirs_lifted);

  std::vector<int> coords_xv(n + m), coords_x(n);
  for (int i = 0; i < n + m; ++i) coords_xv[i] = i;
  for (int i = 0; i < n; ++i) coords_x[i] = i;

  return SynthesisSpace{std::move(plant),   sys,
                        std::move(dist),    std::move(graph),
                        std::move(dirs_lifted), std::move(dirs_xv),
                        std::move(dirs_x),  std::move(bt_dv),
                        std::move(coords_xv), std::move(coords_x)};
}

geom::SupportPolytope w_of_z(const SynthesisSpace& S,
                             const geom::SupportPolytope& Z) {
  geom::SupportPolytope slice = geom::project(Z, S.coords_xv, S.dirs_xv);
  if (geom::is_empty(slice))
    throw EmptySetError("w_of_z: the (x, v) slice of Z is empty");
  return geom::SupportPolytope(S.dist->w_directions(),
                               S.dist->union_support(slice));
}

geom::SupportPolytope f_apply(const SynthesisSpace& S,
                              const geom::SupportPolytope& Z) {
  if (Z.dims() != S.sys.dim())
    throw InvalidArgument("f_apply: operand lives in the wrong space");
  geom::SupportPolytope mapped = geom::affine_image(S.sys.At, Z, S.dirs_lifted);
  geom::SupportPolytope wz = w_of_z(S, Z);
  geom::SupportPolytope pushed = geom::affine_image(S.sys.Dt, wz, S.dirs_lifted);
  geom::SupportPolytope sum =
      geom::minkowski_sum(geom::minkowski_sum(mapped, S.bt_dv), pushed);
  return geom::intersect(sum, S.graph);
}

geom::SupportPolytope seed_z0(const SynthesisSpace& S, double tol,
                              int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("seed: tol must be positive");
  if (max_iter < 1) throw InvalidArgument("seed: max_iter must be positive");
  const int n = S.plant.n();
  const int m = S.plant.m();

  // Admissible ceiling: product support of X x V x envelope over the lifted
  // directions. Every F image is clipped at these rows, so the ceiling is
  // itself invariant and caps all candidates below.
  const auto hs_x = S.plant.X.halfspaces();
  const auto hs_v = S.plant.V.halfspaces();
  geom::SupportPolytope env = S.dist->envelope_set();
  const auto hs_w = env.halfspaces();

  const int n_f = S.dirs_lifted->size();
  Eigen::VectorXd cap(n_f);
  for (int i = 0; i < n_f; ++i) {
    Eigen::VectorXd s = S.dirs_lifted->direction(i);
    double v = 0.0;
    Eigen::VectorXd sx = s.head(n), sv = s.segment(n, m), sw = s.tail(n);
    if (sx.norm() > 1e-14) v += geom::support(hs_x, sx);
    if (sv.norm() > 1e-14) v += geom::support(hs_v, sv);
    if (sw.norm() > 1e-14) v += geom::support(hs_w, sw);
    cap[i] = v;
  }

  // Ascending reach chain from the origin. F is monotone, so the running
  // per-direction maximum climbs towards the least invariant supports
  // instead of sticking at the ceiling the way an outside-in seed would.
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n_f);
  for (int k = 0; k < max_iter; ++k) {
    geom::SupportPolytope next =
        f_apply(S, geom::SupportPolytope(S.dirs_lifted, h));
    double gap = (next.values() - h).maxCoeff();
    h = h.cwiseMax(next.values());
    if (gap <= tol) break;
  }

  // Pad and verify. The final fallback is the ceiling itself; rejecting
  // that too means the admissible set is not invariant at all.
  double pad = std::max(10.0 * tol, 1e-9);
  for (int attempt = 0; attempt <= 20; ++attempt) {
    Eigen::VectorXd ch = (h.array() + pad).min(cap.array());
    geom::SupportPolytope cand(S.dirs_lifted, ch);
    geom::SupportPolytope next = f_apply(S, cand);
    if (geom::contains(cand, next, kContainTol)) return cand;
    pad *= 4.0;
  }
  geom::SupportPolytope ceiling(S.dirs_lifted, cap);
  if (geom::contains(ceiling, f_apply(S, ceiling), kContainTol))
    return ceiling;
  throw NoInvariantSeed(
      "seed: the admissible product set does not contract under the set map");
}

FixedPointResult fixed_point(const SynthesisSpace& S,
                             std::optional<geom::SupportPolytope> Z0,
                             double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("fixed_point: tol must be positive");
  if (max_iter < 1)
    throw InvalidArgument("fixed_point: max_iter must be positive");

  geom::SupportPolytope Z =
      Z0.has_value() ? std::move(*Z0) : seed_z0(S, tol, max_iter);
  if (Z.direction_set() != S.dirs_lifted) {
    const Eigen::MatrixXd& za = Z.direction_set()->rows();
    const Eigen::MatrixXd& sa = S.dirs_lifted->rows();
    if (za.rows() != sa.rows() || za.cols() != sa.cols() || za != sa)
      throw InvalidArgument("fixed_point: Z0 uses a foreign direction family");
  }

  FixedPointResult res{Z, geom::project(Z, S.coords_x, S.dirs_x),
                       geom::project(Z, S.coords_xv, S.dirs_xv)};
  std::vector<Eigen::VectorXd> trail;
  trail.push_back(Z.values());

  for (int k = 1; k <= max_iter; ++k) {
    geom::SupportPolytope next = f_apply(S, Z);
    if (!geom::contains(Z, next, kContainTol)) {
      int worst = -1;
      double worst_gap = 0.0;
      for (int i = 0; i < Z.count(); ++i) {
        double g = next.values()[i] - Z.values()[i];
        if (g > worst_gap) {
          worst_gap = g;
          worst = i;
        }
      }
      std::ostringstream msg;
      msg << "fixed_point: chain grew along direction " << worst << " by "
          << worst_gap << " at iteration " << k
          << " (the seed does not contract)";
      throw MonotonicityViolation(msg.str());
    }
    double gap = (Z.values() - next.values()).cwiseAbs().maxCoeff();
    res.gaps.push_back(gap);
    Z = std::move(next);
    trail.push_back(Z.values());
    res.iterations = k;
    if (gap <= tol) {
      res.converged = true;
      break;
    }
  }
  if (!res.converged)
    throw NotConverged("fixed_point: no convergence within max_iter",
                       res.gaps.empty() ? 0.0 : res.gaps.back());

  res.z_star = Z;
  res.proj_x = geom::project(Z, S.coords_x, S.dirs_x);
  res.proj_xv = geom::project(Z, S.coords_xv, S.dirs_xv);
  res.hausdorff.reserve(trail.size());
  for (const Eigen::VectorXd& h : trail)
    res.hausdorff.push_back((h - Z.values()).maxCoeff());
  return res;
}

geom::SupportPolytope tighten_constraints(
    const PlantModel& plant, const geom::SupportPolytope& proj_x) {
  if (!plant.X.shares_directions(proj_x))
    throw InvalidArgument(
        "tighten: tube cross-section must use the state direction family");
  return geom::SupportPolytope(plant.X.direction_set(),
                               plant.X.values() - proj_x.values());
}

}  // namespace rpitube::lifted
