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

#ifndef RPITUBE_LIFTED_FIXED_POINT_HPP_
#define RPITUBE_LIFTED_FIXED_POINT_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "rpitube/geom/support_polytope.hpp"
#include "rpitube/lifted/graph_set.hpp"
#include "rpitube/lifted/lifted_system.hpp"
#include "rpitube/lifted/plant_model.hpp"
#include "rpitube/wrap/disturbance_wrapper.hpp"

namespace rpitube::lifted {

/// Everything that stays fixed during one outside-in iteration run: the
/// plant, the lifted matrices, this epoch's residual bound, the graph rows
/// and the direction families of each space.
struct SynthesisSpace {
  PlantModel plant;
  LiftedSystem sys;
  std::shared_ptr<const wrap::DisturbanceSource> dist;
  geom::HalfspaceSystem graph;
  geom::DirectionSetPtr dirs_lifted;  // over xi = (x, v_prev, w_prev)
  geom::DirectionSetPtr dirs_xv;      // over (x, v)
  geom::DirectionSetPtr dirs_x;       // over x
  geom::SupportPolytope bt_dv;        // cached image of dV through Bt
  std::vector<int> coords_xv;
  std::vector<int> coords_x;
};

SynthesisSpace make_space(PlantModel plant,
                          std::shared_ptr<const wrap::DisturbanceSource> dist,
                          geom::DirectionSetPtr dirs_lifted,
                          geom::DirectionSetPtr dirs_xv,
                          geom::DirectionSetPtr dirs_x);

/// Residual bound of the slice of Z: projects Z onto (x, v) and asks the
/// epoch's disturbance source for the union bound. Throws EmptySetError on
/// an empty slice.
geom::SupportPolytope w_of_z(const SynthesisSpace& S,
                             const geom::SupportPolytope& Z);

/// One application of the set map
///   F(Z) = (At Z + Bt dV + Dt W(Z)) intersected with the graph rows.
/// Monotone in Z at the representation level: growing any stored support
/// of Z never shrinks any stored support of F(Z).
geom::SupportPolytope f_apply(const SynthesisSpace& S,
                              const geom::SupportPolytope& Z);

/// Invariant seed for the outside-in pass. Runs the ascending reach chain
/// Z_{k+1} = F(Z_k) from the origin until its growth stalls below tol (or
/// the iteration budget runs out), then pads the supports and verifies
/// F(seed) inside seed, widening the pad geometrically on failure. The
/// admissible product X x V x envelope caps every candidate, so the product
/// itself is the worst case returned. Throws NoInvariantSeed only if even
/// that cap fails the contraction check.
geom::SupportPolytope seed_z0(const SynthesisSpace& S, double tol = 1e-7,
                              int max_iter = 500);

struct FixedPointResult {
  geom::SupportPolytope z_star;
  geom::SupportPolytope proj_x;
  geom::SupportPolytope proj_xv;
  int iterations = 0;
  std::vector<double> gaps;  // per-iteration sup-norm support decrease
  // Distance of each iterate (seed first) to the converged set. Nesting
  // makes this non-increasing, unlike the raw per-iteration decrease,
  // which can wiggle while the slice bound catches up.
  std::vector<double> hausdorff;
  bool converged = false;
};

/// Iterates F from Z0 (or from the seed when absent) until the support gap
/// falls below tol. The chain must decrease monotonically; a growing
/// direction raises MonotonicityViolation and hitting max_iter raises
/// NotConverged carrying the last gap.
FixedPointResult fixed_point(
    const SynthesisSpace& S,
    std::optional<geom::SupportPolytope> Z0 = std::nullopt,
    double tol = 1e-6, int max_iter = 500);

/// Per-direction margin h_X - h_{proj_x}: how much state-constraint room
/// remains outside the tube cross-section. May describe an empty set; that
/// is reported by the caller, not an error here.
geom::SupportPolytope tighten_constraints(const PlantModel& plant,
                                          const geom::SupportPolytope& proj_x);

}  // namespace rpitube::lifted

#endif  // RPITUBE_LIFTED_FIXED_POINT_HPP_
