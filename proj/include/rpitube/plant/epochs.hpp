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

#ifndef RPITUBE_PLANT_EPOCHS_HPP_
#define RPITUBE_PLANT_EPOCHS_HPP_

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "rpitube/gp/kernel.hpp"
#include "rpitube/lifted/fixed_point.hpp"
#include "rpitube/plant/double_integrator.hpp"
#include "rpitube/wrap/disturbance_wrapper.hpp"

namespace rpitube::plant {

/// Everything one synthesis campaign needs: the constrained plant, the
/// true-vehicle simulation, kernel choices, wrapper risk budget, direction
/// families and the data growth schedule.
struct SynthesisSetup {
  explicit SynthesisSetup(lifted::PlantModel plant) : model(std::move(plant)) {}

  lifted::PlantModel model;
  DoubleIntegratorConfig sim;
  std::vector<gp::KernelParams> kernel;  // one entry, or one per component
  wrap::DisturbanceWrapper::BuildParams wrapper;
  geom::DirectionSetPtr dirs_lifted;
  geom::DirectionSetPtr dirs_xv;
  geom::DirectionSetPtr dirs_x;
  geom::DirectionSetPtr dirs_w;
  std::vector<int> schedule = {40, 160, 400};  // samples collected per epoch
  int rollout_len = 5;       // steps between exploration resets
  double explore_amp = 0.5;  // uniform input dither around the feedback
  double reset_fill = 0.9;   // reset states are drawn from this share of X
  double fp_tol = 1e-6;
  int fp_max_iter = 500;
  std::uint64_t seed = 1;
};

struct EpochRecord {
  int index = 0;       // 1-based epoch number
  int data_count = 0;  // cumulative samples after this epoch's collection
  Eigen::VectorXd envelope;  // per-direction residual bound in force
  Eigen::VectorXd tube_x;    // state cross-section supports of the tube
  int fp_iterations = 0;
  double fp_gap = 0.0;
  double conservatism = 0.0;  // mean tube support over the prior baseline
  double wall_seconds = 0.0;  // not part of the canonical artifact
};

struct EpochRun {
  gp::Dataset data;
  std::shared_ptr<const wrap::NestedDisturbance> stack;
  std::vector<lifted::FixedPointResult> tubes;  // one per epoch, nested
  Eigen::VectorXd baseline_tube_x;  // prior-only worst-case cross-section
  std::vector<EpochRecord> records;

  const lifted::FixedPointResult& final_tube() const { return tubes.back(); }
};

/// Alternates data collection on the true plant with bound refitting and
/// invariant-set synthesis. Epoch q collects schedule[q-1] samples under
/// exploratory feedback, refits on everything seen so far, stacks the new
/// wrapper on top of the previous ones and re-synthesizes warm-started
/// from the previous tube, which keeps the tubes nested by construction.
EpochRun run_epochs(const SynthesisSetup& setup);

struct InvarianceStats {
  int trials = 0;
  int steps_requested = 0;
  std::int64_t steps_executed = 0;
  int contained = 0;  // trajectories that finished inside the tube
  std::int64_t step_violations = 0;
  std::int64_t selector_failures = 0;
  bool trivial = false;  // no trials requested, rate defaults to 1
  double rate = 1.0;
  double step_violation_rate = 0.0;
};

/// Closed-loop containment experiment: from the origin, apply u = K x + v
/// with v chosen by the tube selector, drive the true plant and count how
/// often the state leaves the certified cross-section. Selector failures
/// abort the trajectory and are reported separately, never as containment.
InvarianceStats monte_carlo_invariance(const SynthesisSetup& setup,
                                       const lifted::FixedPointResult& tube,
                                       int trials, int steps,
                                       std::uint64_t seed);

}  // namespace rpitube::plant

#endif  // RPITUBE_PLANT_EPOCHS_HPP_
