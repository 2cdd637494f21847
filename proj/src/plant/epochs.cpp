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

#include "rpitube/plant/epochs.hpp"

#include <chrono>
#include <utility>

#include "rpitube/gp/regressor.hpp"
#include "rpitube/lifted/selector.hpp"

namespace rpitube::plant {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Axis-aligned bounds of a polytope read off its leading +/- axis rows.
Box axis_box(const geom::SupportPolytope& P) {
  const int d = P.dims();
  Box b;
  b.lo.resize(d);
  b.hi.resize(d);
  for (int i = 0; i < d; ++i) {
    b.hi[i] = P.values()[geom::DirectionSet::axis_index(i, true)];
    b.lo[i] = -P.values()[geom::DirectionSet::axis_index(i, false)];
  }
  b.validate();
  return b;
}

Box xv_region(const lifted::PlantModel& model) {
  Box bx = axis_box(model.X);
  Box bv = axis_box(model.V);
  Box region;
  region.lo.resize(bx.dims() + bv.dims());
  region.hi.resize(bx.dims() + bv.dims());
  region.lo << bx.lo, bv.lo;
  region.hi << bx.hi, bv.hi;
  return region;
}

double mean_ratio(const Eigen::VectorXd& num, const Eigen::VectorXd& den) {
  double acc = 0.0;
  for (int i = 0; i < num.size(); ++i) acc += num[i] / den[i];
  return acc / static_cast<double>(num.size());
}

}  // namespace

EpochRun run_epochs(const SynthesisSetup& setup) {
  setup.sim.validate();
  const lifted::PlantModel& model = setup.model;
  const int n = model.n();
  const int m = model.m();
  if (n != 4 || m != 2)
    throw InvalidArgument("epochs: the campaign drives the planar double "
                          "integrator (4 states, 2 inputs)");
  if ((model.A - dynamics_a(setup.sim.dt)).cwiseAbs().maxCoeff() > 1e-12 ||
      (model.B - dynamics_b(setup.sim.dt)).cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidArgument(
        "epochs: plant matrices disagree with the hold at this dt");
  if (setup.schedule.empty())
    throw InvalidArgument("epochs: empty collection schedule");
  for (int s : setup.schedule)
    if (s < 1) throw InvalidArgument("epochs: schedule entries must be >= 1");
  if (setup.rollout_len < 1)
    throw InvalidArgument("epochs: rollout length must be >= 1");
  if (!(setup.explore_amp >= 0.0))
    throw InvalidArgument("epochs: exploration amplitude must be >= 0");
  if (!(setup.reset_fill >= 0.0 && setup.reset_fill <= 1.0))
    throw InvalidArgument("epochs: reset fill must lie in [0, 1]");

  const Box region = xv_region(model);
  const Box x_box = axis_box(model.X);

  // The regressor works in (x, v) coordinates, v being the offset on top
  // of the fixed feedback. That is the coordinate system the tube slices
  // live in, and it keeps kernel distances independent of the gain size,
  // so the wrapper queries anchors through a zero gain.
  const Eigen::MatrixXd zero_k = Eigen::MatrixXd::Zero(m, n);

  EpochRun run;
  run.data = gp::Dataset::empty(n + m, n);

  // Worst-case baseline: the tube synthesized from the prior alone. Every
  // epoch's conservatism is measured against this cross-section.
  {
    auto prior_model = gp::fit_model(run.data, setup.kernel);
    auto prior_wrap = wrap::DisturbanceWrapper::build(
        prior_model, region, zero_k, setup.dirs_w, setup.dirs_xv,
        setup.wrapper);
    lifted::SynthesisSpace space =
        lifted::make_space(model, prior_wrap, setup.dirs_lifted, setup.dirs_xv,
                           setup.dirs_x);
    lifted::FixedPointResult base =
        lifted::fixed_point(space, std::nullopt, setup.fp_tol,
                            setup.fp_max_iter);
    run.baseline_tube_x = base.proj_x.values();
  }

  SplitMix64 noise_rng(SplitMix64(setup.seed).derive(0x6e01u));
  SplitMix64 explore_rng(SplitMix64(setup.seed).derive(0xe8a2u));

  std::vector<std::shared_ptr<const wrap::DisturbanceWrapper>> wraps;
  double t_next = 0.0;

  for (std::size_t q = 0; q < setup.schedule.size(); ++q) {
    auto t0 = std::chrono::steady_clock::now();

    // Episodic exploration: short dithered rollouts from reset states
    // scattered over X. Closed-loop runs alone would pile all samples near
    // the origin and teach the regressor nothing about the rest of the
    // operating set.
    auto policy = [&](const Eigen::VectorXd& x, int) {
      Eigen::VectorXd e(m);
      for (int j = 0; j < m; ++j)
        e[j] = explore_rng.uniform(-setup.explore_amp, setup.explore_amp);
      return Eigen::VectorXd(model.K * x + e);
    };
    int collected = 0;
    while (collected < setup.schedule[q]) {
      int len = std::min(setup.rollout_len, setup.schedule[q] - collected);
      Eigen::VectorXd x0(n);
      for (int i = 0; i < n; ++i)
        x0[i] = explore_rng.uniform(setup.reset_fill * x_box.lo[i],
                                    setup.reset_fill * x_box.hi[i]);
      Trajectory traj = simulate(setup.sim, x0, policy, len, noise_rng, t_next);
      t_next = traj.times[traj.times.size() - 1] + setup.sim.dt;
      gp::Dataset d = to_dataset(traj);
      d.inputs.rightCols(m) -= traj.states.topRows(len) * model.K.transpose();
      run.data = run.data.appended(d);
      collected += len;
    }

    auto fitted = gp::fit_model(run.data, setup.kernel);
    wraps.push_back(wrap::DisturbanceWrapper::build(
        fitted, region, zero_k, setup.dirs_w, setup.dirs_xv, setup.wrapper));
    auto stack = std::make_shared<wrap::NestedDisturbance>(wraps);

    lifted::SynthesisSpace space = lifted::make_space(
        model, stack, setup.dirs_lifted, setup.dirs_xv, setup.dirs_x);
    std::optional<geom::SupportPolytope> warm;
    if (!run.tubes.empty()) warm = run.tubes.back().z_star;
    lifted::FixedPointResult fp = lifted::fixed_point(
        space, std::move(warm), setup.fp_tol, setup.fp_max_iter);

    EpochRecord rec;
    rec.index = static_cast<int>(q) + 1;
    rec.data_count = run.data.count();
    rec.envelope = stack->envelope();
    rec.tube_x = fp.proj_x.values();
    rec.fp_iterations = fp.iterations;
    rec.fp_gap = fp.gaps.empty() ? 0.0 : fp.gaps.back();
    rec.conservatism = mean_ratio(rec.tube_x, run.baseline_tube_x);
    rec.wall_seconds = seconds_since(t0);

    run.records.push_back(std::move(rec));
    run.tubes.push_back(std::move(fp));
    run.stack = std::move(stack);
  }
  return run;
}

InvarianceStats monte_carlo_invariance(const SynthesisSetup& setup,
                                       const lifted::FixedPointResult& tube,
                                       int trials, int steps,
                                       std::uint64_t seed) {
  if (trials < 0 || steps < 0)
    throw InvalidArgument("invariance: trials and steps must be >= 0");

  InvarianceStats stats;
  stats.trials = trials;
  stats.steps_requested = steps;
  if (trials == 0 || steps == 0) {
    stats.trivial = true;
    return stats;
  }

  const lifted::PlantModel& model = setup.model;
  lifted::SelectorPolicy policy(tube.z_star, model.V, tube.proj_x, model.n(),
                                model.m());

  for (int trial = 0; trial < trials; ++trial) {
    SplitMix64 rng(SplitMix64(seed).derive(static_cast<std::uint64_t>(trial)));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(model.n());
    bool ok = true;
    for (int k = 0; k < steps; ++k) {
      if (!policy.admits(x, 1e-9)) {
        ++stats.step_violations;
        ok = false;
        break;
      }
      Eigen::VectorXd v;
      try {
        v = policy.select(x).v;
      } catch (const SelectorInfeasible&) {
        ++stats.selector_failures;
        ok = false;
        break;
      }
      Eigen::VectorXd u = model.K * x + v;
      x = true_step(setup.sim, x, u, rng);
      ++stats.steps_executed;
    }
    if (ok && !policy.admits(x, 1e-9)) {
      ++stats.step_violations;
      ok = false;
    }
    if (ok) ++stats.contained;
  }
  // Selector-infeasible trials abort without a containment verdict, so
  // they leave the denominator; the caller still sees them in the stats.
  const int audited = trials - static_cast<int>(stats.selector_failures);
  stats.rate =
      audited > 0 ? static_cast<double>(stats.contained) / audited : 1.0;
  stats.step_violation_rate =
      stats.steps_executed > 0
          ? static_cast<double>(stats.step_violations) /
                static_cast<double>(stats.steps_executed)
          : 0.0;
  return stats;
}

}  // namespace rpitube::plant
