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

// Release gate for the synthesis stack. Each criterion prints exactly one
// verdict line and the process exits with the number of failures. Every
// reference value is computed inside this file from first principles
// (geometric series, dense linear solves, closed-form distribution tails);
// none of the oracles call the code paths they audit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rpitube/cli/config.hpp"
#include "rpitube/common.hpp"
#include "rpitube/geom/direction_set.hpp"
#include "rpitube/geom/support_polytope.hpp"
#include "rpitube/gp/dataset.hpp"
#include "rpitube/gp/kernel.hpp"
#include "rpitube/gp/regressor.hpp"
#include "rpitube/lifted/fixed_point.hpp"
#include "rpitube/lifted/plant_model.hpp"
#include "rpitube/plant/double_integrator.hpp"
#include "rpitube/plant/epochs.hpp"
#include "rpitube/stats/chi_squared.hpp"
#include "rpitube/wrap/disturbance_wrapper.hpp"

namespace {

using rpitube::Box;
using rpitube::SplitMix64;
namespace cli = rpitube::cli;
namespace geom = rpitube::geom;
namespace gp = rpitube::gp;
namespace lifted = rpitube::lifted;
namespace plant = rpitube::plant;
namespace stats = rpitube::stats;
namespace wrap = rpitube::wrap;

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return std::string(buf);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailed(what);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Box axis_box(const geom::SupportPolytope& P) {
  Box b;
  b.lo.resize(P.dims());
  b.hi.resize(P.dims());
  for (int i = 0; i < P.dims(); ++i) {
    b.hi[i] = P.values()[geom::DirectionSet::axis_index(i, true)];
    b.lo[i] = -P.values()[geom::DirectionSet::axis_index(i, false)];
  }
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

// Synthesis space over the data-free wrapper, mirroring how a campaign
// builds its worst-case baseline: prior model, zero query gain, the same
// direction families the campaign itself would use.
lifted::SynthesisSpace prior_space(const plant::SynthesisSetup& setup) {
  const auto& model = setup.model;
  auto prior = gp::fit_model(
      gp::Dataset::empty(model.n() + model.m(), model.n()), setup.kernel);
  auto wrapper = wrap::DisturbanceWrapper::build(
      prior, xv_region(model), Eigen::MatrixXd::Zero(model.m(), model.n()),
      setup.dirs_w, setup.dirs_xv, setup.wrapper);
  return lifted::make_space(model, wrapper, setup.dirs_lifted, setup.dirs_xv,
                            setup.dirs_x);
}

// Every converged run performed by the gate lands here so the residual
// criterion can re-apply the map once to each certificate.
struct RunProbe {
  lifted::SynthesisSpace space;
  geom::SupportPolytope z_star;
  double tol;
};

std::vector<RunProbe> g_probes;

// The default-scenario campaign feeds four criteria; it runs once, on
// first use, and its wall time is recorded for the runtime budget check.
struct Campaign {
  plant::SynthesisSetup setup;
  plant::EpochRun run;
  double seconds = 0.0;
};

std::optional<Campaign> g_campaign;

const Campaign& campaign() {
  if (!g_campaign) {
    cli::RunConfig cfg;
    auto setup = cli::build_setup(cfg);
    auto t0 = Clock::now();
    auto run = plant::run_epochs(setup);
    double secs = seconds_since(t0);
    g_campaign = Campaign{std::move(setup), std::move(run), secs};
    auto space = lifted::make_space(
        g_campaign->setup.model, g_campaign->run.stack,
        g_campaign->setup.dirs_lifted, g_campaign->setup.dirs_xv,
        g_campaign->setup.dirs_x);
    g_probes.push_back({std::move(space), g_campaign->run.final_tube().z_star,
                        g_campaign->setup.fp_tol});
  }
  return *g_campaign;
}

// ---------------------------------------------------------------------------
// 1. Fixed-disturbance tube against the geometric-series limit.

geom::SupportPolytope solve_fixed(const Eigen::MatrixXd& A, const Box& w_box,
                                  const Eigen::VectorXd& x_half,
                                  std::uint64_t dir_seed, double tol) {
  const int n = static_cast<int>(A.rows());
  const int m = 1;
  auto dirs_w = geom::DirectionSet::make(n, n == 1 ? 2 : 8, dir_seed);
  auto dirs_x = geom::DirectionSet::make(n, n == 1 ? 2 : 14, dir_seed + 1);
  auto dirs_xv = geom::DirectionSet::make(n + m, n == 1 ? 6 : 12, dir_seed + 2);
  auto dirs_lifted =
      geom::DirectionSet::make(2 * n + m, n == 1 ? 18 : 30, dir_seed + 3);
  auto dirs_u = geom::DirectionSet::make(m, 2, dir_seed + 4);

  auto X = geom::SupportPolytope::box(dirs_x, x_half);
  auto U =
      geom::SupportPolytope::box(dirs_u, Eigen::VectorXd::Constant(m, 10.0));
  auto V = geom::SupportPolytope::box(dirs_u, Eigen::VectorXd::Zero(m));
  auto plant_model = lifted::make_plant(
      A, Eigen::MatrixXd::Zero(n, m), Eigen::MatrixXd::Zero(m, n), X, U, V, V);
  auto dist = std::make_shared<wrap::ConstantDisturbance>(
      geom::SupportPolytope::box(dirs_w, w_box));

  auto space =
      lifted::make_space(plant_model, dist, dirs_lifted, dirs_xv, dirs_x);
  auto fp = lifted::fixed_point(space, std::nullopt, tol, 4000);
  require(fp.converged, "fixed-disturbance run did not converge");
  g_probes.push_back({std::move(space), fp.z_star, tol});
  return fp.proj_x;
}

std::string criterion_series_oracle() {
  auto t0 = Clock::now();

  // Scalar contraction: x+ = 0.5 x + w with w in [-1, 1]. The limit of the
  // Minkowski series is [-2, 2] on the nose.
  Eigen::MatrixXd A1(1, 1);
  A1 << 0.5;
  auto proj1 = solve_fixed(A1, Box::centered(Eigen::VectorXd::Ones(1)),
                           Eigen::VectorXd::Constant(1, 5.0), 0x710, 1e-9);
  double err1 = 0.0;
  for (int i = 0; i < proj1.count(); ++i)
    err1 = std::max(err1, std::abs(proj1.values()[i] - 2.0));
  require(err1 <= 1e-6, strf("scalar tube off the series limit by %.3e", err1));

  // Diagonal pair with distinct decay rates and a unit-box disturbance.
  // The series limit is a box, so along any stored direction s its support
  // is sum_k |0.5^k s_1| + |0.8^k s_2|, accumulated here term by term.
  Eigen::MatrixXd A2 = Eigen::MatrixXd::Zero(2, 2);
  A2(0, 0) = 0.5;
  A2(1, 1) = 0.8;
  Eigen::VectorXd x2_half(2);
  x2_half << 3.0, 6.0;
  auto proj2 = solve_fixed(A2, Box::centered(Eigen::VectorXd::Ones(2)),
                           x2_half, 0x720, 1e-9);
  double err2 = 0.0;
  const auto& dirs = proj2.direction_set();
  for (int i = 0; i < proj2.count(); ++i) {
    Eigen::Vector2d s = dirs->direction(i);
    double series = 0.0;
    Eigen::Vector2d c = s;
    for (int k = 0; k < 400; ++k) {
      series += std::abs(c[0]) + std::abs(c[1]);
      c = A2.transpose() * c;
    }
    err2 = std::max(err2, std::abs(proj2.values()[i] - series));
  }
  require(err2 <= 1e-3,
          strf("diagonal tube off the series oracle by %.3e", err2));

  double secs = seconds_since(t0);
  require(secs < 5.0, strf("runtime %.1f s exceeds the 5 s budget", secs));
  return strf("scalar err %.1e, diagonal err %.1e", err1, err2);
}

// ---------------------------------------------------------------------------
// 2. The set map preserves nesting.

std::string criterion_monotone_map() {
  auto t0 = Clock::now();
  cli::RunConfig cfg;
  auto setup = cli::build_setup(cfg);
  auto space = prior_space(setup);
  auto base = lifted::seed_z0(space);

  SplitMix64 rng(0x2c);
  const int pairs = 100;
  for (int k = 0; k < pairs; ++k) {
    Eigen::VectorXd h2 = base.values();
    Eigen::VectorXd h1(h2.size());
    for (int i = 0; i < h2.size(); ++i) {
      h2[i] *= rng.uniform(0.55, 1.0);
      h1[i] = h2[i] * rng.uniform(0.6, 1.0);
    }
    geom::SupportPolytope Z2(base.direction_set(), h2);
    geom::SupportPolytope Z1(base.direction_set(), h1);
    auto F2 = lifted::f_apply(space, Z2);
    auto F1 = lifted::f_apply(space, Z1);
    require(geom::contains(F2, F1, 1e-9),
            strf("nesting broke on randomized pair %d", k));
  }
  double secs = seconds_since(t0);
  require(secs < 60.0, strf("runtime %.1f s exceeds the 60 s budget", secs));
  return strf("%d/%d nested pairs preserved", pairs, pairs);
}

// ---------------------------------------------------------------------------
// 3. Outside-in chains decrease per direction, and the distance-to-limit
//    column published in the artifacts is non-increasing.

std::string criterion_decreasing_chains() {
  int longest = 0;
  for (int cfg_idx = 0; cfg_idx < 10; ++cfg_idx) {
    cli::RunConfig cfg;
    cfg.dirs_lifted.seed += static_cast<std::uint64_t>(cfg_idx);
    cfg.dirs_xv.seed += static_cast<std::uint64_t>(7 * cfg_idx);
    cfg.dirs_x.seed += static_cast<std::uint64_t>(3 * cfg_idx);
    cfg.dirs_w.seed += static_cast<std::uint64_t>(11 * cfg_idx);
    // Scales stay at or below the default region so the anchor budget of
    // the wrapper grid is never the binding constraint here.
    cfg.x_half *= 0.85 + 0.015 * cfg_idx;
    cfg.v_half *= 0.8 + 0.02 * cfg_idx;
    cfg.kernel_velocity.sigma_f2 *= 0.6 + 0.1 * cfg_idx;
    auto setup = cli::build_setup(cfg);
    auto space = prior_space(setup);

    // Replay the chain by hand: every iterate must stay inside the
    // previous one in every stored direction.
    std::vector<Eigen::VectorXd> trail;
    auto Z = lifted::seed_z0(space, 1e-7, 500);
    trail.push_back(Z.values());
    bool settled = false;
    for (int it = 0; it < cfg.fp_max_iter; ++it) {
      auto next = lifted::f_apply(space, Z);
      require(((Z.values() - next.values()).array() >= -1e-9).all(),
              strf("config %d grew along a direction at iterate %d", cfg_idx,
                   it + 1));
      double gap = (Z.values() - next.values()).cwiseAbs().maxCoeff();
      Z = std::move(next);
      trail.push_back(Z.values());
      if (gap <= cfg.fp_tol) {
        settled = true;
        break;
      }
    }
    require(settled, strf("config %d did not settle", cfg_idx));
    longest = std::max(longest, static_cast<int>(trail.size()) - 1);

    // Distance of each iterate to the final set, the column the artifacts
    // publish, must never increase along the chain.
    const Eigen::VectorXd& last = trail.back();
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& h : trail) {
      double d = (h - last).maxCoeff();
      require(d <= prev + 1e-12,
              strf("config %d distance-to-limit increased", cfg_idx));
      prev = d;
    }

    // The library run over the same space must agree and must publish a
    // non-increasing column ending at zero.
    auto fp = lifted::fixed_point(space, std::nullopt, cfg.fp_tol,
                                  cfg.fp_max_iter);
    require(fp.converged, strf("config %d library run did not converge",
                               cfg_idx));
    prev = std::numeric_limits<double>::infinity();
    for (double d : fp.hausdorff) {
      require(d <= prev + 1e-12,
              strf("config %d published column increased", cfg_idx));
      prev = d;
    }
    require(!fp.hausdorff.empty() && fp.hausdorff.back() <= 1e-12,
            strf("config %d published column does not end at zero", cfg_idx));
    g_probes.push_back({std::move(space), fp.z_star, cfg.fp_tol});
  }
  return strf("10 chains monotone, longest %d iterations", longest);
}

// ---------------------------------------------------------------------------
// 4. Converged certificates absorb one more application of the map.

std::string criterion_fixed_point_residual() {
  campaign();  // make sure the campaign certificate is in the probe list
  require(!g_probes.empty(), "no runs were recorded");
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < g_probes.size(); ++i) {
    const auto& probe = g_probes[i];
    auto FZ = lifted::f_apply(probe.space, probe.z_star);
    require(geom::contains(probe.z_star, FZ, 2.0 * probe.tol),
            strf("run %zu: one more map application escapes 2*tol", i));
    worst = std::max(worst,
                     (FZ.values() - probe.z_star.values()).maxCoeff());
  }
  return strf("%zu runs, worst residual %.1e", g_probes.size(), worst);
}

// ---------------------------------------------------------------------------
// 5. Envelopes and tube cross-sections nest across learning epochs.

std::string criterion_epoch_nesting() {
  const Campaign& c = campaign();
  const auto& recs = c.run.records;
  require(recs.size() == 3, "expected a three-epoch campaign");
  require(c.run.data.count() >= 500,
          strf("campaign collected only %d samples", c.run.data.count()));
  require(c.setup.dirs_lifted->size() <= 200, "lifted family larger than 200");
  for (size_t q = 1; q < recs.size(); ++q) {
    require(((recs[q - 1].envelope - recs[q].envelope).array() >= -1e-9).all(),
            strf("envelope grew entering epoch %zu", q + 1));
    require(((recs[q - 1].tube_x - recs[q].tube_x).array() >= -1e-9).all(),
            strf("tube cross-section grew entering epoch %zu", q + 1));
  }
  require(c.seconds < 120.0,
          strf("campaign took %.1f s, budget is 120 s", c.seconds));
  return strf("%d samples, campaign %.1f s", c.run.data.count(), c.seconds);
}

// ---------------------------------------------------------------------------
// 6. Closed-loop containment: exact under truncated noise, inside the risk
//    budget under gaussian noise.

std::string criterion_closed_loop() {
  const Campaign& c = campaign();
  const int trials = 25;
  const int steps = 400;

  auto truncated = plant::monte_carlo_invariance(c.setup, c.run.final_tube(),
                                                 trials, steps, 0x6001);
  require(truncated.selector_failures == 0,
          strf("%lld selector failures under truncated noise",
               static_cast<long long>(truncated.selector_failures)));
  require(truncated.steps_executed == static_cast<std::int64_t>(trials) * steps,
          "truncated run ended early");
  require(truncated.rate == 1.0,
          strf("truncated containment rate %.4f != 1", truncated.rate));

  // Same scenario with the gaussian tails kept. The wrapper certifies the
  // residual bound at risk alpha per epoch, so the observed violation rate
  // has to stay within three binomial standard errors of that budget.
  cli::RunConfig cfg;
  cfg.sim.noise_bound = 0.0;
  auto setup = cli::build_setup(cfg);
  auto run = plant::run_epochs(setup);
  auto gaussian = plant::monte_carlo_invariance(setup, run.final_tube(),
                                                trials, steps, 0x6002);
  double alpha_u = run.stack->epochs().back()->alpha_uniform();
  double traj_bound =
      alpha_u + 3.0 * std::sqrt(alpha_u * (1.0 - alpha_u) / trials);
  double traj_violation = 1.0 - gaussian.rate;
  require(traj_violation <= traj_bound,
          strf("gaussian violation %.4f above budget %.4f", traj_violation,
               traj_bound));
  double n_steps = static_cast<double>(
      std::max<std::int64_t>(gaussian.steps_executed, 1));
  double step_bound =
      alpha_u + 3.0 * std::sqrt(alpha_u * (1.0 - alpha_u) / n_steps);
  require(gaussian.step_violation_rate <= step_bound,
          strf("gaussian per-step violation %.5f above budget %.5f",
               gaussian.step_violation_rate, step_bound));
  return strf("truncated rate 1.000 over %lld steps; gaussian violation "
              "%.3f <= %.3f",
              static_cast<long long>(truncated.steps_executed),
              traj_violation, traj_bound);
}

// ---------------------------------------------------------------------------
// 7. Regressor against a dense-solve oracle.

double se_kernel(const gp::KernelParams& p, const Eigen::VectorXd& a,
                 const Eigen::VectorXd& b) {
  return p.sigma_f2 * std::exp(-(a - b).squaredNorm() / (2.0 * p.ell * p.ell));
}

gp::Dataset function_samples(int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  gp::Dataset d = gp::Dataset::empty(2, 1);
  d.inputs.resize(count, 2);
  d.outputs.resize(count, 1);
  d.times = Eigen::VectorXd::Zero(count);
  for (int i = 0; i < count; ++i) {
    d.inputs(i, 0) = rng.uniform(-1.0, 1.0);
    d.inputs(i, 1) = rng.uniform(-1.0, 1.0);
    d.outputs(i, 0) =
        std::sin(2.0 * d.inputs(i, 0)) * std::cos(d.inputs(i, 1));
  }
  return d;
}

std::string criterion_gp_oracle() {
  gp::KernelParams kp;
  kp.sigma_f2 = 0.5;
  kp.ell = 0.8;
  kp.sigma_n2 = 1e-4;

  auto data = function_samples(30, 0x77);
  auto model = gp::fit_model(data, {kp});
  require(model[0].jitter_used() == 0.0, "fit needed jitter, oracle invalid");

  // Dense route: assemble the Gram matrix and solve it outright with a
  // pivoted LU, no Cholesky, no triangular reuse.
  const int N = data.count();
  Eigen::MatrixXd K(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      K(i, j) = se_kernel(kp, data.inputs.row(i), data.inputs.row(j)) +
                (i == j ? kp.sigma_n2 : 0.0);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  Eigen::VectorXd w = lu.solve(data.outputs.col(0));

  SplitMix64 rng(0x78);
  double mean_err = 0.0;
  double var_err = 0.0;
  for (int q = 0; q < 20; ++q) {
    Eigen::VectorXd z(2);
    z << rng.uniform(-1.1, 1.1), rng.uniform(-1.1, 1.1);
    Eigen::VectorXd ks(N);
    for (int i = 0; i < N; ++i) ks[i] = se_kernel(kp, data.inputs.row(i), z);
    double mean_o = ks.dot(w);
    double var_o = kp.sigma_f2 + kp.sigma_n2 - ks.dot(lu.solve(ks));
    auto [mean, var] = model[0].predict(z, 0.0);
    mean_err = std::max(mean_err, std::abs(mean - mean_o));
    var_err = std::max(var_err, std::abs(var - var_o));
  }
  require(mean_err <= 1e-8, strf("posterior mean off by %.2e", mean_err));
  require(var_err <= 1e-8, strf("posterior variance off by %.2e", var_err));

  // Near-zero observation noise has to reproduce the samples themselves.
  gp::KernelParams interp = kp;
  interp.ell = 0.6;
  interp.sigma_n2 = 1e-10;
  gp::Dataset small = gp::Dataset::empty(2, 1);
  small.inputs.resize(8, 2);
  small.inputs << -0.8, -0.8, -0.8, 0.0, -0.8, 0.8, 0.0, -0.8, 0.0, 0.8, 0.8,
      -0.8, 0.8, 0.0, 0.8, 0.8;
  small.outputs.resize(8, 1);
  for (int i = 0; i < 8; ++i)
    small.outputs(i, 0) =
        std::sin(2.0 * small.inputs(i, 0)) * std::cos(small.inputs(i, 1));
  small.times = Eigen::VectorXd::Zero(8);
  auto interp_model = gp::fit_model(small, {interp});
  double interp_err = 0.0;
  for (int i = 0; i < 8; ++i) {
    auto [mean, var] = interp_model[0].predict(small.inputs.row(i), 0.0);
    (void)var;
    interp_err = std::max(interp_err, std::abs(mean - small.outputs(i, 0)));
  }
  require(interp_err <= 1e-4, strf("interpolation off by %.2e", interp_err));

  // More data can only sharpen the posterior.
  auto base = function_samples(15, 0x79);
  auto extended = base.appended(function_samples(10, 0x7a));
  auto m_base = gp::fit_model(base, {kp});
  auto m_ext = gp::fit_model(extended, {kp});
  double worst_gain = 0.0;
  for (int q = 0; q < 20; ++q) {
    Eigen::VectorXd z(2);
    z << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
    auto [mb, vb] = m_base[0].predict(z, 0.0);
    auto [me, ve] = m_ext[0].predict(z, 0.0);
    (void)mb;
    (void)me;
    worst_gain = std::max(worst_gain, ve - vb);
  }
  require(worst_gain <= 1e-8,
          strf("variance grew by %.2e after adding data", worst_gain));
  return strf("mean err %.1e, var err %.1e, interp err %.1e", mean_err,
              var_err, interp_err);
}

// ---------------------------------------------------------------------------
// 8. Chi-squared quantiles against closed forms and a CDF-bisection oracle.

// Reference CDF built from textbook identities only: the half-integer
// series for even degrees, the error function for one degree.
double oracle_chi2_cdf(int n, double x) {
  if (x <= 0.0) return 0.0;
  if (n == 1) return std::erf(std::sqrt(0.5 * x));
  double half = 0.5 * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < n / 2; ++k) {
    term *= half / static_cast<double>(k);
    sum += term;
  }
  return 1.0 - std::exp(-half) * sum;
}

double oracle_chi2_quantile(int n, double p) {
  double lo = 0.0;
  double hi = 1.0;
  while (oracle_chi2_cdf(n, hi) < p) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (oracle_chi2_cdf(n, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::string criterion_chi_squared() {
  double closed_err = 0.0;
  for (double alpha : {0.1, 0.05, 0.01}) {
    double q = stats::chi_squared_quantile(2, 1.0 - alpha);
    closed_err = std::max(closed_err, std::abs(q + 2.0 * std::log(alpha)));
  }
  require(closed_err <= 1e-8,
          strf("two-degree closed form off by %.2e", closed_err));

  double bisect_err = 0.0;
  for (int n : {1, 4, 10}) {
    for (double p : {0.5, 0.9, 0.95, 0.99}) {
      double q = stats::chi_squared_quantile(n, p);
      bisect_err = std::max(bisect_err,
                            std::abs(q - oracle_chi2_quantile(n, p)));
    }
  }
  require(bisect_err <= 1e-6,
          strf("bisection oracle disagrees by %.2e", bisect_err));
  return strf("closed-form err %.1e, bisection err %.1e", closed_err,
              bisect_err);
}

// ---------------------------------------------------------------------------
// 9. Pointwise credible scores stay under the published envelope.

std::string criterion_envelope_dominance() {
  const Campaign& c = campaign();
  auto wf = c.run.stack->epochs().back();
  auto model = gp::fit_model(c.run.data, c.setup.kernel);
  const double scale = wf->level_scale();
  const Box region = xv_region(c.setup.model);

  // 50x50 lattice: the velocity pair, which drives the drag residual, gets
  // the dense grid; positions and offsets sweep their ranges through
  // incommensurate strides so the audit touches the whole region.
  const int G = 50;
  auto lerp = [&](int axis, double t) {
    return region.lo[axis] + t * (region.hi[axis] - region.lo[axis]);
  };
  auto frac = [](double v) { return v - std::floor(v); };
  Eigen::MatrixXd zs(G * G, 6);
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      double u = (i + 0.5) / G;
      double w = (j + 0.5) / G;
      int row = i * G + j;
      zs(row, 0) = lerp(0, frac(3.0 * u + w));
      zs(row, 1) = lerp(1, frac(u + 7.0 * w));
      zs(row, 2) = lerp(2, u);
      zs(row, 3) = lerp(3, w);
      zs(row, 4) = lerp(4, frac(5.0 * u + 2.0 * w));
      zs(row, 5) = lerp(5, frac(2.0 * u + 5.0 * w));
    }
  }

  const int n_out = c.setup.model.n();
  Eigen::MatrixXd mu(G * G, n_out);
  Eigen::MatrixXd var(G * G, n_out);
  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(G * G);
  for (int comp = 0; comp < n_out; ++comp) {
    Eigen::VectorXd m, v;
    model[comp].predict_batch(zs, t0, m, v);
    mu.col(comp) = m;
    var.col(comp) = v.cwiseMax(c.setup.wrapper.sigma_min2);
  }

  const auto& dirs = wf->w_directions();
  const Eigen::VectorXd& env = wf->envelope();
  double worst = -std::numeric_limits<double>::infinity();
  for (int d = 0; d < dirs->size(); ++d) {
    Eigen::VectorXd s = dirs->direction(d);
    Eigen::VectorXd scores =
        mu * s + scale * (var * s.cwiseAbs2()).cwiseSqrt();
    worst = std::max(worst, (scores.array() - env[d]).maxCoeff());
    require((scores.array() <= env[d] + 1e-9).all(),
            strf("credible score above the envelope along direction %d", d));
  }
  return strf("%d points x %d directions, worst margin %.1e", G * G,
              dirs->size(), worst);
}

// ---------------------------------------------------------------------------
// 10. Learning pays: the conservatism ratio drops by at least 30%.

std::string criterion_conservatism_trend() {
  const auto& recs = campaign().run.records;
  require(recs.size() == 3, "expected a three-epoch campaign");
  double first = recs.front().conservatism;
  double last = recs.back().conservatism;
  require(recs[1].conservatism < first && last < recs[1].conservatism,
          "conservatism did not decrease epoch over epoch");
  double drop = (first - last) / first;
  require(drop >= 0.30, strf("conservatism dropped only %.1f%%", 100 * drop));
  return strf("ratio %.3f -> %.3f, drop %.1f%%", first, last, 100 * drop);
}

struct Criterion {
  int id;
  const char* name;
  std::function<std::string()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "fixed-disturbance tube matches the geometric-series oracle",
       criterion_series_oracle},
      {2, "set map preserves nesting on randomized pairs",
       criterion_monotone_map},
      {3, "iterate chains shrink monotonically in every direction",
       criterion_decreasing_chains},
      {4, "converged certificates absorb one more map application",
       criterion_fixed_point_residual},
      {5, "envelopes and tube cross-sections nest across epochs",
       criterion_epoch_nesting},
      {6, "closed-loop containment holds at the certified risk",
       criterion_closed_loop},
      {7, "regressor agrees with a dense-solve oracle",
       criterion_gp_oracle},
      {8, "chi-squared quantiles match closed forms and a CDF bisection",
       criterion_chi_squared},
      {9, "pointwise credible scores stay under the published envelope",
       criterion_envelope_dominance},
      {10, "conservatism drops at least 30% over the campaign",
       criterion_conservatism_trend},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = Clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      detail = c.body();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failures;
    }
    std::printf("criterion %2d  %s  %s (%s)  [%.1f s]\n", c.id,
                verdict.c_str(), c.name, detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%d criteria passed\n",
              static_cast<int>(criteria.size()) - failures,
              static_cast<int>(criteria.size()));
  return failures;
}
