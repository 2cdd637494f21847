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

#ifndef RPITUBE_PLANT_DOUBLE_INTEGRATOR_HPP_
#define RPITUBE_PLANT_DOUBLE_INTEGRATOR_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "rpitube/common.hpp"
#include "rpitube/gp/dataset.hpp"

namespace rpitube::plant {

/// Planar double integrator under zero-order hold. The nominal model is
/// the pure integrator chain; the real vehicle also sees quadratic drag on
/// the velocity, an input-proportional loss, and acceleration noise. That
/// gap is exactly the residual the regression stage learns.
struct DoubleIntegratorConfig {
  double dt = 0.1;
  double mass = 1.0;
  double beta1 = 0.1;        // quadratic drag coefficient
  double beta2 = 0.05;       // input-proportional loss coefficient
  double noise_std = 0.01;   // acceleration noise scale per axis
  double noise_bound = 0.0;  // 0 keeps gaussian tails; > 0 resamples each
                             // axis until |theta_i| <= noise_bound

  void validate() const;
};

/// Nominal transition matrices: state (p1, p2, q1, q2), input (a1, a2).
Eigen::MatrixXd dynamics_a(double dt);
Eigen::MatrixXd dynamics_b(double dt);

/// Unmodeled acceleration at the current state and input: drag acting on
/// the velocity pair plus the input loss. Deterministic part only.
Eigen::Vector2d drag_accel(const DoubleIntegratorConfig& cfg,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& u);

/// One acceleration noise draw, truncated when the config asks for it.
Eigen::Vector2d sample_noise(const DoubleIntegratorConfig& cfg,
                             SplitMix64& rng);

/// State-space residual caused by an acceleration error: the error pushed
/// through the hold, so positions see dt^2/2 of it and velocities dt.
Eigen::VectorXd residual_of(const DoubleIntegratorConfig& cfg,
                            const Eigen::Vector2d& accel_error);

/// One true plant step x+ = A x + B u + w with w drawn from the drag model
/// and the noise stream.
Eigen::VectorXd true_step(const DoubleIntegratorConfig& cfg,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                          SplitMix64& rng);

struct Trajectory {
  Eigen::MatrixXd states;     // (steps + 1) x 4
  Eigen::MatrixXd inputs;     // steps x 2
  Eigen::MatrixXd residuals;  // steps x 4, x_{k+1} - A x_k - B u_k
  Eigen::VectorXd times;      // steps, timestamp of each sample
};

/// Rolls the true plant forward under the given feedback policy. The noise
/// stream is owned by the caller so epochs can share one seed lineage.
/// Throws DivergenceError when the state leaves a generous sanity box.
Trajectory simulate(const DoubleIntegratorConfig& cfg,
                    const Eigen::VectorXd& x0,
                    const std::function<Eigen::VectorXd(
                        const Eigen::VectorXd&, int)>& policy,
                    int steps, SplitMix64& rng, double t0 = 0.0);

/// Regression view of a rollout: inputs are (x_k, u_k) rows, outputs the
/// recorded residuals.
gp::Dataset to_dataset(const Trajectory& traj);

/// Infinite-horizon discrete LQR gain for u = K x, found by iterating the
/// Riccati recursion to a fixed point.
Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         int max_iter = 10000, double tol = 1e-12);

/// Pole placement for the per-axis (position, velocity) pair of the hold
/// model: each axis of u = K x gets the closed-loop poles {p1, p2}. LQR on
/// this plant cannot push the spectral radius much below exp(-dt) because
/// of its hold zeros, so the benchmark gain is placed directly.
Eigen::MatrixXd placed_gain(double dt, double p1, double p2);

}  // namespace rpitube::plant

#endif  // RPITUBE_PLANT_DOUBLE_INTEGRATOR_HPP_
