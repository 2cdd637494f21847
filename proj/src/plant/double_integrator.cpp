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

#include "rpitube/plant/double_integrator.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace rpitube::plant {
namespace {

constexpr double kSanityBound = 1e6;

}  // namespace

void DoubleIntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("plant config: dt must be positive");
  if (!(mass > 0.0))
    throw InvalidArgument("plant config: mass must be positive");
  if (beta1 < 0.0 || beta2 < 0.0)
    throw InvalidArgument("plant config: drag coefficients must be >= 0");
  if (noise_std < 0.0 || noise_bound < 0.0)
    throw InvalidArgument("plant config: noise parameters must be >= 0");
}

Eigen::MatrixXd dynamics_a(double dt) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(4, 4);
  A(0, 2) = dt;
  A(1, 3) = dt;
  return A;
}

Eigen::MatrixXd dynamics_b(double dt) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  B(0, 0) = B(1, 1) = 0.5 * dt * dt;
  B(2, 0) = B(3, 1) = dt;
  return B;
}

Eigen::Vector2d drag_accel(const DoubleIntegratorConfig& cfg,
                           const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u) {
  if (x.size() != 4 || u.size() != 2)
    throw InvalidArgument("plant: state must be 4-dim, input 2-dim");
  Eigen::Vector2d q = x.tail<2>();
  return -(cfg.beta1 / cfg.mass) * q.norm() * q -
         (cfg.beta2 / cfg.mass) * u.head<2>();
}

Eigen::Vector2d sample_noise(const DoubleIntegratorConfig& cfg,
                             SplitMix64& rng) {
  Eigen::Vector2d theta;
  for (int i = 0; i < 2; ++i) {
    double draw = cfg.noise_std * rng.normal();
    if (cfg.noise_bound > 0.0) {
      for (int tries = 0; std::abs(draw) > cfg.noise_bound && tries < 64;
           ++tries)
        draw = cfg.noise_std * rng.normal();
      // The resample loop failing 64 times in a row is astronomically
      // unlikely for any sane bound; clamp to keep the guarantee hard.
      draw = std::min(std::max(draw, -cfg.noise_bound), cfg.noise_bound);
    }
    theta[i] = draw;
  }
  return theta;
}

Eigen::VectorXd residual_of(const DoubleIntegratorConfig& cfg,
                            const Eigen::Vector2d& accel_error) {
  return dynamics_b(cfg.dt) * accel_error;
}

Eigen::VectorXd true_step(const DoubleIntegratorConfig& cfg,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                          SplitMix64& rng) {
  Eigen::Vector2d err = drag_accel(cfg, x, u) + sample_noise(cfg, rng);
  return dynamics_a(cfg.dt) * x + dynamics_b(cfg.dt) * u + residual_of(cfg, err);
}

Trajectory simulate(const DoubleIntegratorConfig& cfg,
                    const Eigen::VectorXd& x0,
                    const std::function<Eigen::VectorXd(
                        const Eigen::VectorXd&, int)>& policy,
                    int steps, SplitMix64& rng, double t0) {
  cfg.validate();
  if (x0.size() != 4) throw InvalidArgument("simulate: x0 must be 4-dim");
  if (steps < 1) throw InvalidArgument("simulate: need at least one step");

  const Eigen::MatrixXd A = dynamics_a(cfg.dt);
  const Eigen::MatrixXd B = dynamics_b(cfg.dt);

  Trajectory traj;
  traj.states.resize(steps + 1, 4);
  traj.inputs.resize(steps, 2);
  traj.residuals.resize(steps, 4);
  traj.times.resize(steps);

  Eigen::VectorXd x = x0;
  traj.states.row(0) = x.transpose();
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd u = policy(x, k);
    if (u.size() != 2) throw InvalidArgument("simulate: policy must emit 2-dim inputs");
    Eigen::Vector2d err = drag_accel(cfg, x, u) + sample_noise(cfg, rng);
    Eigen::VectorXd w = residual_of(cfg, err);
    x = A * x + B * u + w;
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kSanityBound)
      throw DivergenceError("simulate: trajectory left the sanity region");
    traj.states.row(k + 1) = x.transpose();
    traj.inputs.row(k) = u.transpose();
    traj.residuals.row(k) = w.transpose();
    traj.times[k] = t0 + k * cfg.dt;
  }
  return traj;
}

gp::Dataset to_dataset(const Trajectory& traj) {
  const int n_steps = static_cast<int>(traj.inputs.rows());
  gp::Dataset d;
  d.inputs.resize(n_steps, 6);
  d.inputs.leftCols(4) = traj.states.topRows(n_steps);
  d.inputs.rightCols(2) = traj.inputs;
  d.times = traj.times;
  d.outputs = traj.residuals;
  d.validate();
  return d;
}

Eigen::MatrixXd lqr_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                         const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                         int max_iter, double tol) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != m || R.cols() != m)
    throw InvalidArgument("lqr: dimension mismatch");

  Eigen::MatrixXd P = Q;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd G = (R + B.transpose() * P * B)
                            .ldlt()
                            .solve(B.transpose() * P * A);
    Eigen::MatrixXd next =
        Q + A.transpose() * P * (A - B * G);
    double delta = (next - P).cwiseAbs().maxCoeff();
    P = next;
    if (delta < tol) {
      Eigen::MatrixXd K = -(R + B.transpose() * P * B)
                               .ldlt()
                               .solve(B.transpose() * P * A);
      return K;
    }
  }
  throw NotConverged("lqr: Riccati recursion did not settle", 0.0);
}

Eigen::MatrixXd placed_gain(double dt, double p1, double p2) {
  if (!(dt > 0.0)) throw InvalidArgument("placed gain: dt must be positive");
  // Per axis, u = k1 p + k2 q closes the (position, velocity) pair to the
  // characteristic polynomial (z - p1)(z - p2).
  double k1 = (p1 + p2 - p1 * p2 - 1.0) / (dt * dt);
  double k2 = (p1 * p2 - 1.0 + 0.5 * k1 * dt * dt) / dt;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 4);
  K(0, 0) = k1;
  K(0, 2) = k2;
  K(1, 1) = k1;
  K(1, 3) = k2;
  return K;
}

}  // namespace rpitube::plant
