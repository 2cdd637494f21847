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

#ifndef RPITUBE_GP_REGRESSOR_HPP_
#define RPITUBE_GP_REGRESSOR_HPP_

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rpitube/gp/dataset.hpp"
#include "rpitube/gp/kernel.hpp"

namespace rpitube::gp {

/// Exact Gaussian-process regressor for one output component. Fitting
/// factorizes the Gram matrix once (Cholesky, O(N^3)); predictions are
/// O(N) for the mean and O(N^2) for the variance. Hyperparameters are
/// taken as given.
class GpComponent {
 public:
  /// Fits component `component` of the dataset outputs. Escalating diagonal
  /// jitter (relative to sigma_f2) is applied if the factorization fails;
  /// if it still fails the kernel is reported ill conditioned.
  static GpComponent fit(const Dataset& data, const KernelParams& params,
                         int component);

  /// Data-free prior: zero mean, full prior variance everywhere.
  static GpComponent prior(const KernelParams& params, int input_dim);

  /// Posterior mean and raw variance at one query point. The variance is
  /// not yet floored; model-level callers apply the configured floor.
  std::pair<double, double> predict(const Eigen::VectorXd& z, double t) const;

  /// Batched prediction; rows of `z` are query points. One triangular solve
  /// covers all queries, which matters when scoring thousands of anchors.
  void predict_batch(const Eigen::MatrixXd& z, const Eigen::VectorXd& t,
                     Eigen::VectorXd& means, Eigen::VectorXd& vars) const;

  const KernelParams& params() const { return params_; }
  int count() const { return static_cast<int>(train_inputs_.rows()); }
  int input_dim() const { return static_cast<int>(train_inputs_.cols()); }
  const Eigen::VectorXd& weights() const { return alpha_; }
  const Eigen::MatrixXd& chol_lower() const { return L_; }
  double jitter_used() const { return jitter_; }

 private:
  GpComponent() = default;

  Eigen::VectorXd cross_covariance(const Eigen::VectorXd& z, double t) const;

  KernelParams params_;
  Eigen::MatrixXd train_inputs_;  // N x dim
  Eigen::VectorXd train_times_;   // N
  Eigen::MatrixXd L_;             // lower Cholesky factor of K + jitter I
  Eigen::VectorXd alpha_;         // (K + jitter I)^{-1} w
  double jitter_ = 0.0;
  int input_dim_ = 0;
};

/// Independent posteriors of every output component at one query point,
/// with the variance floor applied.
struct PosteriorPoint {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

/// Fits one GpComponent per output column. `params` holds either a single
/// entry (shared) or one entry per output component.
std::vector<GpComponent> fit_model(const Dataset& data,
                                   const std::vector<KernelParams>& params);

PosteriorPoint posterior(const std::vector<GpComponent>& model,
                         const Eigen::VectorXd& z, double t,
                         double sigma_min2 = 1e-10);

}  // namespace rpitube::gp

#endif  // RPITUBE_GP_REGRESSOR_HPP_
