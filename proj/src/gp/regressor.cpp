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

#include "rpitube/gp/regressor.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace rpitube::gp {

GpComponent GpComponent::fit(const Dataset& data, const KernelParams& params,
                             int component) {
  params.validate();
  data.validate();
  if (component < 0 || component >= data.output_dim())
    throw InvalidArgument("gp: output component out of range");
  if (data.count() == 0) return prior(params, data.input_dim());

  const int N = data.count();
  Eigen::MatrixXd K(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      double v = kernel_eval(params, data.inputs.row(i).transpose(),
                             data.times[i], data.inputs.row(j).transpose(),
                             data.times[j], i == j);
      K(i, j) = v;
      K(j, i) = v;
    }
  }

  GpComponent g;
  g.params_ = params;
  g.train_inputs_ = data.inputs;
  g.train_times_ = data.times;
  g.input_dim_ = data.input_dim();

  const double rel[] = {0.0, 1e-12, 1e-10, 1e-8, 1e-6};
  for (double r : rel) {
    Eigen::MatrixXd Kj = K;
    double jitter = r * params.sigma_f2;
    if (jitter > 0.0) Kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(Kj);
    if (llt.info() == Eigen::Success) {
      g.L_ = llt.matrixL();
      g.alpha_ = llt.solve(data.outputs.col(component));
      g.jitter_ = jitter;
      return g;
    }
  }
  throw IllConditionedKernel(
      "gp: Gram matrix is not positive definite even with jitter; "
      "check for duplicated samples or a vanishing noise term");
}

GpComponent GpComponent::prior(const KernelParams& params, int input_dim) {
  params.validate();
  if (input_dim < 1) throw InvalidArgument("gp: input_dim must be positive");
  GpComponent g;
  g.params_ = params;
  g.train_inputs_.resize(0, input_dim);
  g.train_times_.resize(0);
  g.L_.resize(0, 0);
  g.alpha_.resize(0);
  g.input_dim_ = input_dim;
  return g;
}

Eigen::VectorXd GpComponent::cross_covariance(const Eigen::VectorXd& z,
                                              double t) const {
  const int N = count();
  Eigen::VectorXd k(N);
  for (int j = 0; j < N; ++j) {
    // Cross covariances never carry the noise term.
    k[j] = kernel_eval(params_, z, t, train_inputs_.row(j).transpose(),
                       train_times_[j], false);
  }
  return k;
}

std::pair<double, double> GpComponent::predict(const Eigen::VectorXd& z,
                                               double t) const {
  if (z.size() != input_dim_)
    throw InvalidArgument("gp: query dimension mismatch");
  double prior_var = params_.sigma_f2 + params_.sigma_n2;
  if (count() == 0) return {0.0, prior_var};
  Eigen::VectorXd k = cross_covariance(z, t);
  Eigen::VectorXd v = L_.triangularView<Eigen::Lower>().solve(k);
  return {k.dot(alpha_), prior_var - v.squaredNorm()};
}

void GpComponent::predict_batch(const Eigen::MatrixXd& z,
                                const Eigen::VectorXd& t,
                                Eigen::VectorXd& means,
                                Eigen::VectorXd& vars) const {
  if (z.cols() != input_dim_)
    throw InvalidArgument("gp: query dimension mismatch");
  if (z.rows() != t.size())
    throw InvalidArgument("gp: query count mismatch");
  const int Q = static_cast<int>(z.rows());
  const int N = count();
  double prior_var = params_.sigma_f2 + params_.sigma_n2;
  means.resize(Q);
  vars.resize(Q);
  if (N == 0) {
    means.setZero();
    vars.setConstant(prior_var);
    return;
  }
  Eigen::MatrixXd Kc(N, Q);
  for (int q = 0; q < Q; ++q)
    Kc.col(q) = cross_covariance(z.row(q).transpose(), t[q]);
  means = Kc.transpose() * alpha_;
  Eigen::MatrixXd V = L_.triangularView<Eigen::Lower>().solve(Kc);
  vars = (prior_var - V.colwise().squaredNorm().array()).matrix();
}

std::vector<GpComponent> fit_model(const Dataset& data,
                                   const std::vector<KernelParams>& params) {
  data.validate();
  const int n = data.output_dim();
  if (params.empty())
    throw InvalidArgument("gp: no kernel parameters given");
  if (params.size() != 1 && static_cast<int>(params.size()) != n)
    throw InvalidArgument("gp: need one kernel (shared) or one per output");
  std::vector<GpComponent> model;
  model.reserve(n);
  for (int i = 0; i < n; ++i) {
    const KernelParams& p = params.size() == 1 ? params[0] : params[i];
    model.push_back(GpComponent::fit(data, p, i));
  }
  return model;
}

PosteriorPoint posterior(const std::vector<GpComponent>& model,
                         const Eigen::VectorXd& z, double t,
                         double sigma_min2) {
  if (model.empty()) throw InvalidArgument("gp: empty model");
  if (!(sigma_min2 >= 0.0))
    throw InvalidArgument("gp: sigma_min2 must be nonnegative");
  const int n = static_cast<int>(model.size());
  PosteriorPoint p;
  p.mean.resize(n);
  p.variance.resize(n);
  for (int i = 0; i < n; ++i) {
    auto [m, v] = model[i].predict(z, t);
    p.mean[i] = m;
    p.variance[i] = std::max(v, sigma_min2);
  }
  return p;
}

}  // namespace rpitube::gp
