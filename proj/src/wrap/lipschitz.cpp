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

#include "rpitube/wrap/lipschitz.hpp"

#include <cmath>
#include <vector>

namespace rpitube::wrap {
namespace {

constexpr long kMaxNodes = 2000000;

}  // namespace

LipschitzBounds estimate_lipschitz(const std::vector<gp::GpComponent>& model,
                                   const Box& region, const Eigen::MatrixXd& K,
                                   const geom::DirectionSetPtr& dirs_w,
                                   int grid_density, double safety,
                                   double sigma_min2, double query_time) {
  region.validate();
  if (model.empty()) throw InvalidArgument("lipschitz: empty model");
  if (grid_density < 2)
    throw InvalidArgument("lipschitz: grid density must be at least 2");
  if (!(safety >= 1.0))
    throw InvalidArgument("lipschitz: safety factor must be >= 1");
  const int n = static_cast<int>(model.size());
  const int m_in = static_cast<int>(K.cols());
  const int m_out = static_cast<int>(K.rows());
  const int d = region.dims();
  if (m_in + m_out != d)
    throw InvalidArgument("lipschitz: feedback shape does not match region");
  if (model[0].input_dim() != m_in + m_out)
    throw InvalidArgument("lipschitz: model input dim does not match region");
  if (dirs_w->dims() != n)
    throw InvalidArgument("lipschitz: direction set must live in output space");

  // Grid layout: zero-width axes collapse to a single point.
  std::vector<int> counts(d);
  Eigen::VectorXd step(d);
  long total = 1;
  for (int k = 0; k < d; ++k) {
    double w = region.hi[k] - region.lo[k];
    counts[k] = w > 0.0 ? grid_density : 1;
    step[k] = counts[k] > 1 ? w / (counts[k] - 1) : 0.0;
    total *= counts[k];
    if (total > kMaxNodes)
      throw InvalidArgument("lipschitz: grid is too large, lower the density");
  }

  const int N = static_cast<int>(total);
  Eigen::MatrixXd queries(N, m_in + m_out);
  {
    std::vector<int> idx(d, 0);
    for (int node = 0; node < N; ++node) {
      Eigen::VectorXd xv(d);
      for (int k = 0; k < d; ++k) xv[k] = region.lo[k] + idx[k] * step[k];
      queries.row(node).head(m_in) = xv.head(m_in).transpose();
      queries.row(node).tail(m_out) =
          (K * xv.head(m_in) + xv.tail(m_out)).transpose();
      for (int k = d - 1; k >= 0; --k) {
        if (++idx[k] < counts[k]) break;
        idx[k] = 0;
      }
    }
  }

  Eigen::MatrixXd means(N, n), vars(N, n);
  Eigen::VectorXd times = Eigen::VectorXd::Constant(N, query_time);
  const int chunk = 8192;
  for (int lo = 0; lo < N; lo += chunk) {
    int len = std::min(chunk, N - lo);
    Eigen::MatrixXd zc = queries.middleRows(lo, len);
    Eigen::VectorXd tc = times.segment(lo, len);
    Eigen::VectorXd mu, var;
    for (int i = 0; i < n; ++i) {
      model[i].predict_batch(zc, tc, mu, var);
      means.block(lo, 0, len, n).col(i) = mu;
      vars.block(lo, 0, len, n).col(i) = var.cwiseMax(sigma_min2);
    }
  }

  // mu_s and sigma_s per node, one column per stored direction.
  const int n_f = dirs_w->size();
  Eigen::MatrixXd mu_s(N, n_f), sigma_s(N, n_f);
  for (int i = 0; i < n_f; ++i) {
    Eigen::VectorXd s = dirs_w->direction(i);
    Eigen::VectorXd s2 = s.array().square();
    mu_s.col(i) = means * s;
    sigma_s.col(i) = (vars * s2).array().sqrt();
  }

  LipschitzBounds out;
  out.mean_slope = Eigen::VectorXd::Zero(n_f);
  out.sigma_slope = Eigen::VectorXd::Zero(n_f);
  std::vector<long> stride(d);
  long acc = 1;
  for (int k = d - 1; k >= 0; --k) {
    stride[k] = acc;
    acc *= counts[k];
  }

  std::vector<int> idx(d, 0);
  for (int node = 0; node < N; ++node) {
    for (int k = 0; k < d; ++k) {
      if (idx[k] + 1 >= counts[k]) continue;
      int nb = node + static_cast<int>(stride[k]);
      double inv = 1.0 / step[k];
      for (int i = 0; i < n_f; ++i) {
        double dmu = std::abs(mu_s(nb, i) - mu_s(node, i)) * inv;
        if (dmu > out.mean_slope[i]) out.mean_slope[i] = dmu;
        double ds = std::abs(sigma_s(nb, i) - sigma_s(node, i)) * inv;
        if (ds > out.sigma_slope[i]) out.sigma_slope[i] = ds;
      }
    }
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
  }

  out.mean_slope *= safety;
  out.sigma_slope *= safety;
  return out;
}

}  // namespace rpitube::wrap
