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

#include "rpitube/wrap/disturbance_wrapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rpitube/stats/chi_squared.hpp"

namespace rpitube::wrap {

AnchorGrid AnchorGrid::build(const Box& region, double eps_target,
                             int max_anchors) {
  region.validate();
  if (!(eps_target > 0.0))
    throw InvalidArgument("anchor grid: eps must be positive");
  if (max_anchors < 1)
    throw InvalidArgument("anchor grid: max_anchors must be positive");

  const int d = region.dims();
  double spacing_cap = 2.0 * eps_target / std::sqrt(static_cast<double>(d));

  AnchorGrid g;
  g.region = region;
  g.counts.resize(d);
  g.step.resize(d);
  long total = 1;
  double diag2 = 0.0;
  for (int k = 0; k < d; ++k) {
    double w = region.hi[k] - region.lo[k];
    if (w > 0.0) {
      g.counts[k] = static_cast<int>(std::ceil(w / spacing_cap)) + 1;
      g.step[k] = w / (g.counts[k] - 1);
    } else {
      g.counts[k] = 1;
      g.step[k] = 0.0;
    }
    total *= g.counts[k];
    diag2 += g.step[k] * g.step[k];
    if (total > max_anchors)
      throw GridTooFine(
          "anchor grid: covering the region at this eps needs more than the "
          "allowed number of anchors; raise eps or the anchor budget");
  }
  g.total = static_cast<int>(total);
  g.eps = 0.5 * std::sqrt(diag2);
  return g;
}

Eigen::VectorXd AnchorGrid::point(int flat) const {
  if (flat < 0 || flat >= total)
    throw InvalidArgument("anchor grid: index out of range");
  const int d = dims();
  Eigen::VectorXd p(d);
  for (int k = d - 1; k >= 0; --k) {
    int i = flat % counts[k];
    flat /= counts[k];
    p[k] = region.lo[k] + i * step[k];
  }
  return p;
}

int AnchorGrid::nearest(const Eigen::VectorXd& xv) const {
  if (xv.size() != dims())
    throw InvalidArgument("anchor grid: query dimension mismatch");
  int flat = 0;
  for (int k = 0; k < dims(); ++k) {
    int i = 0;
    if (counts[k] > 1) {
      i = static_cast<int>(std::lround((xv[k] - region.lo[k]) / step[k]));
      i = std::clamp(i, 0, counts[k] - 1);
    }
    flat = flat * counts[k] + i;
  }
  return flat;
}

std::shared_ptr<DisturbanceWrapper> DisturbanceWrapper::build(
    const std::vector<gp::GpComponent>& model, const Box& region,
    const Eigen::MatrixXd& K, geom::DirectionSetPtr dirs_w,
    geom::DirectionSetPtr dirs_xv, const BuildParams& params) {
  LipschitzBounds lips = estimate_lipschitz(
      model, region, K, dirs_w, params.lipschitz_grid_density,
      params.lipschitz_safety, params.sigma_min2, params.query_time);
  return build(model, region, K, std::move(dirs_w), std::move(dirs_xv), lips,
               params);
}

std::shared_ptr<DisturbanceWrapper> DisturbanceWrapper::build(
    const std::vector<gp::GpComponent>& model, const Box& region,
    const Eigen::MatrixXd& K, geom::DirectionSetPtr dirs_w,
    geom::DirectionSetPtr dirs_xv, const LipschitzBounds& lips,
    const BuildParams& params) {
  if (model.empty()) throw InvalidArgument("wrapper: empty model");
  const int n = static_cast<int>(model.size());
  const int m = static_cast<int>(K.rows());
  if (static_cast<int>(K.cols()) != n)
    throw InvalidArgument("wrapper: feedback must map the state space");
  if (region.dims() != n + m)
    throw InvalidArgument("wrapper: region must live in (x, v) space");
  if (dirs_w->dims() != n)
    throw InvalidArgument("wrapper: residual directions dimension mismatch");
  if (dirs_xv->dims() != n + m)
    throw InvalidArgument("wrapper: slice directions dimension mismatch");
  if (!(params.alpha_epoch > 0.0 && params.alpha_epoch < 1.0))
    throw InvalidArgument("wrapper: alpha_epoch must lie in (0, 1)");
  if (lips.sigma_slope.size() != dirs_w->size() ||
      lips.mean_slope.size() != dirs_w->size())
    throw InvalidArgument("wrapper: slope bounds do not match directions");

  auto w = std::shared_ptr<DisturbanceWrapper>(new DisturbanceWrapper());
  w->grid_ = AnchorGrid::build(region, params.eps, params.max_anchors);
  w->lips_ = lips;
  w->dirs_w_ = std::move(dirs_w);
  w->dirs_xv_ = std::move(dirs_xv);
  w->alpha_epoch_ = params.alpha_epoch;
  w->alpha_anchor_ = params.alpha_epoch / w->grid_.total;
  w->c_ = std::sqrt(
      stats::chi_squared_quantile(n, 1.0 - w->alpha_anchor_));

  const int A = w->grid_.total;
  const int d = n + m;
  Eigen::MatrixXd anchors(A, d);
  Eigen::MatrixXd queries(A, n + m);
  for (int a = 0; a < A; ++a) {
    Eigen::VectorXd xv = w->grid_.point(a);
    anchors.row(a) = xv.transpose();
    queries.row(a).head(n) = xv.head(n).transpose();
    queries.row(a).tail(m) = (K * xv.head(n) + xv.tail(m)).transpose();
  }

  Eigen::MatrixXd means(A, n), vars(A, n);
  Eigen::VectorXd times = Eigen::VectorXd::Constant(A, params.query_time);
  const int chunk = 8192;
  for (int lo = 0; lo < A; lo += chunk) {
    int len = std::min(chunk, A - lo);
    Eigen::MatrixXd zc = queries.middleRows(lo, len);
    Eigen::VectorXd tc = times.segment(lo, len);
    Eigen::VectorXd mu, var;
    for (int i = 0; i < n; ++i) {
      model[i].predict_batch(zc, tc, mu, var);
      means.block(lo, 0, len, n).col(i) = mu;
      vars.block(lo, 0, len, n).col(i) = var.cwiseMax(params.sigma_min2);
    }
  }

  const int n_f = w->dirs_w_->size();
  w->supports_.resize(A, n_f);
  for (int i = 0; i < n_f; ++i) {
    Eigen::VectorXd s = w->dirs_w_->direction(i);
    Eigen::VectorXd s2 = s.array().square();
    w->supports_.col(i) =
        means * s + w->c_ * (vars * s2).array().sqrt().matrix();
  }

  w->anchor_dots_ = anchors * w->dirs_xv_->rows().transpose();

  Eigen::VectorXd infl = w->inflation();
  w->envelope_.resize(n_f);
  for (int i = 0; i < n_f; ++i)
    w->envelope_[i] = w->supports_.col(i).maxCoeff() + infl[i] * w->grid_.eps;
  return w;
}

Eigen::VectorXd DisturbanceWrapper::inflation() const {
  return lips_.mean_slope + c_ * lips_.sigma_slope;
}

Eigen::VectorXd DisturbanceWrapper::union_support(
    const geom::SupportPolytope& proj_xv) const {
  if (proj_xv.dims() != dirs_xv_->dims() ||
      proj_xv.direction_set()->rows() != dirs_xv_->rows())
    throw InvalidArgument(
        "wrapper: slice polytope does not use the wrapper's xv directions");

  // An anchor takes part when it lies within the covering radius of the
  // slice: every point of the slice (inside the region) then has a
  // participating anchor within eps.
  const double dilate = grid_.eps + 1e-12;
  const int n_f = static_cast<int>(envelope_.size());
  Eigen::VectorXd infl = inflation();
  Eigen::VectorXd best = Eigen::VectorXd::Constant(
      n_f, -std::numeric_limits<double>::infinity());
  bool any = false;
  for (int a = 0; a < grid_.total; ++a) {
    if (((anchor_dots_.row(a).transpose() - proj_xv.values()).array() >
         dilate)
            .any())
      continue;
    any = true;
    best = best.cwiseMax(supports_.row(a).transpose());
  }
  if (!any) return envelope_;  // slice misses the region entirely
  Eigen::VectorXd out =
      best + infl * grid_.eps;
  return out.cwiseMin(envelope_);
}

double DisturbanceWrapper::query(const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& v, int dir) const {
  if (dir < 0 || dir >= dirs_w_->size())
    throw InvalidArgument("wrapper: direction index out of range");
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(v.size());
  if (n + m != grid_.dims())
    throw InvalidArgument("wrapper: query dimension mismatch");
  Eigen::VectorXd xv(n + m);
  xv << x, v;
  if (!grid_.region.contains(xv, 1e-9)) return envelope_[dir];
  int a = grid_.nearest(xv);
  double dist = (xv - grid_.point(a)).norm();
  double infl = lips_.mean_slope[dir] + c_ * lips_.sigma_slope[dir];
  return std::min(supports_(a, dir) + infl * dist, envelope_[dir]);
}

NestedDisturbance::NestedDisturbance(
    std::vector<std::shared_ptr<const DisturbanceWrapper>> epochs)
    : epochs_(std::move(epochs)) {
  if (epochs_.empty())
    throw InvalidArgument("nested disturbance: need at least one epoch");
  const auto& first = *epochs_.front();
  envelope_ = first.envelope();
  for (std::size_t q = 1; q < epochs_.size(); ++q) {
    const auto& e = *epochs_[q];
    if (e.w_directions()->rows() != first.w_directions()->rows() ||
        e.xv_directions()->rows() != first.xv_directions()->rows())
      throw InvalidArgument(
          "nested disturbance: epochs use different direction families");
    envelope_ = envelope_.cwiseMin(e.envelope());
  }
}

const geom::DirectionSetPtr& NestedDisturbance::w_directions() const {
  return epochs_.front()->w_directions();
}

Eigen::VectorXd NestedDisturbance::union_support(
    const geom::SupportPolytope& proj_xv) const {
  Eigen::VectorXd out = epochs_.front()->union_support(proj_xv);
  for (std::size_t q = 1; q < epochs_.size(); ++q)
    out = out.cwiseMin(epochs_[q]->union_support(proj_xv));
  return out;
}

double NestedDisturbance::query(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& v, int dir) const {
  double out = epochs_.front()->query(x, v, dir);
  for (std::size_t q = 1; q < epochs_.size(); ++q)
    out = std::min(out, epochs_[q]->query(x, v, dir));
  return out;
}

}  // namespace rpitube::wrap
