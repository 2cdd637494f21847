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

#ifndef RPITUBE_WRAP_DISTURBANCE_WRAPPER_HPP_
#define RPITUBE_WRAP_DISTURBANCE_WRAPPER_HPP_

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "rpitube/common.hpp"
#include "rpitube/geom/support_polytope.hpp"
#include "rpitube/gp/regressor.hpp"
#include "rpitube/wrap/lipschitz.hpp"

namespace rpitube::wrap {

/// Regular anchor lattice over the (x, v) design region. The spacing per
/// axis is chosen so no point of the region is farther than `eps` from its
/// nearest anchor (euclidean).
struct AnchorGrid {
  Box region;
  std::vector<int> counts;  // per axis, 1 on zero-width axes
  Eigen::VectorXd step;     // per axis, 0 on zero-width axes
  double eps = 0.0;         // achieved covering radius (half cell diagonal)
  int total = 0;

  /// Builds the lattice with per-axis spacing <= 2*eps_target/sqrt(d). The
  /// achieved radius is at most eps_target and is stored in `eps`. Throws
  /// GridTooFine when more than `max_anchors` anchors would be needed.
  static AnchorGrid build(const Box& region, double eps_target,
                          int max_anchors);

  Eigen::VectorXd point(int flat) const;
  int nearest(const Eigen::VectorXd& xv) const;
  int dims() const { return region.dims(); }
};

/// Per-epoch bound on the state/input-dependent residual set, consumed by
/// the invariance engine: a global per-direction envelope plus a bound on
/// the union of pointwise sets over any (x, v) slice.
class DisturbanceSource {
 public:
  virtual ~DisturbanceSource() = default;

  virtual const geom::DirectionSetPtr& w_directions() const = 0;

  /// Per stored direction, valid for every (x, v) in the design region.
  virtual const Eigen::VectorXd& envelope() const = 0;

  /// Per stored direction, bound on the union of pointwise residual sets
  /// over all (x, v) in proj_xv (intersected with the design region).
  /// Monotone in proj_xv: enlarging the slice never shrinks the bound.
  virtual Eigen::VectorXd union_support(
      const geom::SupportPolytope& proj_xv) const = 0;

  /// Pointwise bound along one stored direction at a single (x, v).
  virtual double query(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                       int dir) const = 0;

  geom::SupportPolytope envelope_set() const {
    return geom::SupportPolytope(w_directions(), envelope());
  }
};

/// Fixed residual set, independent of (x, v). Used when the disturbance is
/// known a priori and in the worst-case baseline tube.
class ConstantDisturbance final : public DisturbanceSource {
 public:
  explicit ConstantDisturbance(geom::SupportPolytope w)
      : dirs_(w.direction_set()), h_(w.values()) {}

  const geom::DirectionSetPtr& w_directions() const override { return dirs_; }
  const Eigen::VectorXd& envelope() const override { return h_; }
  Eigen::VectorXd union_support(const geom::SupportPolytope&) const override {
    return h_;
  }
  double query(const Eigen::VectorXd&, const Eigen::VectorXd&,
               int dir) const override {
    return h_[dir];
  }

 private:
  geom::DirectionSetPtr dirs_;
  Eigen::VectorXd h_;
};

/// Anchor-based outer bound of the learned residual sets. Each anchor
/// stores the exact supports of its credible ellipsoid; values between
/// anchors are covered by a Lipschitz inflation of the nearest anchor, and
/// the per-anchor risk share alpha_anchor = alpha_epoch / #anchors keeps
/// the union risk over the whole region at alpha_epoch.
class DisturbanceWrapper final : public DisturbanceSource {
 public:
  struct BuildParams {
    double eps = 0.1;           // target covering radius
    double alpha_epoch = 0.05;  // total risk budget of this epoch
    int max_anchors = 10000;
    int lipschitz_grid_density = 5;
    double lipschitz_safety = 1.5;
    double sigma_min2 = 1e-10;
    double query_time = 0.0;  // anchor timestamp (matters only with the
                              // periodic kernel factor enabled)
  };

  static std::shared_ptr<DisturbanceWrapper> build(
      const std::vector<gp::GpComponent>& model, const Box& region,
      const Eigen::MatrixXd& K, geom::DirectionSetPtr dirs_w,
      geom::DirectionSetPtr dirs_xv, const BuildParams& params);

  /// Variant with precomputed slope bounds.
  static std::shared_ptr<DisturbanceWrapper> build(
      const std::vector<gp::GpComponent>& model, const Box& region,
      const Eigen::MatrixXd& K, geom::DirectionSetPtr dirs_w,
      geom::DirectionSetPtr dirs_xv, const LipschitzBounds& lips,
      const BuildParams& params);

  const geom::DirectionSetPtr& w_directions() const override { return dirs_w_; }
  const Eigen::VectorXd& envelope() const override { return envelope_; }
  Eigen::VectorXd union_support(
      const geom::SupportPolytope& proj_xv) const override;
  double query(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
               int dir) const override;

  const AnchorGrid& grid() const { return grid_; }
  const LipschitzBounds& lipschitz() const { return lips_; }
  const Eigen::MatrixXd& anchor_supports() const { return supports_; }
  double level_scale() const { return c_; }
  double alpha_epoch() const { return alpha_epoch_; }
  double alpha_anchor() const { return alpha_anchor_; }
  double alpha_uniform() const { return alpha_anchor_ * grid_.total; }
  const geom::DirectionSetPtr& xv_directions() const { return dirs_xv_; }

  /// Per-direction inflation slope L_mu + c * L_sigma(s).
  Eigen::VectorXd inflation() const;

 private:
  DisturbanceWrapper() = default;

  AnchorGrid grid_;
  LipschitzBounds lips_;
  geom::DirectionSetPtr dirs_w_;
  geom::DirectionSetPtr dirs_xv_;
  Eigen::MatrixXd supports_;    // anchors x n_f, ellipsoid supports
  Eigen::MatrixXd anchor_dots_; // anchors x n_f_xv, s^T z_a per xv direction
  Eigen::VectorXd envelope_;
  double c_ = 0.0;              // sqrt of the per-anchor chi-squared level
  double alpha_epoch_ = 0.0;
  double alpha_anchor_ = 0.0;
};

/// Intersection over the epochs seen so far. Each epoch keeps its own
/// anchors, slopes and risk level; bounds are combined by a per-direction
/// minimum only across complete per-epoch answers, never by mixing one
/// epoch's anchors with another's slopes.
class NestedDisturbance final : public DisturbanceSource {
 public:
  explicit NestedDisturbance(
      std::vector<std::shared_ptr<const DisturbanceWrapper>> epochs);

  const geom::DirectionSetPtr& w_directions() const override;
  const Eigen::VectorXd& envelope() const override { return envelope_; }
  Eigen::VectorXd union_support(
      const geom::SupportPolytope& proj_xv) const override;
  double query(const Eigen::VectorXd& x, const Eigen::VectorXd& v,
               int dir) const override;

  const std::vector<std::shared_ptr<const DisturbanceWrapper>>& epochs()
      const {
    return epochs_;
  }

 private:
  std::vector<std::shared_ptr<const DisturbanceWrapper>> epochs_;
  Eigen::VectorXd envelope_;
};

}  // namespace rpitube::wrap

#endif  // RPITUBE_WRAP_DISTURBANCE_WRAPPER_HPP_
