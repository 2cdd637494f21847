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

#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "rpitube/common.hpp"
#include "rpitube/stats/chi_squared.hpp"
#include "rpitube/wrap/credible_ellipsoid.hpp"
#include "rpitube/wrap/disturbance_wrapper.hpp"
#include "rpitube/wrap/lipschitz.hpp"

using namespace rpitube;
using namespace rpitube::wrap;
using rpitube::gp::Dataset;
using rpitube::gp::GpComponent;
using rpitube::gp::KernelParams;

namespace {

// Single feedback row mapping the 2-state to the 1-input channel.
Eigen::MatrixXd feedback() {
  Eigen::MatrixXd K(1, 2);
  K << -0.4, 0.2;
  return K;
}

KernelParams smooth_params() {
  KernelParams p;
  p.sigma_f2 = 0.05;
  p.ell = 1.5;
  p.sigma_n2 = 1e-5;
  return p;
}

// Residual data from a smooth two-output ground truth over z = (x1, x2, u).
Dataset residual_data(int n_samples, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Dataset d;
  d.inputs.resize(n_samples, 3);
  d.times.resize(n_samples);
  d.outputs.resize(n_samples, 2);
  for (int i = 0; i < n_samples; ++i) {
    for (int j = 0; j < 3; ++j) d.inputs(i, j) = rng.uniform(-1.2, 1.2);
    d.times[i] = 0.05 * i;
    double x1 = d.inputs(i, 0), x2 = d.inputs(i, 1), u = d.inputs(i, 2);
    d.outputs(i, 0) = 0.08 * std::sin(x1 + 0.5 * u) + 0.001 * rng.normal();
    d.outputs(i, 1) = 0.05 * x2 * std::cos(u) + 0.001 * rng.normal();
  }
  return d;
}

std::vector<GpComponent> residual_model(std::uint64_t seed = 0x6d0de1u,
                                        int n_samples = 60) {
  return gp::fit_model(residual_data(n_samples, seed), {smooth_params()});
}

Box xv_region() {
  Box b;
  b.lo = Eigen::Vector3d(-1, -1, -0.5);
  b.hi = Eigen::Vector3d(1, 1, 0.5);
  return b;
}

Eigen::VectorXd z_of(const Eigen::VectorXd& xv) {
  Eigen::VectorXd z(3);
  z.head(2) = xv.head(2);
  z.tail(1) = feedback() * xv.head(2) + xv.tail(1);
  return z;
}

}  // namespace

TEST_SUITE("wrapper") {

TEST_CASE("unit ellipsoid support is the chi-squared radius") {
  CredibleEllipsoid e;
  e.mu = Eigen::Vector2d::Zero();
  e.var = Eigen::Vector2d::Ones();
  e.level = stats::chi_squared_quantile(2, 0.95);
  SplitMix64 rng(0xe111u);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd s = rng.unit_vector(2);
    CHECK(ellipsoid_support(e, s) ==
          doctest::Approx(std::sqrt(e.level)).epsilon(1e-12));
  }
  // Shifting the center moves the support linearly.
  e.mu = Eigen::Vector2d(0.3, -0.1);
  Eigen::Vector2d s(1, 0);
  CHECK(ellipsoid_support(e, s) ==
        doctest::Approx(0.3 + std::sqrt(e.level)).epsilon(1e-12));
}

TEST_CASE("anisotropic ellipsoid support has the quadratic closed form") {
  CredibleEllipsoid e;
  e.mu = Eigen::Vector2d(0.1, 0.2);
  e.var = Eigen::Vector2d(0.04, 0.25);
  e.level = 3.0;
  Eigen::Vector2d s(0.6, -0.8);
  double expect = s.dot(e.mu) +
                  std::sqrt(3.0 * (0.36 * 0.04 + 0.64 * 0.25));
  CHECK(ellipsoid_support(e, s) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("polytopized ellipsoid contains boundary samples") {
  CredibleEllipsoid e;
  e.mu = Eigen::Vector2d(0.05, -0.02);
  e.var = Eigen::Vector2d(0.09, 0.01);
  e.level = stats::chi_squared_quantile(2, 0.9);
  auto dirs = geom::DirectionSet::make(2, 16, 21);
  auto P = polytopize(e, dirs);
  SplitMix64 rng(0x9017u);
  for (int i = 0; i < 200; ++i) {
    double phi = rng.uniform(0.0, 2.0 * 3.14159265358979);
    Eigen::Vector2d w =
        e.mu + std::sqrt(e.level) *
                   Eigen::Vector2d(std::sqrt(e.var[0]) * std::cos(phi),
                                   std::sqrt(e.var[1]) * std::sin(phi));
    CHECK(P.halfspaces().satisfied(w, 1e-9));
  }
}

TEST_CASE("ellipsoid_at composes posterior and quantile") {
  auto model = residual_model();
  Eigen::Vector3d z(0.2, -0.3, 0.1);
  auto e = ellipsoid_at(model, z, 0.4, 0.05, 1e-10);
  auto p = gp::posterior(model, z, 0.4, 1e-10);
  CHECK((e.mu - p.mean).norm() == 0.0);
  CHECK((e.var - p.variance).norm() == 0.0);
  CHECK(e.level ==
        doctest::Approx(stats::chi_squared_quantile(2, 0.95)).epsilon(1e-12));
  CHECK_THROWS_AS(ellipsoid_at(model, z, 0.4, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ellipsoid_at(model, z, 0.4, 1.0), InvalidArgument);
}

TEST_CASE("slope bounds vanish without data") {
  auto model = gp::fit_model(Dataset::empty(3, 2), {smooth_params()});
  auto dirs_w = geom::DirectionSet::make(2, 8, 3);
  auto lips =
      estimate_lipschitz(model, xv_region(), feedback(), dirs_w, 4, 1.5);
  CHECK(lips.mean_slope.maxCoeff() == 0.0);
  CHECK(lips.sigma_slope.maxCoeff() == 0.0);
}

TEST_CASE("slope bounds scale with the safety factor") {
  auto model = residual_model();
  auto dirs_w = geom::DirectionSet::make(2, 8, 3);
  auto a = estimate_lipschitz(model, xv_region(), feedback(), dirs_w, 5, 1.0);
  auto b = estimate_lipschitz(model, xv_region(), feedback(), dirs_w, 5, 2.0);
  CHECK(a.mean_slope.maxCoeff() > 0.0);
  CHECK((b.mean_slope - 2.0 * a.mean_slope).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((b.sigma_slope - 2.0 * a.sigma_slope).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(
      estimate_lipschitz(model, xv_region(), feedback(), dirs_w, 1, 1.5),
      InvalidArgument);
}

TEST_CASE("anchor grid covers its region") {
  Box r = xv_region();
  auto g = AnchorGrid::build(r, 0.35, 5000);
  CHECK(g.eps <= 0.35);
  SplitMix64 rng(0xc0fe1u);
  for (int i = 0; i < 300; ++i) {
    Eigen::VectorXd p(3);
    for (int k = 0; k < 3; ++k) p[k] = rng.uniform(r.lo[k], r.hi[k]);
    int a = g.nearest(p);
    CHECK((p - g.point(a)).norm() <= g.eps + 1e-12);
  }
  CHECK_THROWS_AS(AnchorGrid::build(r, 1e-4, 5000), GridTooFine);
}

TEST_CASE("anchor grid handles zero-width axes") {
  Box r;
  r.lo = Eigen::Vector3d(-1, 0, -0.5);
  r.hi = Eigen::Vector3d(1, 0, 0.5);
  auto g = AnchorGrid::build(r, 0.3, 5000);
  CHECK(g.counts[1] == 1);
  for (int a = 0; a < g.total; ++a) CHECK(g.point(a)[1] == 0.0);
}

TEST_CASE("wrapper splits the epoch risk across anchors") {
  auto model = residual_model();
  auto dirs_w = geom::DirectionSet::make(2, 12, 4);
  auto dirs_xv = geom::DirectionSet::make(3, 10, 5);
  DisturbanceWrapper::BuildParams bp;
  bp.eps = 0.4;
  bp.alpha_epoch = 0.05;
  auto w = DisturbanceWrapper::build(model, xv_region(), feedback(), dirs_w,
                                     dirs_xv, bp);
  CHECK(w->alpha_anchor() ==
        doctest::Approx(0.05 / w->grid().total).epsilon(1e-15));
  CHECK(w->alpha_uniform() == doctest::Approx(0.05).epsilon(1e-12));
  // The per-anchor level is stricter than the epoch level.
  CHECK(w->level_scale() >
        std::sqrt(stats::chi_squared_quantile(2, 1.0 - 0.05)));
}

TEST_CASE("wrapper dominates the pointwise credible bound on a fine grid") {
  auto model = residual_model();
  auto dirs_w = geom::DirectionSet::make(2, 12, 4);
  auto dirs_xv = geom::DirectionSet::make(3, 10, 5);
  DisturbanceWrapper::BuildParams bp;
  bp.eps = 0.25;
  bp.alpha_epoch = 0.05;
  bp.lipschitz_grid_density = 7;
  auto w = DisturbanceWrapper::build(model, xv_region(), feedback(), dirs_w,
                                     dirs_xv, bp);
  Box r = xv_region();
  const int G = 9;
  for (int a = 0; a < G; ++a) {
    for (int b = 0; b < G; ++b) {
      for (int c = 0; c < G; ++c) {
        Eigen::VectorXd xv(3);
        xv << r.lo[0] + (r.hi[0] - r.lo[0]) * a / (G - 1.0),
            r.lo[1] + (r.hi[1] - r.lo[1]) * b / (G - 1.0),
            r.lo[2] + (r.hi[2] - r.lo[2]) * c / (G - 1.0);
        auto e = ellipsoid_at(model, z_of(xv), 0.0, w->alpha_anchor(), 1e-10);
        for (int i = 0; i < dirs_w->size(); ++i) {
          double bound = w->query(xv.head(2), xv.tail(1), i);
          double exact = ellipsoid_support(e, dirs_w->direction(i));
          CHECK(bound >= exact - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("union bound covers pointwise bounds inside a slice") {
  auto model = residual_model();
  auto dirs_w = geom::DirectionSet::make(2, 12, 4);
  auto dirs_xv = geom::DirectionSet::make(3, 10, 5);
  DisturbanceWrapper::BuildParams bp;
  bp.eps = 0.3;
  auto w = DisturbanceWrapper::build(model, xv_region(), feedback(), dirs_w,
                                     dirs_xv, bp);

  Box slice;
  slice.lo = Eigen::Vector3d(-0.5, -0.2, -0.3);
  slice.hi = Eigen::Vector3d(0.4, 0.6, 0.2);
  auto P = geom::SupportPolytope::box(dirs_xv, slice);
  Eigen::VectorXd us = w->union_support(P);

  SplitMix64 rng(0x511ce1u);
  for (int trial = 0; trial < 150; ++trial) {
    Eigen::VectorXd xv(3);
    for (int k = 0; k < 3; ++k) xv[k] = rng.uniform(slice.lo[k], slice.hi[k]);
    for (int i = 0; i < dirs_w->size(); ++i)
      CHECK(us[i] >= w->query(xv.head(2), xv.tail(1), i) - 1e-9);
  }
  CHECK((us - w->envelope()).maxCoeff() <= 1e-12);
}

TEST_CASE("union bound grows with the slice") {
  auto model = residual_model();
  auto dirs_w = geom::DirectionSet::make(2, 12, 4);
  auto dirs_xv = geom::DirectionSet::make(3, 10, 5);
  DisturbanceWrapper::BuildParams bp;
  bp.eps = 0.3;
  auto w = DisturbanceWrapper::build(model, xv_region(), feedback(), dirs_w,
                                     dirs_xv, bp);
  SplitMix64 rng(0x6e0b01u);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Vector3d hw(rng.uniform(0.1, 0.8), rng.uniform(0.1, 0.8),
                       rng.uniform(0.05, 0.4));
    auto small = geom::SupportPolytope::box(dirs_xv, Eigen::VectorXd(hw));
    auto large = geom::scale(small, rng.uniform(1.0, 1.5));
    Eigen::VectorXd us_small = w->union_support(small);
    Eigen::VectorXd us_large = w->union_support(large);
    CHECK((us_small - us_large).maxCoeff() <= 1e-12);
  }
}

TEST_CASE("slice outside the region falls back to the envelope") {
  auto model = residual_model();
  auto dirs_w = geom::DirectionSet::make(2, 12, 4);
  auto dirs_xv = geom::DirectionSet::make(3, 10, 5);
  DisturbanceWrapper::BuildParams bp;
  bp.eps = 0.3;
  auto w = DisturbanceWrapper::build(model, xv_region(), feedback(), dirs_w,
                                     dirs_xv, bp);
  auto far = geom::SupportPolytope::point(dirs_xv, Eigen::Vector3d(9, 9, 9));
  CHECK((w->union_support(far) - w->envelope()).norm() == 0.0);
  // Same for pointwise queries outside the region.
  CHECK(w->query(Eigen::Vector2d(9, 9), Eigen::VectorXd::Ones(1), 0) ==
        w->envelope()[0]);
}

TEST_CASE("constant disturbance ignores the slice") {
  auto dirs_w = geom::DirectionSet::make(2, 8, 6);
  auto dirs_xv = geom::DirectionSet::make(3, 8, 7);
  auto W = geom::SupportPolytope::box(dirs_w, Eigen::Vector2d(0.2, 0.1));
  ConstantDisturbance cd(W);
  auto slice = geom::SupportPolytope::box(dirs_xv, Eigen::Vector3d(1, 1, 1));
  CHECK((cd.union_support(slice) - W.values()).norm() == 0.0);
  CHECK(cd.query(Eigen::Vector2d(0, 0), Eigen::VectorXd::Zero(1), 0) ==
        W.values()[0]);
  CHECK((cd.envelope_set().values() - W.values()).norm() == 0.0);
}

TEST_CASE("nested bound is the epoch-wise minimum") {
  auto dirs_w = geom::DirectionSet::make(2, 12, 4);
  auto dirs_xv = geom::DirectionSet::make(3, 10, 5);
  DisturbanceWrapper::BuildParams bp;
  bp.eps = 0.35;
  auto w1 = DisturbanceWrapper::build(residual_model(0x111u, 40), xv_region(),
                                      feedback(), dirs_w, dirs_xv, bp);
  auto w2 = DisturbanceWrapper::build(residual_model(0x222u, 90), xv_region(),
                                      feedback(), dirs_w, dirs_xv, bp);
  NestedDisturbance nest({w1, w2});

  CHECK((nest.envelope() - w1->envelope().cwiseMin(w2->envelope())).norm() ==
        0.0);
  auto slice =
      geom::SupportPolytope::box(dirs_xv, Eigen::Vector3d(0.5, 0.5, 0.3));
  Eigen::VectorXd us = nest.union_support(slice);
  Eigen::VectorXd ref =
      w1->union_support(slice).cwiseMin(w2->union_support(slice));
  CHECK((us - ref).norm() == 0.0);
  // Nesting never loosens any single epoch.
  CHECK((us - w1->union_support(slice)).maxCoeff() <= 0.0);

  Eigen::Vector2d x(0.1, -0.2);
  Eigen::VectorXd v = Eigen::VectorXd::Constant(1, 0.05);
  CHECK(nest.query(x, v, 3) ==
        doctest::Approx(std::min(w1->query(x, v, 3), w2->query(x, v, 3))));
}

TEST_CASE("nested epochs must share direction families") {
  auto dirs_w = geom::DirectionSet::make(2, 12, 4);
  auto dirs_w_other = geom::DirectionSet::make(2, 12, 99);
  auto dirs_xv = geom::DirectionSet::make(3, 10, 5);
  DisturbanceWrapper::BuildParams bp;
  bp.eps = 0.4;
  auto w1 = DisturbanceWrapper::build(residual_model(), xv_region(),
                                      feedback(), dirs_w, dirs_xv, bp);
  auto w2 = DisturbanceWrapper::build(residual_model(), xv_region(),
                                      feedback(), dirs_w_other, dirs_xv, bp);
  CHECK_THROWS_AS(NestedDisturbance({w1, w2}), InvalidArgument);
  CHECK_THROWS_AS(NestedDisturbance({}), InvalidArgument);
}

}  // TEST_SUITE
