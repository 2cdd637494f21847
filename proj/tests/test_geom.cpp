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
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "rpitube/common.hpp"
#include "rpitube/geom/direction_set.hpp"
#include "rpitube/geom/support_polytope.hpp"

using namespace rpitube;
using namespace rpitube::geom;

TEST_SUITE("geom") {

TEST_CASE("direction set starts with signed axes") {
  auto d = DirectionSet::make(2, 4, 0);
  REQUIRE(d->size() == 4);
  CHECK((d->direction(0) - Eigen::Vector2d(1, 0)).norm() == 0.0);
  CHECK((d->direction(1) - Eigen::Vector2d(-1, 0)).norm() == 0.0);
  CHECK((d->direction(2) - Eigen::Vector2d(0, 1)).norm() == 0.0);
  CHECK((d->direction(3) - Eigen::Vector2d(0, -1)).norm() == 0.0);
}

TEST_CASE("direction set is unit norm and reproducible") {
  auto a = DirectionSet::make(3, 40, 1234);
  auto b = DirectionSet::make(3, 40, 1234);
  auto c = DirectionSet::make(3, 40, 1235);
  CHECK(a->rows() == b->rows());
  CHECK(a->rows() != c->rows());
  for (int i = 0; i < a->size(); ++i)
    CHECK(std::abs(a->direction(i).norm() - 1.0) < 1e-12);
}

TEST_CASE("direction set rejects too few directions") {
  CHECK_THROWS_AS(DirectionSet::make(3, 5, 0), InvalidArgument);
  CHECK_THROWS_AS(DirectionSet::make(0, 4, 0), InvalidArgument);
}

TEST_CASE("box support in a diagonal direction") {
  auto d = DirectionSet::make(2, 12, 7);
  auto P = SupportPolytope::box(d, Eigen::Vector2d(1, 1));
  Eigen::Vector2d s(std::sqrt(0.5), std::sqrt(0.5));
  CHECK(support(P, s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(support(P, Eigen::Vector2d(1, 0)) == doctest::Approx(1.0));
  // Scaling the direction scales the value.
  CHECK(support(P, Eigen::Vector2d(3, 0)) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("interval sum matches by direction") {
  auto d = DirectionSet::make(1, 2, 0);
  auto A = SupportPolytope::box(d, Eigen::VectorXd::Ones(1));
  auto B = SupportPolytope::box(d, Eigen::VectorXd::Ones(1) * 2.0);
  auto S = minkowski_sum(A, B);
  CHECK(S.values()[0] == 3.0);
  CHECK(S.values()[1] == 3.0);
}

TEST_CASE("minkowski sum matches the vertex oracle") {
  SplitMix64 rng(0x135ca11u);
  auto d = DirectionSet::make(2, 16, 5);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector2d wa(rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0));
    Eigen::Vector2d wb(rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0));
    auto A = SupportPolytope::box(d, wa);
    auto B = SupportPolytope::box(d, wb);
    auto S = minkowski_sum(A, B);
    auto verts = oracle::minkowski_vertices(oracle::box_vertices(-wa, wa),
                                            oracle::box_vertices(-wb, wb));
    for (int i = 0; i < d->size(); ++i) {
      CHECK(S.values()[i] ==
            doctest::Approx(oracle::support_of_vertices(verts, d->direction(i)))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("minkowski sum requires a shared direction family") {
  auto d1 = DirectionSet::make(2, 8, 1);
  auto d2 = DirectionSet::make(2, 8, 2);
  auto A = SupportPolytope::box(d1, Eigen::Vector2d(1, 1));
  auto B = SupportPolytope::box(d2, Eigen::Vector2d(1, 1));
  CHECK_THROWS_AS(minkowski_sum(A, B), InvalidArgument);
}

TEST_CASE("identity image returns the operand unchanged") {
  auto d = DirectionSet::make(3, 20, 3);
  SplitMix64 rng(0x1dca5eu);
  Eigen::Vector3d w(rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0),
                    rng.uniform(0.1, 2.0));
  auto P = SupportPolytope::box(d, w);
  auto Q = affine_image(Eigen::MatrixXd::Identity(3, 3), P, d);
  CHECK((Q.values() - P.values()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("linear image matches the vertex oracle") {
  SplitMix64 rng(0x1a6e0001u);
  auto din = DirectionSet::make(2, 14, 9);
  auto dout = DirectionSet::make(2, 14, 10);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Vector2d w(rng.uniform(0.2, 1.5), rng.uniform(0.2, 1.5));
    Eigen::MatrixXd M(2, 2);
    M << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
        rng.uniform(-1, 1);
    auto P = SupportPolytope::box(din, w);
    auto Q = affine_image(M, P, dout);
    auto verts = oracle::image_vertices(M, oracle::box_vertices(-w, w));
    for (int i = 0; i < dout->size(); ++i) {
      CHECK(Q.values()[i] ==
            doctest::Approx(
                oracle::support_of_vertices(verts, dout->direction(i)))
                .epsilon(1e-8));
    }
  }
}

TEST_CASE("singleton behaves like its point") {
  auto d = DirectionSet::make(2, 10, 4);
  Eigen::Vector2d p(0.3, -1.7);
  auto P = SupportPolytope::point(d, p);
  Eigen::Vector2d s(0.6, 0.8);
  CHECK(support(P, s) == doctest::Approx(s.dot(p)).epsilon(1e-9));
  Eigen::MatrixXd M(2, 2);
  M << 2, 1, 0, -1;
  auto Q = affine_image(M, P, d);
  Eigen::Vector2d mp = M * p;
  for (int i = 0; i < d->size(); ++i)
    CHECK(Q.values()[i] ==
          doctest::Approx(d->direction(i).dot(mp)).epsilon(1e-8));
}

TEST_CASE("intersection trims exactly the cut directions") {
  auto d = DirectionSet::make(2, 16, 11);
  auto P = SupportPolytope::box(d, Eigen::Vector2d(2, 2));
  Eigen::MatrixXd n(1, 2);
  n << 1, 0;
  Eigen::VectorXd o(1);
  o << 1;
  auto Q = intersect(P, HalfspaceSystem(n, o));
  CHECK(Q.values()[DirectionSet::axis_index(0, true)] ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(Q.values()[DirectionSet::axis_index(0, false)] ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(Q.values()[DirectionSet::axis_index(1, true)] ==
        doctest::Approx(2.0).epsilon(1e-9));
  // No direction may grow.
  CHECK(((Q.values() - P.values()).array() <= 1e-12).all());

  // Against the vertex oracle for every stored direction.
  auto verts = oracle::halfspace_vertices(
      P.halfspaces().stacked(HalfspaceSystem(n, o)).normals,
      P.halfspaces().stacked(HalfspaceSystem(n, o)).offsets);
  REQUIRE(verts.has_value());
  for (int i = 0; i < d->size(); ++i) {
    double ref = oracle::support_of_vertices(*verts, d->direction(i));
    CHECK(Q.values()[i] >= ref - 1e-9);
    CHECK(Q.values()[i] <= std::min(ref, P.values()[i]) + 1e-9);
  }
}

TEST_CASE("empty intersection throws") {
  auto d = DirectionSet::make(2, 8, 12);
  auto P = SupportPolytope::box(d, Eigen::Vector2d(2, 2));
  Eigen::MatrixXd n(1, 2);
  n << 1, 0;
  Eigen::VectorXd o(1);
  o << -3;
  CHECK_THROWS_AS(intersect(P, HalfspaceSystem(n, o)), EmptySetError);
}

TEST_CASE("empty halfspace support throws") {
  Eigen::MatrixXd n(2, 1);
  n << 1, -1;
  Eigen::VectorXd o(2);
  o << -1, -1;
  Eigen::VectorXd s(1);
  s << 1;
  CHECK_THROWS_AS(support(HalfspaceSystem(n, o), s), EmptySetError);
}

TEST_CASE("unbounded support is infinite") {
  Eigen::MatrixXd n(1, 2);
  n << 1, 0;
  Eigen::VectorXd o(1);
  o << 1;
  Eigen::VectorXd s(2);
  s << 0, 1;
  CHECK(std::isinf(support(HalfspaceSystem(n, o), s)));
}

TEST_CASE("projection keeps the selected coordinates") {
  auto d3 = DirectionSet::make(3, 18, 13);
  auto d1 = DirectionSet::make(1, 2, 0);
  auto d2 = DirectionSet::make(2, 10, 14);
  Box b;
  b.lo = Eigen::Vector3d(-1, -3, 0);
  b.hi = Eigen::Vector3d(2, 4, 5);
  auto P = SupportPolytope::box(d3, b);

  auto Py = project(P, {1}, d1);
  CHECK(Py.values()[0] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(Py.values()[1] == doctest::Approx(3.0).epsilon(1e-9));

  auto Pxz = project(P, {0, 2}, d2);
  CHECK(Pxz.values()[DirectionSet::axis_index(0, true)] ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(Pxz.values()[DirectionSet::axis_index(1, false)] ==
        doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(project(P, {0, 3}, d2), InvalidArgument);
  CHECK_THROWS_AS(project(P, {0}, d2), InvalidArgument);
}

TEST_CASE("containment is a per-direction comparison") {
  auto d = DirectionSet::make(2, 12, 15);
  auto inner = SupportPolytope::box(d, Eigen::Vector2d(1, 1));
  auto outer = SupportPolytope::box(d, Eigen::Vector2d(1.5, 1.2));
  CHECK(contains(outer, inner, 0.0));
  CHECK_FALSE(contains(inner, outer, 0.0));
  // Tolerance rescues a marginal overshoot.
  auto slightly = scale(inner, 1.0 + 1e-10);
  CHECK(contains(inner, slightly, 1e-9));
  CHECK_FALSE(contains(inner, scale(inner, 1.1), 1e-9));
}

TEST_CASE("support gap between nested boxes") {
  auto d = DirectionSet::make(2, 12, 16);
  auto A = SupportPolytope::box(d, Eigen::Vector2d(2, 2));
  auto B = scale(A, 0.5);
  // Every direction shrinks by half its value; the largest stored support
  // of A decides the gap.
  double expect = 0.5 * A.values().maxCoeff();
  CHECK(hausdorff_gap(A, B) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(hausdorff_gap(A, A) == 0.0);
}

TEST_CASE("support gap on an empty operand throws") {
  auto d = DirectionSet::make(1, 2, 0);
  auto A = SupportPolytope::box(d, Eigen::VectorXd::Ones(1));
  Eigen::VectorXd bad(2);
  bad << -1, -1;  // y <= -1 and -y <= -1 cannot hold together
  SupportPolytope E(d, bad);
  CHECK(is_empty(E));
  CHECK_FALSE(is_empty(A));
  CHECK_THROWS_AS(hausdorff_gap(A, E), EmptySetError);
}

TEST_CASE("random boxes agree with the oracle through every op") {
  SplitMix64 rng(0x0b0e0001u);
  auto d = DirectionSet::make(3, 22, 17);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Vector3d w(rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0),
                      rng.uniform(0.2, 2.0));
    auto P = SupportPolytope::box(d, w);
    auto verts = oracle::box_vertices(-w, w);
    for (int rep = 0; rep < 6; ++rep) {
      Eigen::VectorXd s = rng.unit_vector(3);
      CHECK(support(P, s) ==
            doctest::Approx(oracle::support_of_vertices(verts, s))
                .epsilon(1e-8));
    }
  }
}

}  // TEST_SUITE
