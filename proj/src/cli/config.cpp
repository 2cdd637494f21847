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

#include "rpitube/cli/config.hpp"

#include <initializer_list>
#include <string>
#include <utility>

#include "rpitube/common.hpp"
#include "rpitube/io/json_io.hpp"
#include "rpitube/plant/double_integrator.hpp"

namespace rpitube::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("config: " + field + " " + why);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) {
      std::string full = where.empty() ? it.key() : where + "." + it.key();
      throw ConfigError("config: unknown key '" + full + "'");
    }
  }
}

const json* maybe(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double num(const json& v, const std::string& field) {
  if (!v.is_number()) bad(field, "must be a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad(field, "must be an integer");
  return v.get<int>();
}

std::uint64_t uint_of(const json& v, const std::string& field) {
  if (!v.is_number_unsigned()) bad(field, "must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

Eigen::VectorXd positive_vec(const json& v, int want,
                             const std::string& field) {
  if (!v.is_array() || static_cast<int>(v.size()) != want)
    bad(field, "must be an array of " + std::to_string(want) + " numbers");
  Eigen::VectorXd out(want);
  int at = 0;
  for (const auto& e : v) out[at++] = num(e, field);
  if (out.minCoeff() <= 0.0) bad(field, "entries must be positive");
  return out;
}

void parse_kernel(const json& obj, const std::string& where,
                  gp::KernelParams* k) {
  check_keys(obj, {"sigma_f2", "ell", "sigma_n2"}, where);
  if (const json* v = maybe(obj, "sigma_f2")) k->sigma_f2 = num(*v, where);
  if (const json* v = maybe(obj, "ell")) k->ell = num(*v, where);
  if (const json* v = maybe(obj, "sigma_n2")) k->sigma_n2 = num(*v, where);
  if (k->sigma_f2 <= 0.0) bad(where + ".sigma_f2", "must be positive");
  if (k->ell <= 0.0) bad(where + ".ell", "must be positive");
  if (k->sigma_n2 < 0.0) bad(where + ".sigma_n2", "must be nonnegative");
}

void parse_dirs(const json& obj, const std::string& where, int dims,
                int n_planes, RunConfig::DirSpec* d) {
  check_keys(obj, {"count", "seed", "fan"}, where);
  if (const json* v = maybe(obj, "count")) d->count = integer(*v, where);
  if (const json* v = maybe(obj, "seed")) d->seed = uint_of(*v, where);
  if (const json* v = maybe(obj, "fan")) d->fan = integer(*v, where);
  if (d->fan < 0) bad(where + ".fan", "must be nonnegative");
  if (n_planes == 0 && d->fan != 0)
    bad(where + ".fan", "is not supported for this family");
  if (d->count < 2 * dims + n_planes * d->fan)
    bad(where + ".count", "is too small for the axes plus the plane fans");
}

json dirs_to_json(const RunConfig::DirSpec& d, bool with_fan) {
  json j;
  j["count"] = d.count;
  j["seed"] = d.seed;
  if (with_fan) j["fan"] = d.fan;
  return j;
}

json kernel_to_json(const gp::KernelParams& k) {
  json j;
  j["sigma_f2"] = k.sigma_f2;
  j["ell"] = k.ell;
  j["sigma_n2"] = k.sigma_n2;
  return j;
}

}  // namespace

RunConfig::RunConfig() {
  x_half = Eigen::VectorXd(4);
  x_half << 0.4, 0.4, 0.6, 0.6;
  u_half = Eigen::VectorXd::Constant(2, 10.0);
  v_half = Eigen::VectorXd::Constant(2, 0.1);

  kernel_position.sigma_f2 = 1e-6;
  kernel_position.ell = 0.75;
  kernel_position.sigma_n2 = 2.5e-9;
  kernel_velocity.sigma_f2 = 4e-4;
  kernel_velocity.ell = 0.75;
  kernel_velocity.sigma_n2 = 1e-6;

  wrapper.eps = 0.26;
  wrapper.alpha_epoch = 0.05;
  wrapper.max_anchors = 15000;
  wrapper.lipschitz_grid_density = 4;
  wrapper.lipschitz_safety = 1.5;

  sim.noise_bound = 0.025;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j,
             {"plant", "sets", "kernels", "wrapper", "directions", "epochs",
              "seed", "out_dir"},
             "");
  RunConfig c;

  if (const json* p = maybe(j, "plant")) {
    check_keys(*p,
               {"dt", "mass", "beta1", "beta2", "noise_std", "noise_bound",
                "poles"},
               "plant");
    if (const json* v = maybe(*p, "dt")) c.sim.dt = num(*v, "plant.dt");
    if (const json* v = maybe(*p, "mass")) c.sim.mass = num(*v, "plant.mass");
    if (const json* v = maybe(*p, "beta1"))
      c.sim.beta1 = num(*v, "plant.beta1");
    if (const json* v = maybe(*p, "beta2"))
      c.sim.beta2 = num(*v, "plant.beta2");
    if (const json* v = maybe(*p, "noise_std"))
      c.sim.noise_std = num(*v, "plant.noise_std");
    if (const json* v = maybe(*p, "noise_bound"))
      c.sim.noise_bound = num(*v, "plant.noise_bound");
    if (const json* v = maybe(*p, "poles")) {
      if (!v->is_array() || v->size() != 2)
        bad("plant.poles", "must be an array of two numbers");
      c.pole1 = num((*v)[0], "plant.poles");
      c.pole2 = num((*v)[1], "plant.poles");
    }
  }
  if (!(c.sim.dt > 0.0 && c.sim.dt < 2.0))
    bad("plant.dt", "must lie in (0, 2)");
  if (c.sim.mass <= 0.0) bad("plant.mass", "must be positive");
  if (c.sim.beta1 < 0.0) bad("plant.beta1", "must be nonnegative");
  if (c.sim.beta2 < 0.0) bad("plant.beta2", "must be nonnegative");
  if (c.sim.noise_std < 0.0) bad("plant.noise_std", "must be nonnegative");
  if (c.sim.noise_bound < 0.0) bad("plant.noise_bound", "must be nonnegative");
  if (!(c.pole1 > 0.0 && c.pole1 < 1.0) || !(c.pole2 > 0.0 && c.pole2 < 1.0))
    bad("plant.poles", "must lie in (0, 1)");

  if (const json* p = maybe(j, "sets")) {
    check_keys(*p, {"x_half", "u_half", "v_half", "dv_scale"}, "sets");
    if (const json* v = maybe(*p, "x_half"))
      c.x_half = positive_vec(*v, 4, "sets.x_half");
    if (const json* v = maybe(*p, "u_half"))
      c.u_half = positive_vec(*v, 2, "sets.u_half");
    if (const json* v = maybe(*p, "v_half"))
      c.v_half = positive_vec(*v, 2, "sets.v_half");
    if (const json* v = maybe(*p, "dv_scale"))
      c.dv_scale = num(*v, "sets.dv_scale");
  }
  if (c.dv_scale <= 0.0) bad("sets.dv_scale", "must be positive");

  if (const json* p = maybe(j, "kernels")) {
    check_keys(*p, {"position", "velocity"}, "kernels");
    if (const json* v = maybe(*p, "position"))
      parse_kernel(*v, "kernels.position", &c.kernel_position);
    if (const json* v = maybe(*p, "velocity"))
      parse_kernel(*v, "kernels.velocity", &c.kernel_velocity);
  }

  if (const json* p = maybe(j, "wrapper")) {
    check_keys(*p,
               {"eps", "alpha_epoch", "max_anchors", "lipschitz_grid_density",
                "lipschitz_safety"},
               "wrapper");
    if (const json* v = maybe(*p, "eps"))
      c.wrapper.eps = num(*v, "wrapper.eps");
    if (const json* v = maybe(*p, "alpha_epoch"))
      c.wrapper.alpha_epoch = num(*v, "wrapper.alpha_epoch");
    if (const json* v = maybe(*p, "max_anchors"))
      c.wrapper.max_anchors = integer(*v, "wrapper.max_anchors");
    if (const json* v = maybe(*p, "lipschitz_grid_density"))
      c.wrapper.lipschitz_grid_density =
          integer(*v, "wrapper.lipschitz_grid_density");
    if (const json* v = maybe(*p, "lipschitz_safety"))
      c.wrapper.lipschitz_safety = num(*v, "wrapper.lipschitz_safety");
  }
  if (c.wrapper.eps <= 0.0) bad("wrapper.eps", "must be positive");
  if (!(c.wrapper.alpha_epoch > 0.0 && c.wrapper.alpha_epoch < 1.0))
    bad("wrapper.alpha_epoch", "must lie in (0, 1)");
  if (c.wrapper.max_anchors < 1) bad("wrapper.max_anchors", "must be >= 1");
  if (c.wrapper.lipschitz_grid_density < 2)
    bad("wrapper.lipschitz_grid_density", "must be >= 2");
  if (c.wrapper.lipschitz_safety < 1.0)
    bad("wrapper.lipschitz_safety", "must be >= 1");

  if (const json* p = maybe(j, "directions")) {
    check_keys(*p, {"lifted", "xv", "x", "w", "u", "v"}, "directions");
    if (const json* v = maybe(*p, "lifted"))
      parse_dirs(*v, "directions.lifted", 10, 2, &c.dirs_lifted);
    if (const json* v = maybe(*p, "xv"))
      parse_dirs(*v, "directions.xv", 6, 2, &c.dirs_xv);
    if (const json* v = maybe(*p, "x"))
      parse_dirs(*v, "directions.x", 4, 2, &c.dirs_x);
    if (const json* v = maybe(*p, "w"))
      parse_dirs(*v, "directions.w", 4, 2, &c.dirs_w);
    if (const json* v = maybe(*p, "u"))
      parse_dirs(*v, "directions.u", 2, 0, &c.dirs_u);
    if (const json* v = maybe(*p, "v"))
      parse_dirs(*v, "directions.v", 2, 0, &c.dirs_v);
  }

  if (const json* p = maybe(j, "epochs")) {
    check_keys(*p,
               {"schedule", "rollout_len", "explore_amp", "reset_fill",
                "fp_tol", "fp_max_iter"},
               "epochs");
    if (const json* v = maybe(*p, "schedule")) {
      if (!v->is_array() || v->empty())
        bad("epochs.schedule", "must be a non-empty array");
      c.schedule.clear();
      for (const auto& e : *v)
        c.schedule.push_back(integer(e, "epochs.schedule"));
    }
    if (const json* v = maybe(*p, "rollout_len"))
      c.rollout_len = integer(*v, "epochs.rollout_len");
    if (const json* v = maybe(*p, "explore_amp"))
      c.explore_amp = num(*v, "epochs.explore_amp");
    if (const json* v = maybe(*p, "reset_fill"))
      c.reset_fill = num(*v, "epochs.reset_fill");
    if (const json* v = maybe(*p, "fp_tol"))
      c.fp_tol = num(*v, "epochs.fp_tol");
    if (const json* v = maybe(*p, "fp_max_iter"))
      c.fp_max_iter = integer(*v, "epochs.fp_max_iter");
  }
  for (int s : c.schedule)
    if (s < 1) bad("epochs.schedule", "entries must be >= 1");
  if (c.rollout_len < 1) bad("epochs.rollout_len", "must be >= 1");
  if (c.explore_amp < 0.0) bad("epochs.explore_amp", "must be nonnegative");
  if (!(c.reset_fill >= 0.0 && c.reset_fill <= 1.0))
    bad("epochs.reset_fill", "must lie in [0, 1]");
  if (c.fp_tol <= 0.0) bad("epochs.fp_tol", "must be positive");
  if (c.fp_max_iter < 1) bad("epochs.fp_max_iter", "must be >= 1");

  if (const json* v = maybe(j, "seed")) c.seed = uint_of(*v, "seed");
  if (const json* v = maybe(j, "out_dir")) {
    if (!v->is_string()) bad("out_dir", "must be a string");
    c.out_dir = v->get<std::string>();
    if (c.out_dir.empty()) bad("out_dir", "must not be empty");
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["plant"] = {{"dt", c.sim.dt},
                {"mass", c.sim.mass},
                {"beta1", c.sim.beta1},
                {"beta2", c.sim.beta2},
                {"noise_std", c.sim.noise_std},
                {"noise_bound", c.sim.noise_bound},
                {"poles", {c.pole1, c.pole2}}};
  j["sets"] = {{"x_half", io::vector_to_json(c.x_half)},
               {"u_half", io::vector_to_json(c.u_half)},
               {"v_half", io::vector_to_json(c.v_half)},
               {"dv_scale", c.dv_scale}};
  j["kernels"] = {{"position", kernel_to_json(c.kernel_position)},
                  {"velocity", kernel_to_json(c.kernel_velocity)}};
  j["wrapper"] = {{"eps", c.wrapper.eps},
                  {"alpha_epoch", c.wrapper.alpha_epoch},
                  {"max_anchors", c.wrapper.max_anchors},
                  {"lipschitz_grid_density", c.wrapper.lipschitz_grid_density},
                  {"lipschitz_safety", c.wrapper.lipschitz_safety}};
  j["directions"] = {{"lifted", dirs_to_json(c.dirs_lifted, true)},
                     {"xv", dirs_to_json(c.dirs_xv, true)},
                     {"x", dirs_to_json(c.dirs_x, true)},
                     {"w", dirs_to_json(c.dirs_w, true)},
                     {"u", dirs_to_json(c.dirs_u, false)},
                     {"v", dirs_to_json(c.dirs_v, false)}};
  j["epochs"] = {{"schedule", c.schedule},
                 {"rollout_len", c.rollout_len},
                 {"explore_amp", c.explore_amp},
                 {"reset_fill", c.reset_fill},
                 {"fp_tol", c.fp_tol},
                 {"fp_max_iter", c.fp_max_iter}};
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  return j;
}

plant::SynthesisSetup build_setup(const RunConfig& c) {
  Eigen::MatrixXd A = plant::dynamics_a(c.sim.dt);
  Eigen::MatrixXd B = plant::dynamics_b(c.sim.dt);
  Eigen::MatrixXd K = plant::placed_gain(c.sim.dt, c.pole1, c.pole2);

  // Fans live in the coupled (position, velocity) planes of each axis; the
  // same pairs apply in state space, residual space and all lifted spaces
  // whose leading block is the state.
  const std::vector<std::pair<int, int>> pv{{0, 2}, {1, 3}};
  auto dx = geom::DirectionSet::make_with_planes(4, c.dirs_x.count,
                                                 c.dirs_x.seed, pv,
                                                 c.dirs_x.fan);
  auto du = geom::DirectionSet::make(2, c.dirs_u.count, c.dirs_u.seed);
  auto dv = geom::DirectionSet::make(2, c.dirs_v.count, c.dirs_v.seed);
  auto dw = geom::DirectionSet::make_with_planes(4, c.dirs_w.count,
                                                 c.dirs_w.seed, pv,
                                                 c.dirs_w.fan);

  geom::SupportPolytope V = geom::SupportPolytope::box(dv, c.v_half);
  plant::SynthesisSetup s(
      lifted::make_plant(A, B, K, geom::SupportPolytope::box(dx, c.x_half),
                         geom::SupportPolytope::box(du, c.u_half), V,
                         geom::scale(V, c.dv_scale)));
  s.sim = c.sim;
  s.kernel = {c.kernel_position, c.kernel_position, c.kernel_velocity,
              c.kernel_velocity};
  s.wrapper = c.wrapper;
  s.dirs_lifted = geom::DirectionSet::make_with_planes(
      10, c.dirs_lifted.count, c.dirs_lifted.seed, pv, c.dirs_lifted.fan);
  s.dirs_xv = geom::DirectionSet::make_with_planes(
      6, c.dirs_xv.count, c.dirs_xv.seed, pv, c.dirs_xv.fan);
  s.dirs_x = dx;
  s.dirs_w = dw;
  s.schedule = c.schedule;
  s.rollout_len = c.rollout_len;
  s.explore_amp = c.explore_amp;
  s.reset_fill = c.reset_fill;
  s.fp_tol = c.fp_tol;
  s.fp_max_iter = c.fp_max_iter;
  s.seed = c.seed;
  return s;
}

}  // namespace rpitube::cli
