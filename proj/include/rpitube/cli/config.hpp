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

#ifndef RPITUBE_CLI_CONFIG_HPP_
#define RPITUBE_CLI_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpitube/plant/epochs.hpp"

namespace rpitube::cli {

/// One run's full configuration for the planar benchmark. Every field has
/// a working default, so an empty JSON object is a valid config; unknown
/// keys are rejected to catch typos, and the hash is computed over the
/// canonical (fully populated) serialized form.
struct RunConfig {
  plant::DoubleIntegratorConfig sim;
  double pole1 = 0.6;
  double pole2 = 0.7;

  Eigen::VectorXd x_half;  // 4 entries, position then velocity bounds
  Eigen::VectorXd u_half;  // 2 entries
  Eigen::VectorXd v_half;  // 2 entries, feedback-offset bounds
  double dv_scale = 2.0;   // offset-rate set as a multiple of the offset set

  gp::KernelParams kernel_position;
  gp::KernelParams kernel_velocity;
  wrap::DisturbanceWrapper::BuildParams wrapper;

  struct DirSpec {
    int count = 0;
    std::uint64_t seed = 0;
    int fan = 0;  // fan size per coupled position/velocity plane
  };
  DirSpec dirs_lifted{80, 0xa5, 16};
  DirSpec dirs_xv{48, 0xa6, 12};
  DirSpec dirs_x{40, 0xa1, 16};
  DirSpec dirs_w{32, 0xa4, 12};
  DirSpec dirs_u{4, 0xa2, 0};
  DirSpec dirs_v{8, 0xa3, 0};

  std::vector<int> schedule = {40, 160, 400};
  int rollout_len = 5;
  double explore_amp = 0.5;
  double reset_fill = 0.9;
  double fp_tol = 1e-6;
  int fp_max_iter = 500;

  std::uint64_t seed = 7;
  std::string out_dir = "runs";

  RunConfig();
};

/// Parses and validates a config object. Unknown keys and out-of-range
/// values raise ConfigError naming the offending field.
RunConfig config_from_json(const nlohmann::json& j);

/// Canonical serialized form with every field written out. Two configs
/// that parse equal dump byte-identically, which is what the hash covers.
nlohmann::json config_to_json(const RunConfig& c);

/// Builds the synthesis campaign input: plant matrices, placed gain,
/// constraint sets over fresh direction families, kernels and schedule.
plant::SynthesisSetup build_setup(const RunConfig& c);

}  // namespace rpitube::cli

#endif  // RPITUBE_CLI_CONFIG_HPP_
