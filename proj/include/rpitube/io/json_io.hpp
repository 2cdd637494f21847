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

#ifndef RPITUBE_IO_JSON_IO_HPP_
#define RPITUBE_IO_JSON_IO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpitube/geom/support_polytope.hpp"
#include "rpitube/gp/dataset.hpp"
#include "rpitube/plant/epochs.hpp"

namespace rpitube::io {

// Artifact files are canonical JSON: the library keeps object keys sorted
// and prints doubles in shortest round-trip form, so identical inputs give
// byte-identical files and numeric round trips are exact.

nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

/// Support polytope with its direction rows inlined, so a reader needs no
/// other context to rebuild the set.
nlohmann::json support_to_json(const geom::SupportPolytope& p);
geom::SupportPolytope support_from_json(const nlohmann::json& j);

/// Per-epoch slice of a campaign record. Supports are stored as raw values
/// over the direction families that the embedded config reproduces.
struct EpochArtifact {
  int index = 0;
  int data_count = 0;
  int fp_iterations = 0;
  double fp_gap = 0.0;
  double conservatism = 0.0;
  Eigen::VectorXd envelope;
  Eigen::VectorXd tube_x;
  Eigen::VectorXd z_star;
  std::vector<double> gaps;       // per-iteration support decrease
  std::vector<double> hausdorff;  // per-iterate distance to the limit
};

/// One synthesis campaign: the config it ran under, identity fields and the
/// per-epoch results. Wall-clock timing stays out on purpose; identical
/// config and seed must serialize to byte-identical records.
struct RunArtifact {
  nlohmann::json config;
  std::string config_hash;
  std::uint64_t seed = 0;
  Eigen::VectorXd baseline_tube_x;
  std::vector<EpochArtifact> epochs;
};

nlohmann::json run_to_json(const plant::EpochRun& run,
                           const nlohmann::json& config,
                           const std::string& config_hash, std::uint64_t seed);
RunArtifact run_from_json(const nlohmann::json& j);

/// FNV-1a 64-bit over the canonical dump, as fixed-width lowercase hex.
std::string config_hash(const nlohmann::json& config);

/// Rebuilds the final tube of a record over the direction families that
/// `setup` derives from the embedded config. The record stores support
/// values only; a stored vector whose length disagrees with its family
/// raises IoError.
lifted::FixedPointResult tube_from_record(const RunArtifact& art,
                                          const plant::SynthesisSetup& setup);

/// Whole-file helpers; both throw IoError with the path in the message.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Parse wrapper that turns the library's exceptions into IoError tagged
/// with what was being read.
nlohmann::json parse_json(const std::string& text, const std::string& what);

/// Campaign dataset as delimited text, one row per step: k, x, u, w.
/// The dataset stores input offsets v = u - K x, so the gain is needed to
/// report the raw actuator commands back.
std::string dataset_tsv(const gp::Dataset& data, const Eigen::MatrixXd& K,
                        std::uint64_t seed, const std::string& config_hash);

}  // namespace rpitube::io

#endif  // RPITUBE_IO_JSON_IO_HPP_
