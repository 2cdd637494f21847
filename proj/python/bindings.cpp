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

// Python face of the library. The same operations the command-line tool
// offers, but in memory: configs and run records travel as JSON text in
// the exact canonical form the CLI writes, so artifacts produced on either
// side are interchangeable.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpitube/cli/config.hpp"
#include "rpitube/common.hpp"
#include "rpitube/io/json_io.hpp"
#include "rpitube/plant/epochs.hpp"
#include "rpitube/stats/chi_squared.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

namespace cli = rpitube::cli;
namespace io = rpitube::io;
namespace plant = rpitube::plant;

cli::RunConfig parse_config(const std::string& text) {
  return cli::config_from_json(io::parse_json(text, "config"));
}

io::RunArtifact parse_record(const std::string& text) {
  return io::run_from_json(io::parse_json(text, "record"));
}

std::string default_config() {
  return cli::config_to_json(cli::RunConfig()).dump(2) + "\n";
}

std::string config_hash(const std::string& config_text) {
  return io::config_hash(cli::config_to_json(parse_config(config_text)));
}

std::string synthesize(const std::string& config_text,
                       std::optional<std::uint64_t> seed) {
  cli::RunConfig cfg = parse_config(config_text);
  if (seed) cfg.seed = *seed;
  json canon = cli::config_to_json(cfg);
  plant::SynthesisSetup setup = cli::build_setup(cfg);
  plant::EpochRun run = plant::run_epochs(setup);
  return io::run_to_json(run, canon, io::config_hash(canon), cfg.seed)
             .dump(2) +
         "\n";
}

py::dict audit(const std::string& record_text, int trials, int steps,
               std::uint64_t seed) {
  io::RunArtifact art = parse_record(record_text);
  cli::RunConfig cfg = cli::config_from_json(art.config);
  plant::SynthesisSetup setup = cli::build_setup(cfg);
  auto tube = io::tube_from_record(art, setup);
  plant::InvarianceStats s =
      plant::monte_carlo_invariance(setup, tube, trials, steps, seed);
  py::dict out;
  out["trials"] = s.trials;
  out["steps_requested"] = s.steps_requested;
  out["steps_executed"] = s.steps_executed;
  out["contained"] = s.contained;
  out["rate"] = s.rate;
  out["step_violations"] = s.step_violations;
  out["step_violation_rate"] = s.step_violation_rate;
  out["selector_failures"] = s.selector_failures;
  out["trivial"] = s.trivial;
  return out;
}

py::dict support_dict(const rpitube::geom::DirectionSetPtr& dirs,
                      const Eigen::VectorXd& values) {
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(dirs->size()));
  for (int i = 0; i < dirs->size(); ++i) {
    Eigen::VectorXd d = dirs->direction(i);
    rows.emplace_back(d.data(), d.data() + d.size());
  }
  py::dict out;
  out["directions"] = rows;
  out["values"] = std::vector<double>(values.data(),
                                      values.data() + values.size());
  return out;
}

py::dict tube(const std::string& record_text) {
  io::RunArtifact art = parse_record(record_text);
  cli::RunConfig cfg = cli::config_from_json(art.config);
  plant::SynthesisSetup setup = cli::build_setup(cfg);
  auto fp = io::tube_from_record(art, setup);
  return support_dict(setup.dirs_x, fp.proj_x.values());
}

py::dict envelope(const std::string& record_text) {
  io::RunArtifact art = parse_record(record_text);
  cli::RunConfig cfg = cli::config_from_json(art.config);
  plant::SynthesisSetup setup = cli::build_setup(cfg);
  if (art.epochs.back().envelope.size() != setup.dirs_w->size())
    throw rpitube::IoError(
        "record: stored envelope disagrees with the config's direction "
        "family");
  return support_dict(setup.dirs_w, art.epochs.back().envelope);
}

std::vector<double> convergence(const std::string& record_text) {
  return parse_record(record_text).epochs.back().hausdorff;
}

}  // namespace

PYBIND11_MODULE(_rpitube, m) {
  m.doc() = "invariant tube synthesis with learned disturbance bounds";

  py::register_exception<rpitube::ConfigError>(m, "ConfigError",
                                               PyExc_ValueError);
  py::register_exception<rpitube::IoError>(m, "IoError", PyExc_ValueError);

  m.def("default_config", &default_config,
        "Canonical JSON text of the built-in configuration.");
  m.def("config_hash", &config_hash, py::arg("config"),
        "Hash of the canonical form of a config; defaults are filled in "
        "before hashing, so partial and full spellings agree.");
  m.def("synthesize", &synthesize, py::arg("config"),
        py::arg("seed") = std::nullopt,
        "Runs the epoch campaign described by the config text and returns "
        "the run record as canonical JSON. Identical config and seed give "
        "identical text.");
  m.def("audit", &audit, py::arg("record"), py::arg("trials") = 200,
        py::arg("steps") = 400, py::arg("seed") = 1,
        "Replays the recorded tube against fresh closed-loop rollouts and "
        "returns the containment statistics.");
  m.def("tube", &tube, py::arg("record"),
        "Final state cross-section of a run record as directions and "
        "support values.");
  m.def("envelope", &envelope, py::arg("record"),
        "Residual envelope in force after the last epoch.");
  m.def("convergence", &convergence, py::arg("record"),
        "Distance of each iterate to the converged set for the final "
        "epoch; non-increasing, ending at zero.");
  m.def("chi_squared_quantile", &rpitube::stats::chi_squared_quantile,
        py::arg("n"), py::arg("prob"),
        "Chi-squared quantile used for the credible ellipsoid level.");
}
