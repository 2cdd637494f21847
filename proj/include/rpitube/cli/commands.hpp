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

#ifndef RPITUBE_CLI_COMMANDS_HPP_
#define RPITUBE_CLI_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rpitube::cli {

/// Stable exit codes; scripts may rely on these numbers.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,          // bad flags, unknown subcommand or selector
  kConfigError = 3,    // config rejected by validation
  kIoError = 4,        // unreadable, malformed or unwritable artifact files
  kSeedFailure = 5,    // no invariant starting set exists
  kNotConverged = 6,   // iteration budget exhausted or a chain grew
  kAuditFailed = 7,    // empirical violation above the allowed budget
  kInternalError = 9,  // anything unexpected
};

/// Runs the epoch campaign described by the config file and writes the run
/// record, the summary table and the collected dataset into the run
/// directory. The directory defaults to out_dir/<timestamp>-<hash8>; the
/// override fixes it exactly, which scripted comparisons rely on.
int cmd_synthesize(const std::string& config_path,
                   const std::optional<std::string>& out_override,
                   std::optional<std::uint64_t> seed_override);

/// Replays the recorded tube against fresh closed-loop rollouts and checks
/// the empirical violation rate against the risk budget (the config's
/// epoch budget unless overridden) plus three binomial standard errors.
int cmd_audit(const std::string& record_path, int trials, int steps,
              std::uint64_t seed, std::optional<double> budget_override);

/// Writes one artifact out of a run record: the final state cross-section
/// (tube), the residual envelope in force (wrapper) or the per-iteration
/// convergence gaps (gaps), as a text table or structured JSON. An empty
/// output path prints to standard output.
int cmd_export(const std::string& record_path, const std::string& what,
               const std::string& format, const std::string& out_path);

/// Full argument-vector entry point shared by main() and the tests;
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace rpitube::cli

#endif  // RPITUBE_CLI_COMMANDS_HPP_
