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

#include "rpitube/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <functional>
#include <string>

#include <CLI11.hpp>

#include "rpitube/cli/config.hpp"
#include "rpitube/common.hpp"
#include "rpitube/io/json_io.hpp"

namespace rpitube::cli {
namespace {

using nlohmann::json;

// Uniform mapping from library failures to the documented exit codes. The
// command bodies only throw; this is the single place return codes happen.
int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoError;
  } catch (const NoInvariantSeed& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSeedFailure;
  } catch (const EmptySetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kSeedFailure;
  } catch (const NotConverged& e) {
    std::fprintf(stderr, "error: %s (last gap %.3e)\n", e.what(),
                 e.last_gap());
    return kNotConverged;
  } catch (const MonotonicityViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNotConverged;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInternalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInternalError;
  }
}

std::string utc_stamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

RunConfig load_config_file(const std::string& path) {
  std::string text = io::read_text_file(path);
  json raw = json::parse(text, nullptr, false);
  if (raw.is_discarded())
    throw ConfigError("config: malformed JSON in " + path);
  return config_from_json(raw);
}

io::RunArtifact load_record(const std::string& path) {
  return io::run_from_json(
      io::parse_json(io::read_text_file(path), "record " + path));
}

std::string summary_table(const plant::EpochRun& run, int facets) {
  std::string out =
      "epoch  iterations  final_gap   facets  mean_halfwidth  conservatism\n";
  for (const auto& rec : run.records) {
    char line[128];
    std::snprintf(line, sizeof(line), "%5d  %10d  %.3e  %6d  %14.6f  %12.6f\n",
                  rec.index, rec.fp_iterations, rec.fp_gap, facets,
                  rec.tube_x.mean(), rec.conservatism);
    out += line;
  }
  return out;
}

// Rebuilds the final tube from a record: supports reattach to the exact
// direction families the embedded config reproduces.

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    io::write_text_file(out_path, content);
  }
}

std::string support_table(const geom::SupportPolytope& p,
                          const std::string& label, std::uint64_t seed,
                          const std::string& hash) {
  std::string out = "# rpitube " + label + ", seed=" + std::to_string(seed) +
                    " config=" + hash + "\n# columns:";
  for (int a = 0; a < p.dims(); ++a) out += " s" + std::to_string(a);
  out += " h\n";
  const Eigen::MatrixXd& rows = p.direction_set()->rows();
  for (int i = 0; i < p.count(); ++i) {
    char buf[64];
    for (int a = 0; a < p.dims(); ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g\t", rows(i, a));
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g\n", p.values()[i]);
    out += buf;
  }
  return out;
}

}  // namespace

int cmd_synthesize(const std::string& config_path,
                   const std::optional<std::string>& out_override,
                   std::optional<std::uint64_t> seed_override) {
  return guarded([&]() -> int {
    RunConfig cfg = load_config_file(config_path);
    if (seed_override) cfg.seed = *seed_override;

    json canon = config_to_json(cfg);
    std::string hash = io::config_hash(canon);
    std::string run_dir =
        out_override ? *out_override
                     : cfg.out_dir + "/" + utc_stamp() + "-" + hash.substr(0, 8);
    std::filesystem::create_directories(run_dir);

    plant::SynthesisSetup setup = build_setup(cfg);
    plant::EpochRun run = plant::run_epochs(setup);

    json record = io::run_to_json(run, canon, hash, cfg.seed);
    io::write_text_file(run_dir + "/record.json", record.dump(2) + "\n");

    std::string summary = summary_table(run, setup.dirs_lifted->size());
    io::write_text_file(run_dir + "/summary.txt",
                        "# rpitube synthesis, seed=" +
                            std::to_string(cfg.seed) + " config=" + hash +
                            "\n" + summary);
    io::write_text_file(
        run_dir + "/dataset.tsv",
        io::dataset_tsv(run.data, setup.model.K, cfg.seed, hash));

    std::fputs(summary.c_str(), stdout);
    std::printf("run directory: %s\n", run_dir.c_str());
    double wall = 0.0;
    for (const auto& rec : run.records) wall += rec.wall_seconds;
    std::fprintf(stderr, "campaign wall time: %.2fs\n", wall);
    return kOk;
  });
}

int cmd_audit(const std::string& record_path, int trials, int steps,
              std::uint64_t seed, std::optional<double> budget_override) {
  return guarded([&]() -> int {
    if (trials < 0 || steps < 0)
      throw ConfigError("config: audit trials and steps must be >= 0");
    io::RunArtifact art = load_record(record_path);
    RunConfig cfg = config_from_json(art.config);
    plant::SynthesisSetup setup = build_setup(cfg);
    lifted::FixedPointResult tube = io::tube_from_record(art, setup);

    double budget = budget_override.value_or(cfg.wrapper.alpha_epoch);
    if (budget < 0.0 || budget >= 1.0)
      throw ConfigError("config: audit budget must lie in [0, 1)");

    plant::InvarianceStats stats =
        plant::monte_carlo_invariance(setup, tube, trials, steps, seed);

    double violation = 1.0 - stats.rate;
    double margin =
        3.0 * std::sqrt(budget * (1.0 - budget) /
                        static_cast<double>(std::max(stats.trials, 1)));
    std::printf("trials            %d\n", stats.trials);
    std::printf("steps per trial   %d\n", stats.steps_requested);
    std::printf("contained         %d\n", stats.contained);
    std::printf("containment rate  %.6f\n", stats.rate);
    std::printf("violation rate    %.6f\n", violation);
    std::printf("selector failures %lld\n",
                static_cast<long long>(stats.selector_failures));
    std::printf("risk budget       %.6f\n", budget);
    std::printf("allowed (3 SE)    %.6f\n", budget + margin);
    if (stats.trivial) {
      std::printf("warning: no trials executed, rate is vacuous\n");
      return kOk;
    }
    return violation <= budget + margin ? kOk : kAuditFailed;
  });
}

int cmd_export(const std::string& record_path, const std::string& what,
               const std::string& format, const std::string& out_path) {
  return guarded([&]() -> int {
    if (what != "tube" && what != "wrapper" && what != "gaps") {
      std::fprintf(stderr,
                   "usage: export expects tube, wrapper or gaps, got '%s'\n",
                   what.c_str());
      return kUsage;
    }
    if (format != "text-table" && format != "structured") {
      std::fprintf(
          stderr,
          "usage: export expects format text-table or structured, got '%s'\n",
          format.c_str());
      return kUsage;
    }

    io::RunArtifact art = load_record(record_path);
    RunConfig cfg = config_from_json(art.config);
    const io::EpochArtifact& last = art.epochs.back();

    if (what == "gaps") {
      // The published convergence column is each iterate's distance to the
      // converged set, which nesting keeps non-increasing.
      if (format == "structured") {
        json j;
        j["kind"] = "rpitube-gaps";
        j["seed"] = art.seed;
        j["config_hash"] = art.config_hash;
        j["epoch"] = last.index;
        j["gaps"] = last.hausdorff;
        emit(out_path, j.dump(2) + "\n");
      } else {
        std::string out = "# rpitube gaps, seed=" + std::to_string(art.seed) +
                          " config=" + art.config_hash + "\n";
        char buf[32];
        for (double g : last.hausdorff) {
          std::snprintf(buf, sizeof(buf), "%.17g\n", g);
          out += buf;
        }
        emit(out_path, out);
      }
      return kOk;
    }

    plant::SynthesisSetup setup = build_setup(cfg);
    bool is_tube = (what == "tube");
    const Eigen::VectorXd& h = is_tube ? last.tube_x : last.envelope;
    geom::DirectionSetPtr dirs = is_tube ? setup.dirs_x : setup.dirs_w;
    if (h.size() != dirs->size())
      throw IoError("record: stored supports disagree with the config's "
                    "direction families");
    geom::SupportPolytope p(dirs, h);

    if (format == "structured") {
      json j = io::support_to_json(p);
      j["kind"] = is_tube ? "rpitube-tube" : "rpitube-wrapper";
      j["seed"] = art.seed;
      j["config_hash"] = art.config_hash;
      emit(out_path, j.dump(2) + "\n");
    } else {
      emit(out_path, support_table(p, what, art.seed, art.config_hash));
    }
    return kOk;
  });
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"invariant tube synthesis with learned disturbance bounds"};
  app.require_subcommand(1);

  auto* syn = app.add_subcommand("synthesize",
                                 "run the epoch campaign from a config file");
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  syn->add_option("--config", config_path, "config file (JSON)")->required();
  CLI::Option* syn_out =
      syn->add_option("--out", out_dir, "exact run directory");
  CLI::Option* syn_seed =
      syn->add_option("--seed", seed, "override the config seed");

  auto* aud = app.add_subcommand(
      "audit", "replay a run record against fresh rollouts");
  std::string record_path;
  int trials = 200;
  int steps = 400;
  std::uint64_t audit_seed = 1;
  double budget = 0.0;
  aud->add_option("record", record_path, "run record (record.json)")
      ->required();
  aud->add_option("--trials", trials, "number of rollouts");
  aud->add_option("--steps", steps, "steps per rollout");
  aud->add_option("--seed", audit_seed, "audit noise seed");
  CLI::Option* aud_budget = aud->add_option(
      "--budget", budget, "violation budget, default is the config's");

  auto* exp = app.add_subcommand("export", "write one artifact from a record");
  std::string exp_record;
  std::string what;
  std::string format = "text-table";
  std::string exp_out;
  exp->add_option("record", exp_record, "run record (record.json)")
      ->required();
  exp->add_option("what", what, "tube, wrapper or gaps")->required();
  exp->add_option("--format", format, "text-table or structured");
  exp->add_option("--out", exp_out, "output file, default standard output");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("rpitube");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::fputs(app.help().c_str(), stdout);
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kUsage;
  }

  if (syn->parsed()) {
    return cmd_synthesize(
        config_path,
        *syn_out ? std::optional<std::string>(out_dir) : std::nullopt,
        *syn_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
  }
  if (aud->parsed()) {
    return cmd_audit(record_path, trials, steps, audit_seed,
                     *aud_budget ? std::optional<double>(budget)
                                 : std::nullopt);
  }
  return cmd_export(exp_record, what, format, exp_out);
}

}  // namespace rpitube::cli
