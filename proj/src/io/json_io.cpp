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

#include "rpitube/io/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rpitube/common.hpp"

namespace rpitube::io {
namespace {

using nlohmann::json;

const json& field(const json& j, const char* key, const std::string& what) {
  auto it = j.find(key);
  if (it == j.end())
    throw IoError(what + ": missing field '" + key + "'");
  return *it;
}

// Shortest-round-trip double formatting for the delimited text files, same
// guarantee the JSON dumper gives.
void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = 0.0;
  std::sscanf(buf, "%lg", &back);
  if (back == v) {
    // Try to shorten: %.17g is often longer than needed.
    for (int prec = 1; prec < 17; ++prec) {
      char s[32];
      std::snprintf(s, sizeof(s), "%.*g", prec, v);
      double r = 0.0;
      std::sscanf(s, "%lg", &r);
      if (r == v) {
        out += s;
        return;
      }
    }
  }
  out += buf;
}

}  // namespace

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw IoError("vector: expected a JSON array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index at = 0;
  for (const auto& x : j) {
    if (!x.is_number()) throw IoError("vector: expected numeric entries");
    v[at++] = x.get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw IoError("matrix: expected a non-empty JSON array of rows");
  Eigen::VectorXd first = vector_from_json(j.front());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), first.size());
  Eigen::Index at = 0;
  for (const auto& row : j) {
    Eigen::VectorXd r = vector_from_json(row);
    if (r.size() != first.size())
      throw IoError("matrix: ragged rows");
    m.row(at++) = r.transpose();
  }
  return m;
}

json support_to_json(const geom::SupportPolytope& p) {
  json j;
  j["dims"] = p.dims();
  j["directions"] = matrix_to_json(p.direction_set()->rows());
  j["values"] = vector_to_json(p.values());
  return j;
}

geom::SupportPolytope support_from_json(const json& j) {
  const std::string what = "support set";
  Eigen::MatrixXd rows = matrix_from_json(field(j, "directions", what));
  Eigen::VectorXd h = vector_from_json(field(j, "values", what));
  int dims = field(j, "dims", what).get<int>();
  if (rows.cols() != dims)
    throw IoError(what + ": direction width disagrees with dims");
  if (h.size() != rows.rows())
    throw IoError(what + ": value count disagrees with direction count");
  try {
    return geom::SupportPolytope(geom::DirectionSet::make_explicit(rows), h);
  } catch (const InvalidArgument& e) {
    throw IoError(what + ": " + e.what());
  }
}

json run_to_json(const plant::EpochRun& run, const json& config,
                 const std::string& config_hash, std::uint64_t seed) {
  json j;
  j["kind"] = "rpitube-run";
  j["version"] = 1;
  j["config"] = config;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["baseline_tube_x"] = vector_to_json(run.baseline_tube_x);

  json epochs = json::array();
  for (std::size_t q = 0; q < run.records.size(); ++q) {
    const plant::EpochRecord& rec = run.records[q];
    const lifted::FixedPointResult& fp = run.tubes[q];
    json e;
    e["index"] = rec.index;
    e["data_count"] = rec.data_count;
    e["iterations"] = rec.fp_iterations;
    e["gap"] = rec.fp_gap;
    e["conservatism"] = rec.conservatism;
    e["envelope"] = vector_to_json(rec.envelope);
    e["tube_x"] = vector_to_json(rec.tube_x);
    e["z_star"] = vector_to_json(fp.z_star.values());
    e["gaps"] = fp.gaps;
    e["hausdorff"] = fp.hausdorff;
    epochs.push_back(std::move(e));
  }
  j["epochs"] = std::move(epochs);
  return j;
}

RunArtifact run_from_json(const json& j) {
  const std::string what = "run record";
  if (field(j, "kind", what).get<std::string>() != "rpitube-run")
    throw IoError(what + ": unrecognized kind");
  if (field(j, "version", what).get<int>() != 1)
    throw IoError(what + ": unsupported version");

  RunArtifact art;
  art.config = field(j, "config", what);
  art.config_hash = field(j, "config_hash", what).get<std::string>();
  art.seed = field(j, "seed", what).get<std::uint64_t>();
  art.baseline_tube_x = vector_from_json(field(j, "baseline_tube_x", what));

  const json& epochs = field(j, "epochs", what);
  if (!epochs.is_array() || epochs.empty())
    throw IoError(what + ": needs at least one epoch");
  for (const auto& e : epochs) {
    EpochArtifact a;
    a.index = field(e, "index", what).get<int>();
    a.data_count = field(e, "data_count", what).get<int>();
    a.fp_iterations = field(e, "iterations", what).get<int>();
    a.fp_gap = field(e, "gap", what).get<double>();
    a.conservatism = field(e, "conservatism", what).get<double>();
    a.envelope = vector_from_json(field(e, "envelope", what));
    a.tube_x = vector_from_json(field(e, "tube_x", what));
    a.z_star = vector_from_json(field(e, "z_star", what));
    a.gaps = field(e, "gaps", what).get<std::vector<double>>();
    a.hausdorff = field(e, "hausdorff", what).get<std::vector<double>>();
    art.epochs.push_back(std::move(a));
  }
  return art;
}

std::string config_hash(const json& config) {
  const std::string canon = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

lifted::FixedPointResult tube_from_record(const RunArtifact& art,
                                          const plant::SynthesisSetup& setup) {
  const EpochArtifact& last = art.epochs.back();
  if (last.z_star.size() != setup.dirs_lifted->size() ||
      last.tube_x.size() != setup.dirs_x->size())
    throw IoError(
        "record: stored supports disagree with the config's direction "
        "families");
  geom::SupportPolytope z(setup.dirs_lifted, last.z_star);
  std::vector<int> coords_xv(setup.model.n() + setup.model.m());
  for (size_t i = 0; i < coords_xv.size(); ++i)
    coords_xv[i] = static_cast<int>(i);
  lifted::FixedPointResult tube{
      geom::SupportPolytope(setup.dirs_lifted, last.z_star),
      geom::SupportPolytope(setup.dirs_x, last.tube_x),
      geom::project(z, coords_xv, setup.dirs_xv)};
  tube.iterations = last.fp_iterations;
  tube.gaps = last.gaps;
  tube.hausdorff = last.hausdorff;
  tube.converged = true;
  return tube;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError(what + ": malformed JSON");
  return j;
}

std::string dataset_tsv(const gp::Dataset& data, const Eigen::MatrixXd& K,
                        std::uint64_t seed, const std::string& config_hash) {
  const int n = data.output_dim();
  const int m = data.input_dim() - n;
  if (K.rows() != m || K.cols() != n)
    throw InvalidArgument("dataset export: gain shape disagrees with data");

  std::string out;
  out += "# rpitube dataset, seed=" + std::to_string(seed) +
         " config=" + config_hash + "\n";
  out += "# columns: k";
  for (int i = 0; i < n; ++i) out += "\tx" + std::to_string(i);
  for (int i = 0; i < m; ++i) out += "\tu" + std::to_string(i);
  for (int i = 0; i < n; ++i) out += "\tw" + std::to_string(i);
  out += "\n";

  for (int k = 0; k < data.count(); ++k) {
    Eigen::VectorXd x = data.inputs.row(k).head(n).transpose();
    Eigen::VectorXd u = data.inputs.row(k).tail(m).transpose() + K * x;
    out += std::to_string(k);
    for (int i = 0; i < n; ++i) {
      out += '\t';
      append_double(out, x[i]);
    }
    for (int i = 0; i < m; ++i) {
      out += '\t';
      append_double(out, u[i]);
    }
    for (int i = 0; i < n; ++i) {
      out += '\t';
      append_double(out, data.outputs(k, i));
    }
    out += '\n';
  }
  return out;
}

}  // namespace rpitube::io
