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

#ifndef RPITUBE_GP_DATASET_HPP_
#define RPITUBE_GP_DATASET_HPP_

#include <Eigen/Core>

#include "rpitube/common.hpp"

namespace rpitube::gp {

/// Regression data: one row per sample. Inputs are the stacked state/input
/// pairs z = (x, u), outputs are the one-step residuals the regressor
/// learns, and times carry the absolute timestamp of each sample for the
/// periodic kernel factor.
struct Dataset {
  Eigen::MatrixXd inputs;   // N x (n + m)
  Eigen::VectorXd times;    // N
  Eigen::MatrixXd outputs;  // N x n

  int count() const { return static_cast<int>(inputs.rows()); }
  int input_dim() const { return static_cast<int>(inputs.cols()); }
  int output_dim() const { return static_cast<int>(outputs.cols()); }

  static Dataset empty(int input_dim, int output_dim) {
    Dataset d;
    d.inputs.resize(0, input_dim);
    d.times.resize(0);
    d.outputs.resize(0, output_dim);
    return d;
  }

  void validate() const {
    if (inputs.rows() != outputs.rows() || inputs.rows() != times.size())
      throw InvalidArgument("dataset: row counts disagree");
    if (!inputs.allFinite() || !outputs.allFinite() || !times.allFinite())
      throw InvalidArgument("dataset: non-finite entry");
  }

  /// Row-wise concatenation; dimensions must match.
  Dataset appended(const Dataset& more) const {
    if (more.input_dim() != input_dim() || more.output_dim() != output_dim())
      throw InvalidArgument("dataset: append dimension mismatch");
    Dataset out;
    out.inputs.resize(count() + more.count(), input_dim());
    out.inputs << inputs, more.inputs;
    out.times.resize(count() + more.count());
    out.times << times, more.times;
    out.outputs.resize(count() + more.count(), output_dim());
    out.outputs << outputs, more.outputs;
    return out;
  }
};

}  // namespace rpitube::gp

#endif  // RPITUBE_GP_DATASET_HPP_
