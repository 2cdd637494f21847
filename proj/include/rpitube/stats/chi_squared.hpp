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

#ifndef RPITUBE_STATS_CHI_SQUARED_HPP_
#define RPITUBE_STATS_CHI_SQUARED_HPP_

namespace rpitube::stats {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// CDF of the chi-squared distribution with n degrees of freedom.
double chi_squared_cdf(int n, double x);

/// Quantile c with P[X <= c] = prob for X ~ chi-squared(n). Solved by
/// bracketed bisection on the CDF to 1e-10 absolute; probabilities above
/// one half are resolved through the upper tail so values very close to 1
/// (tiny per-anchor risk shares) stay accurate.
double chi_squared_quantile(int n, double prob);

}  // namespace rpitube::stats

#endif  // RPITUBE_STATS_CHI_SQUARED_HPP_
