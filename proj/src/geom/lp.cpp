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

#include "rpitube/geom/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "rpitube/common.hpp"

namespace rpitube::geom {
namespace {

constexpr double kPivTol = 1e-11;
constexpr double kRatioTieTol = 1e-12;

enum class RunOutcome {
  kOptimal,
  kDualInfeasible,   // phase 1 could not reach zero
  kDualUnbounded,    // phase 2 ray, i.e. the primal system is empty
  kRedundantRows,    // dependent coordinate rows found, caller removes and retries
};

struct RunResult {
  RunOutcome outcome = RunOutcome::kOptimal;
  double value = 0.0;
  Eigen::VectorXd y;                // multipliers per active row, unflipped
  std::vector<int> redundant_rows;  // positions within the active row set
  int iterations = 0;
};

// Revised simplex over  min f^T lambda  s.t.  A lambda = rhs, lambda >= 0,
// with A of size d x K. Columns K..K+d-1 are phase-1 artificials. The basis
// inverse is kept explicitly (d is small here, typically <= 12) and
// refactorized periodically from scratch to shed accumulated error.
class DualSimplex {
 public:
  DualSimplex(Eigen::MatrixXd A, Eigen::VectorXd rhs, const Eigen::VectorXd& f)
      : d_(static_cast<int>(A.rows())),
        K_(static_cast<int>(A.cols())),
        A_(std::move(A)),
        rhs_(std::move(rhs)),
        f_(f),
        flip_(Eigen::VectorXd::Ones(d_)) {
    for (int i = 0; i < d_; ++i) {
      if (rhs_[i] < 0.0) {
        rhs_[i] = -rhs_[i];
        A_.row(i) = -A_.row(i);
        flip_[i] = -1.0;
      }
    }
    basis_.resize(d_);
    in_basis_.assign(K_ + d_, 0);
    for (int i = 0; i < d_; ++i) {
      basis_[i] = K_ + i;
      in_basis_[K_ + i] = 1;
    }
    binv_ = Eigen::MatrixXd::Identity(d_, d_);
    xb_ = rhs_;
    double fscale = f_.size() > 0 ? f_.cwiseAbs().maxCoeff() : 0.0;
    cost_tol_ = 1e-9 * (1.0 + fscale);
    bland_after_ = 5 * (K_ + d_) + 50;
    iter_cap_ = 100 * (K_ + d_) + 1000;
  }

  RunResult run() {
    RunResult out;

    // Phase 1: drive the artificial variables to zero.
    if (!iterate(/*phase=*/1, out)) return out;
    double p1 = 0.0;
    for (int i = 0; i < d_; ++i) {
      if (basis_[i] >= K_) p1 += xb_[i];
    }
    double feas_tol = 1e-8 * (1.0 + rhs_.cwiseAbs().maxCoeff());
    if (p1 > feas_tol) {
      out.outcome = RunOutcome::kDualInfeasible;
      out.iterations = iterations_;
      return out;
    }
    if (!expel_artificials(out)) return out;

    // Phase 2: optimize the real objective.
    if (!iterate(/*phase=*/2, out)) return out;

    out.outcome = RunOutcome::kOptimal;
    out.value = 0.0;
    Eigen::VectorXd cb = Eigen::VectorXd::Zero(d_);
    for (int i = 0; i < d_; ++i) {
      if (basis_[i] < K_) {
        out.value += f_[basis_[i]] * xb_[i];
        cb[i] = f_[basis_[i]];
      }
    }
    Eigen::VectorXd y = binv_.transpose() * cb;
    out.y = flip_.cwiseProduct(y);
    out.iterations = iterations_;
    return out;
  }

 private:
  double cost_of(int col, int phase) const {
    if (phase == 1) return col >= K_ ? 1.0 : 0.0;
    return f_[col];
  }

  // Runs the pivot loop for one phase. Returns false when the caller should
  // stop with the outcome already written into `out`.
  bool iterate(int phase, RunResult& out) {
    Eigen::VectorXd cb(d_), y(d_), u(d_);
    for (;;) {
      if (++iterations_ > iter_cap_)
        throw Error("lp: iteration cap exceeded (unexpected cycling)");
      bool bland = iterations_ > bland_after_;

      for (int i = 0; i < d_; ++i) cb[i] = cost_of(basis_[i], phase);
      y.noalias() = binv_.transpose() * cb;

      // Pricing. Artificials never re-enter once they leave.
      int enter = -1;
      double best = -cost_tol_;
      for (int j = 0; j < K_; ++j) {
        if (in_basis_[j]) continue;
        double r = cost_of(j, phase) - y.dot(A_.col(j));
        if (bland) {
          if (r < -cost_tol_) {
            enter = j;
            break;
          }
        } else if (r < best) {
          best = r;
          enter = j;
        }
      }
      if (enter < 0) return true;  // phase optimal

      u.noalias() = binv_ * A_.col(enter);

      int leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (int i = 0; i < d_; ++i) {
        if (u[i] <= kPivTol) continue;
        double t = xb_[i] / u[i];
        if (t < theta - kRatioTieTol) {
          theta = t;
          leave = i;
        } else if (t < theta + kRatioTieTol && leave >= 0) {
          bool take = bland ? basis_[i] < basis_[leave] : u[i] > u[leave];
          if (take) {
            theta = std::min(theta, t);
            leave = i;
          }
        }
      }
      if (leave < 0) {
        // Descent ray: the dual is unbounded below, so the primal halfspace
        // system has no point. Phase 1 never lands here (its cost is >= 0).
        out.outcome = RunOutcome::kDualUnbounded;
        out.iterations = iterations_;
        return false;
      }
      pivot(enter, leave, u, theta);
    }
  }

  void pivot(int enter, int leave, const Eigen::VectorXd& u, double theta) {
    in_basis_[basis_[leave]] = 0;
    basis_[leave] = enter;
    in_basis_[enter] = 1;

    double piv = u[leave];
    binv_.row(leave) /= piv;
    for (int i = 0; i < d_; ++i) {
      if (i == leave) continue;
      binv_.row(i) -= u[i] * binv_.row(leave);
    }
    for (int i = 0; i < d_; ++i) {
      if (i == leave) continue;
      xb_[i] -= theta * u[i];
      if (xb_[i] < 0.0) xb_[i] = 0.0;
    }
    xb_[leave] = std::max(theta, 0.0);

    if (++pivots_since_refactor_ >= 60) refactorize();
  }

  void refactorize() {
    pivots_since_refactor_ = 0;
    Eigen::MatrixXd B(d_, d_);
    for (int i = 0; i < d_; ++i) {
      if (basis_[i] < K_) {
        B.col(i) = A_.col(basis_[i]);
      } else {
        B.col(i) = Eigen::VectorXd::Unit(d_, basis_[i] - K_);
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) return;  // keep the running inverse
    binv_ = lu.inverse();
    xb_.noalias() = binv_ * rhs_;
    xb_ = xb_.cwiseMax(0.0);
  }

  // Pivots leftover basic artificials (all at value ~0) out of the basis.
  // Rows that admit no real pivot column are linearly dependent; they are
  // reported so the caller can drop them and re-solve.
  bool expel_artificials(RunResult& out) {
    Eigen::VectorXd u(d_);
    for (int i = 0; i < d_; ++i) {
      if (basis_[i] < K_) continue;
      int enter = -1;
      double best = 1e-9;
      for (int j = 0; j < K_; ++j) {
        if (in_basis_[j]) continue;
        double v = std::abs(binv_.row(i).dot(A_.col(j)));
        if (v > best) {
          best = v;
          enter = j;
        }
      }
      if (enter < 0) {
        out.redundant_rows.push_back(i);
        continue;
      }
      u.noalias() = binv_ * A_.col(enter);
      pivot(enter, i, u, std::max(xb_[i] / u[i], 0.0));
    }
    if (!out.redundant_rows.empty()) {
      out.outcome = RunOutcome::kRedundantRows;
      out.iterations = iterations_;
      return false;
    }
    return true;
  }

  int d_;
  int K_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd f_;
  Eigen::VectorXd flip_;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  double cost_tol_ = 1e-9;
  int bland_after_ = 0;
  int iter_cap_ = 0;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
};

LpSolution solve(const Eigen::Ref<const Eigen::MatrixXd>& N,
                 const Eigen::Ref<const Eigen::VectorXd>& b,
                 const Eigen::Ref<const Eigen::VectorXd>& c,
                 bool feasibility_only) {
  const int K = static_cast<int>(N.rows());
  const int d = static_cast<int>(N.cols());
  if (b.size() != K) throw InvalidArgument("lp: offset length does not match row count");
  if (c.size() != d) throw InvalidArgument("lp: objective length does not match column count");

  LpSolution sol;
  if (d == 0) {
    bool ok = K == 0 || b.minCoeff() >= -1e-12;
    sol.status = ok ? LpStatus::kOptimal : LpStatus::kInfeasible;
    sol.value = 0.0;
    sol.point = Eigen::VectorXd(0);
    return sol;
  }
  if (K == 0) {
    if (c.cwiseAbs().maxCoeff() <= 0.0) {
      sol.status = LpStatus::kOptimal;
      sol.point = Eigen::VectorXd::Zero(d);
      return sol;
    }
    sol.status = LpStatus::kUnbounded;
    sol.value = std::numeric_limits<double>::infinity();
    return sol;
  }

  std::vector<int> active(d);
  for (int i = 0; i < d; ++i) active[i] = i;

  for (int round = 0; round <= d; ++round) {
    const int da = static_cast<int>(active.size());
    if (da == 0) {
      // Every coordinate row was dependent with a consistent objective, so
      // y = 0 attains the optimum.
      sol.status = LpStatus::kOptimal;
      sol.value = 0.0;
      sol.point = Eigen::VectorXd::Zero(d);
      return sol;
    }
    Eigen::MatrixXd A(da, K);
    Eigen::VectorXd rhs(da);
    for (int i = 0; i < da; ++i) {
      A.row(i) = N.col(active[i]).transpose();
      rhs[i] = c[active[i]];
    }
    DualSimplex simplex(std::move(A), std::move(rhs), b);
    RunResult r = simplex.run();
    sol.iterations += r.iterations;

    switch (r.outcome) {
      case RunOutcome::kRedundantRows: {
        std::vector<int> next;
        std::size_t k = 0;
        for (int i = 0; i < da; ++i) {
          if (k < r.redundant_rows.size() && r.redundant_rows[k] == i) {
            ++k;
            continue;
          }
          next.push_back(active[i]);
        }
        active = std::move(next);
        continue;
      }
      case RunOutcome::kDualUnbounded:
        sol.status = LpStatus::kInfeasible;
        return sol;
      case RunOutcome::kDualInfeasible: {
        if (feasibility_only)
          throw Error("lp: internal error, feasibility dual cannot be infeasible");
        LpSolution feas = lp_feasible(N, b);
        if (feas.status == LpStatus::kOptimal) {
          sol.status = LpStatus::kUnbounded;
          sol.value = std::numeric_limits<double>::infinity();
        } else {
          sol.status = LpStatus::kInfeasible;
        }
        return sol;
      }
      case RunOutcome::kOptimal: {
        sol.status = LpStatus::kOptimal;
        sol.value = r.value;
        sol.point = Eigen::VectorXd::Zero(d);
        for (int i = 0; i < da; ++i) sol.point[active[i]] = r.y[i];
        return sol;
      }
    }
  }
  throw Error("lp: row elimination failed to terminate");
}

}  // namespace

LpSolution lp_maximize(const Eigen::Ref<const Eigen::MatrixXd>& N,
                       const Eigen::Ref<const Eigen::VectorXd>& b,
                       const Eigen::Ref<const Eigen::VectorXd>& c) {
  return solve(N, b, c, /*feasibility_only=*/false);
}

LpSolution lp_feasible(const Eigen::Ref<const Eigen::MatrixXd>& N,
                       const Eigen::Ref<const Eigen::VectorXd>& b) {
  return solve(N, b, Eigen::VectorXd::Zero(N.cols()), /*feasibility_only=*/true);
}

}  // namespace rpitube::geom
