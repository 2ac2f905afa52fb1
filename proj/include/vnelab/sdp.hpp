// Copyright 2026 The vnelab Authors.
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

// Dense primal-dual interior-point solver for block-diagonal semidefinite
// programs in standard form:
//
//   primal:  minimize <C, X>   s.t. <A_i, X> = b_i,  X >= 0
//   dual:    maximize b^T y    s.t. sum_i y_i A_i + S = C,  S >= 0
//
// X, S and the data are block diagonal. A block of positive size n is a dense
// n x n PSD block; a block of negative size -n is a nonnegative orthant of
// dimension n (a diagonal block). Search directions use Nesterov-Todd scaling
// with a Mehrotra predictor-corrector step. Starting points are fixed, so a
// solve is fully deterministic.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vnelab::sdp {

/// One entry of a symmetric sparse matrix. Only row <= col is stored; the
/// mirror entry is implied. Orthant blocks use row == col == index.
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct Constraint {
  std::vector<Entry> entries;
  double rhs = 0.0;
};

/// Block-diagonal matrix. PSD blocks are n x n; orthant blocks are n x 1.
struct BlockMatrix {
  std::vector<Eigen::MatrixXd> blocks;
};

struct SdpProblem {
  /// > 0: PSD block of that size; < 0: orthant of that dimension.
  std::vector<int> block_sizes;
  std::vector<Entry> objective;
  std::vector<Constraint> constraints;

  /// Single PSD block with dense symmetric data.
  static SdpProblem dense(const Eigen::MatrixXd& c,
                          const std::vector<Eigen::MatrixXd>& a,
                          const Eigen::VectorXd& b);

  int num_constraints() const { return static_cast<int>(constraints.size()); }

  /// Throws InvalidArgument on out-of-range entries, lower-triangle entries,
  /// an empty constraint list or zero-size blocks.
  void validate() const;
};

enum class Status { kOptimal, kInfeasible, kNumericalFailure };

const char* to_string(Status s);

struct Options {
  double tol = 1e-7;
  int max_iter = 200;
  /// Dual (primal) objective beyond +bound (-bound) is read as primal (dual)
  /// infeasibility.
  double infeasibility_bound = 1e8;
};

struct SdpSolution {
  Status status = Status::kNumericalFailure;
  BlockMatrix x;
  Eigen::VectorXd y;
  BlockMatrix s;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  /// |primal - dual objective|.
  double gap = 0.0;
  /// max_i |<A_i, X> - b_i|.
  double primal_residual = 0.0;
  /// max entry of |C - S - sum y_i A_i|.
  double dual_residual = 0.0;
  int iterations = 0;
  std::vector<double> gap_history;
  std::string message;
};

SdpSolution solve(const SdpProblem& problem, const Options& options = {});

/// <A, X> for a sparse symmetric A.
double sparse_inner(const std::vector<Entry>& a, const BlockMatrix& x);

/// Smallest eigenvalue over all blocks (orthant entries count as eigenvalues).
double min_eigenvalue(const BlockMatrix& m);

}  // namespace vnelab::sdp
