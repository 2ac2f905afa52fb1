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

// Herz-Schur multipliers on finite groups.
//
// The B2 norm of phi is the least t for which the Hermitian block matrix
//
//     [ S        A_phi ]
//     [ A_phi^*  T     ]  >= 0,   diag(S) <= t,  diag(T) <= t,
//
// is feasible, where A_phi(s, t) = phi(t^-1 s). The program is invariant under
// simultaneous left translation of rows and columns, so S and T may be taken
// to be group matrices themselves; that is the program we solve. The Q norm
// is the dual norm, computed as the maximum of Re sum_s psi(s) u(s) over the
// B2 unit ball. The ball is closed under multiplication by unimodular
// scalars, so the real part attains the modulus.

#pragma once

#include <mutex>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vnelab/group.hpp"
#include "vnelab/sdp.hpp"

namespace vnelab {

struct NormOptions {
  double tol = 1e-7;
  int max_iter = 200;
};

/// A norm value with the solver certificate that produced it.
struct NormCertificate {
  double value = 0.0;
  sdp::Status status = sdp::Status::kNumericalFailure;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::string message;

  bool optimal() const { return status == sdp::Status::kOptimal; }
};

/// The matrix [phi(t^-1 s)]_{s,t}. This is both the Gram matrix of phi and the
/// off-diagonal block of the B2 program.
Eigen::MatrixXcd group_matrix(const GroupFunction& phi);

NormCertificate b2_norm_certified(const GroupFunction& phi,
                                  const NormOptions& opts = {});
/// Throws SolverFailure unless the solve is optimal.
double b2_norm(const GroupFunction& phi, double tol = 1e-7);

/// The same norm from the unsymmetrized program (S, T arbitrary Hermitian).
/// Quadratically more variables; meant for cross-checks on small groups.
NormCertificate b2_norm_full_program(const GroupFunction& phi,
                                     const NormOptions& opts = {});

NormCertificate q_norm_certified(const GroupFunction& psi,
                                 const NormOptions& opts = {});
double q_norm(const GroupFunction& psi, double tol = 1e-7);

/// sum_chi |phi^(chi)| with phi^(chi) = (1/|G|) sum_s phi(s) conj(chi(s)).
/// Abelian groups only; used as an independent check of b2_norm.
double abelian_b2_oracle(const GroupFunction& phi);

/// max_chi |sum_s psi(s) chi(s)|, the Q norm on an abelian group.
double abelian_q_oracle(const GroupFunction& psi);

/// Gram matrix [phi(t^-1 s)] has minimum eigenvalue >= -tol (and is
/// Hermitian to within max(tol, 1e-12)).
bool is_positive_definite(const GroupFunction& phi, double tol = 1e-10);

/// Minimum eigenvalue of the Hermitian part of the Gram matrix.
double gram_min_eigenvalue(const GroupFunction& phi);

/// phi(t^-1 s) = <xi(s), eta(t)>, row s of `xi` being xi(s).
struct WitnessPair {
  Eigen::MatrixXcd xi;
  Eigen::MatrixXcd eta;
  double sup_xi = 0.0;
  double sup_eta = 0.0;

  int dimension() const { return static_cast<int>(xi.cols()); }
  /// max_{s,t} |phi(t^-1 s) - <xi(s), eta(t)>|.
  double reproduction_error(const GroupFunction& phi) const;
  /// max row norms recomputed from the stored vectors.
  std::pair<double, double> recompute_sup_norms() const;
};

/// Factor the Gram matrix as F F^* and use the rows of F for both families.
/// Throws InvalidArgument if phi is not positive definite at tol 1e-10.
WitnessPair gns_witnesses(const GroupFunction& phi);

/// Witnesses read off the optimal B2 certificate, rebalanced so that
/// sup_xi = sup_eta. Throws SolverFailure if the solve is not optimal. The
/// certificate of the underlying solve is stored in `cert` when given.
WitnessPair extract_witnesses(const GroupFunction& phi, const NormOptions& opts = {},
                              NormCertificate* cert = nullptr);

/// Entries with independent standard normal real and imaginary parts.
GroupFunction random_multiplier(const GroupPtr& g, std::mt19937_64& rng);

/// phi(g) = <lambda_g v, v> for the left regular representation and a random
/// unit vector v; normalized so phi(e) = 1.
GroupFunction random_positive_definite(const GroupPtr& g, std::mt19937_64& rng);

/// A group function with lazily computed, write-once norms.
class Multiplier {
 public:
  explicit Multiplier(GroupFunction f, NormOptions opts = {})
      : function_(std::move(f)), opts_(opts) {}

  const GroupFunction& function() const { return function_; }
  const NormOptions& options() const { return opts_; }

  const NormCertificate& b2() const;
  const NormCertificate& q() const;
  const WitnessPair& witnesses() const;

 private:
  GroupFunction function_;
  NormOptions opts_;
  mutable std::once_flag b2_once_, q_once_, witness_once_;
  mutable std::optional<NormCertificate> b2_;
  mutable std::optional<NormCertificate> q_;
  mutable std::optional<WitnessPair> witnesses_;
};

}  // namespace vnelab
