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

// Induction of multipliers through a coupling. With p the Lambda-fundamental
// domain, a function phi on Lambda is sent to
//
//   phi^(gamma) = Tr(sigma_gamma(theta_p(phi)) p) / Tr(p) = sum_s K(gamma, s) phi(s),
//
// K(gamma, s) = Tr(sigma_s(p) sigma_{gamma^-1}(p)) / Tr(p). K is row
// stochastic, so the map is a contraction for the sup norm, and its transpose
// is the pre-adjoint on l^1(Gamma).

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnelab/action.hpp"
#include "vnelab/multiplier.hpp"

namespace vnelab {

enum class Execution { kSerial, kParallel };

struct InductionKernel {
  CouplingRecord coupling;
  /// |Gamma| x |Lambda|.
  Eigen::MatrixXd k;
  /// max |K - K'| where K' uses the other trace form
  /// Tr(sigma_gamma(sigma_s(p)) p) / Tr(p).
  double trace_form_defect = 0.0;
  /// Largest imaginary part seen while evaluating the traces.
  double imaginary_defect = 0.0;

  const GroupPtr& gamma() const { return coupling.gamma(); }
  const GroupPtr& lambda() const { return coupling.lambda(); }

  /// min entry of K (nonnegative up to rounding).
  double min_entry() const { return k.minCoeff(); }
  /// max_gamma |sum_s K(gamma, s) - 1|.
  double row_sum_defect() const;
};

/// Builds K and cross-checks both trace forms; throws ValidationError if they
/// disagree beyond 1e-12, an entry is below -1e-12 or a row sum is off by more
/// than 1e-10. The parallel path distributes rows over OpenMP threads.
InductionKernel induction_kernel(const CouplingRecord& c,
                                 Execution exec = Execution::kSerial);

/// sum_s K(gamma, s) phi(s).
GroupFunction induce_multiplier(const InductionKernel& k, const GroupFunction& phi);

/// (Phi^* psi)(s) = sum_gamma psi(gamma) K(gamma, s).
GroupFunction adjoint_on_l1(const InductionKernel& k, const GroupFunction& psi);

/// xi^(gamma) = Tr(p)^{-1/2} sum_s [sigma_gamma(sigma_s(p)) p] (x) xi(s), stored
/// as an L2-dimension x d matrix whose columns are the C^d coordinates.
struct InducedWitnesses {
  WitnessPair base;
  std::vector<Eigen::MatrixXcd> xi_hat;
  std::vector<Eigen::MatrixXcd> eta_hat;
  double sup_xi_hat = 0.0;
  double sup_eta_hat = 0.0;
  /// max |<xi^(g1), eta^(g2)> - phi^(g2^-1 g1)|.
  double identity_residual = 0.0;

  /// <X, Y> = trace(Y^* X), the inner product of L^2 (x) C^d.
  static Complex inner(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y);
};

/// Throws InvalidArgument if `w` does not reproduce `phi` within 1e-10.
InducedWitnesses induce_witnesses(const InductionKernel& k, const GroupFunction& phi,
                                  const WitnessPair& w);

/// One numeric check in a report: passes when value <= threshold, or, for
/// informational entries (threshold unset), always.
struct Check {
  std::string quantity;
  double value = 0.0;
  std::optional<double> threshold;
  bool pass = true;
};

struct LemmaReport {
  std::string coupling;
  std::optional<std::vector<int>> pairing;
  Eigen::VectorXcd phi;
  Eigen::VectorXcd phi_hat;
  NormCertificate b2_phi;
  NormCertificate b2_phi_hat;
  double contractivity_margin = 0.0;
  bool phi_positive_definite = false;
  double phi_hat_min_eigenvalue = 0.0;
  double koopman_residual = 0.0;
  double q_adjoint_margin = 0.0;
  double witness_residual = 0.0;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

/// Runs every finite-scale check of the induction lemma on one multiplier.
/// Failures are recorded in the report; solver failures become failed checks.
LemmaReport verify_lemma(const InductionKernel& k, const GroupFunction& phi, double tol,
                         const NormOptions& opts = {});

/// phi^(gamma) recomputed as (1/Tr p) <K_gamma theta_p(phi), p> in L^2 through
/// the Koopman matrices; returns the max deviation from induce_multiplier.
double koopman_coefficient_residual(const InductionKernel& k, const GroupFunction& phi);

}  // namespace vnelab
