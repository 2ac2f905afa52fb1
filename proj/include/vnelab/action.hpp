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

// Trace-preserving group actions on multi-matrix algebras, fundamental
// domains, the equivariant embedding theta_p of l^inf(group), the Koopman
// representation, and couplings between two groups.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vnelab/algebra.hpp"
#include "vnelab/group.hpp"

namespace vnelab {

/// Tolerance used for every structural check (unitarity, commuting actions,
/// partitions of unity).
inline constexpr double kStructureTol = 1e-10;

/// sigma_g(x)_{perm_g(j)} = U_{g,perm_g(j)} x_j U_{g,perm_g(j)}^*.
///
/// perms[g][j] is the block that source block j is carried to, and
/// unitaries[g][k] is the unitary acting on target block k.
class TraceAction {
 public:
  /// Validates at kStructureTol; throws ValidationError when the data does not
  /// define a trace-preserving action.
  TraceAction(GroupPtr group, ShapePtr shape, std::vector<std::vector<int>> perms,
              std::vector<std::vector<Eigen::MatrixXcd>> unitaries);

  /// Action by block permutations only (all unitaries are identities).
  static TraceAction permutation(GroupPtr group, ShapePtr shape,
                                 std::vector<std::vector<int>> perms);

  /// Single-block action x -> U_g x U_g^*.
  static TraceAction inner(GroupPtr group, ShapePtr shape,
                           std::vector<Eigen::MatrixXcd> unitaries);

  const GroupPtr& group() const { return group_; }
  const ShapePtr& shape() const { return shape_; }
  const std::vector<int>& perm(Element g) const { return perms_[g]; }
  const Eigen::MatrixXcd& unitary(Element g, int k) const {
    return unitaries_[g][k];
  }

  AlgebraElement apply(Element g, const AlgebraElement& x) const;

  /// Koopman matrix of g in orthonormal L^2 coordinates.
  Eigen::MatrixXcd koopman_matrix(Element g) const;

 private:
  void validate() const;

  GroupPtr group_;
  ShapePtr shape_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<Eigen::MatrixXcd>> unitaries_;
};

/// The Koopman representation: one unitary on L^2 per group element.
struct KoopmanMatrix {
  GroupPtr group;
  std::vector<Eigen::MatrixXcd> matrices;

  const Eigen::MatrixXcd& operator()(Element g) const { return matrices[g]; }
};

KoopmanMatrix koopman(const TraceAction& action);

/// Defects of the Koopman representation: unitarity, multiplicativity, and
/// sigma_g(x) = K_g x K_{g^-1} on matrix units. All are max-norm errors.
struct KoopmanDefects {
  double unitarity = 0.0;
  double multiplicativity = 0.0;
  double implements_action = 0.0;
};

KoopmanDefects koopman_defects(const TraceAction& action, const KoopmanMatrix& k);

/// trace(K_g) for every g; for actions with a fundamental domain this is
/// dim L^2 at the identity and zero elsewhere.
Eigen::VectorXcd koopman_character(const KoopmanMatrix& k);

/// || sum_s sigma_s(p) - 1 || (operator norm).
double partition_defect(const TraceAction& action, const AlgebraElement& p);

bool is_fundamental_domain(const TraceAction& action, const AlgebraElement& p,
                           double tol);

/// theta_p(f) = sum_s f(s) sigma_s(p). Throws ValidationError when p is not a
/// fundamental domain at kStructureTol.
AlgebraElement theta_embedding(const TraceAction& action, const AlgebraElement& p,
                               const GroupFunction& f);

/// max over lambda, t of || sigma_lambda(theta_p(delta_t)) - theta_p(delta_{lambda t}) ||.
double equivariance_defect(const TraceAction& action, const AlgebraElement& p);

/// Max-norm distance between sigma_g o tau_h and tau_h o sigma_g over all
/// pairs, measured on Koopman matrices.
double commutation_defect(const TraceAction& a, const TraceAction& b);

/// Two commuting trace-preserving actions on one algebra with finite-trace
/// fundamental domains q (for gamma) and p (for lambda).
struct CouplingRecord {
  std::string name;
  TraceAction gamma_action;
  TraceAction lambda_action;
  AlgebraElement q;
  AlgebraElement p;
  /// Character pairing used by the W*-coupling constructor, echoed in reports.
  std::optional<std::vector<int>> pairing;

  /// Validates every coupling invariant at kStructureTol; throws
  /// ValidationError with the failing quantity.
  static CouplingRecord make(std::string name, TraceAction gamma,
                             TraceAction lambda, AlgebraElement q,
                             AlgebraElement p,
                             std::optional<std::vector<int>> pairing = std::nullopt);

  const GroupPtr& gamma() const { return gamma_action.group(); }
  const GroupPtr& lambda() const { return lambda_action.group(); }
  const ShapePtr& shape() const { return gamma_action.shape(); }
};

/// Same coupling with a different lambda fundamental domain (validated).
CouplingRecord with_lambda_domain(const CouplingRecord& c, AlgebraElement p);

struct CouplingDiagnostics {
  double commutation = 0.0;
  double q_partition = 0.0;
  double p_partition = 0.0;
  bool q_projection = false;
  bool p_projection = false;
  double trace_q = 0.0;
  double trace_p = 0.0;
};

CouplingDiagnostics diagnose(const CouplingRecord& c);

/// Tr(q) / Tr(p).
double coupling_index(const CouplingRecord& c);

/// Exact index as a reduced fraction when the coupling lives on blocks of
/// equal weight and q, p are diagonal 0/1 projections; nullopt otherwise.
std::optional<std::pair<long long, long long>> exact_coupling_index(
    const CouplingRecord& c);

/// l^inf(G x H) with unit weights, G translating the first coordinate and H
/// the second; q = 1_{{e} x H}, p = 1_{G x {e}}.
CouplingRecord build_me_product_coupling(const GroupPtr& g, const GroupPtr& h);

/// l^inf(G) with G acting by left translation f(g^-1 x) and by right
/// translation f(x t); q = p = 1_{e}.
CouplingRecord build_diagonal_coupling(const GroupPtr& g);

/// B(l^2 H) for abelian G, H of equal order n. H acts by conjugation with the
/// right regular representation rho; G acts by conjugation with
/// sum_j chi_j(gamma) P_{pairing[j]}, P_eta = (1/n) sum_t eta(t) rho_t.
/// q = p = rank-one projection onto delta_e. Empty pairing means identity.
CouplingRecord build_wstar_coupling(const GroupPtr& g, const GroupPtr& h,
                                    std::vector<int> pairing = {});

/// The G-side unitaries gamma -> theta(lambda_gamma) of the W*-coupling.
std::vector<Eigen::MatrixXcd> wstar_gamma_unitaries(const GroupPtr& g,
                                                    const GroupPtr& h,
                                                    const std::vector<int>& pairing);

}  // namespace vnelab
