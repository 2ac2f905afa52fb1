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

#include "vnelab/induction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vnelab/error.hpp"

namespace vnelab {
namespace {

constexpr double kTraceFormTol = 1e-12;
constexpr double kRowSumTol = 1e-10;
constexpr double kWitnessTol = 1e-10;

struct KernelRow {
  Eigen::VectorXd k;
  double form_defect = 0.0;
  double imag = 0.0;
};

// Row gamma of K from both trace forms. `moved_p[s]` is sigma^Lambda_s(p).
KernelRow kernel_row(const CouplingRecord& c, const std::vector<AlgebraElement>& moved_p,
                     double trace_p, Element gamma) {
  const GroupPtr& g = c.gamma();
  const int m = c.lambda()->order();
  KernelRow row;
  row.k.resize(m);
  const AlgebraElement back = c.gamma_action.apply(g->inv(gamma), c.p);
  for (int s = 0; s < m; ++s) {
    const Complex first = trace(moved_p[s] * back) / trace_p;
    const Complex second = trace(c.gamma_action.apply(gamma, moved_p[s]) * c.p) / trace_p;
    row.k[s] = first.real();
    row.form_defect = std::max(row.form_defect, std::abs(first - second));
    row.imag = std::max(row.imag, std::abs(first.imag()));
  }
  return row;
}

void check_kernel(const InductionKernel& k) {
  std::ostringstream os;
  if (k.trace_form_defect > kTraceFormTol)
    os << "trace forms disagree by " << k.trace_form_defect;
  else if (k.imaginary_defect > kTraceFormTol)
    os << "kernel has imaginary part " << k.imaginary_defect;
  else if (k.min_entry() < -kTraceFormTol)
    os << "kernel has negative entry " << k.min_entry();
  else if (k.row_sum_defect() > kRowSumTol)
    os << "kernel rows sum to 1 only within " << k.row_sum_defect();
  else
    return;
  throw ValidationError("induction kernel: " + os.str());
}

}  // namespace

double InductionKernel::row_sum_defect() const {
  return (k.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

InductionKernel induction_kernel(const CouplingRecord& c, Execution exec) {
  const int n = c.gamma()->order();
  const int m = c.lambda()->order();
  const double trace_p = trace(c.p).real();
  std::vector<AlgebraElement> moved_p;
  moved_p.reserve(m);
  for (int s = 0; s < m; ++s) moved_p.push_back(c.lambda_action.apply(s, c.p));

  std::vector<KernelRow> rows(n);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int gamma = 0; gamma < n; ++gamma)
      rows[gamma] = kernel_row(c, moved_p, trace_p, gamma);
  } else {
    for (int gamma = 0; gamma < n; ++gamma)
      rows[gamma] = kernel_row(c, moved_p, trace_p, gamma);
  }

  InductionKernel out{c, Eigen::MatrixXd(n, m)};
  for (int gamma = 0; gamma < n; ++gamma) {
    out.k.row(gamma) = rows[gamma].k.transpose();
    out.trace_form_defect = std::max(out.trace_form_defect, rows[gamma].form_defect);
    out.imaginary_defect = std::max(out.imaginary_defect, rows[gamma].imag);
  }
  check_kernel(out);
  return out;
}

GroupFunction induce_multiplier(const InductionKernel& k, const GroupFunction& phi) {
  require_same_group(*k.lambda(), *phi.group, "induce_multiplier");
  return GroupFunction(k.gamma(), k.k.cast<Complex>() * phi.values);
}

GroupFunction adjoint_on_l1(const InductionKernel& k, const GroupFunction& psi) {
  require_same_group(*k.gamma(), *psi.group, "adjoint_on_l1");
  return GroupFunction(k.lambda(), k.k.transpose().cast<Complex>() * psi.values);
}

Complex InducedWitnesses::inner(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
  return (y.adjoint() * x).trace();
}

InducedWitnesses induce_witnesses(const InductionKernel& k, const GroupFunction& phi,
                                  const WitnessPair& w) {
  const CouplingRecord& c = k.coupling;
  require_same_group(*k.lambda(), *phi.group, "induce_witnesses");
  if (w.xi.rows() != phi.size() || w.eta.rows() != phi.size() ||
      w.xi.cols() != w.eta.cols())
    throw ShapeMismatch("induce_witnesses: witness families do not match the group");
  const double err = w.reproduction_error(phi);
  if (err > kWitnessTol) {
    std::ostringstream os;
    os << "induce_witnesses: witness pair reproduces phi only within " << err;
    throw InvalidArgument(os.str());
  }

  const int n = c.gamma()->order();
  const int m = c.lambda()->order();
  const double scale = 1.0 / std::sqrt(trace(c.p).real());
  std::vector<AlgebraElement> moved_p;
  for (int s = 0; s < m; ++s) moved_p.push_back(c.lambda_action.apply(s, c.p));

  InducedWitnesses out;
  out.base = w;
  for (Element gamma = 0; gamma < n; ++gamma) {
    Eigen::MatrixXcd coords(c.shape()->l2_dimension(), m);
    for (int s = 0; s < m; ++s)
      coords.col(s) = l2_coordinates(c.gamma_action.apply(gamma, moved_p[s]) * c.p);
    // sum_s coords_s (x) xi(s): column j of the result is sum_s coords_s xi(s)_j.
    out.xi_hat.push_back(scale * coords * w.xi);
    out.eta_hat.push_back(scale * coords * w.eta);
    out.sup_xi_hat = std::max(out.sup_xi_hat, out.xi_hat.back().norm());
    out.sup_eta_hat = std::max(out.sup_eta_hat, out.eta_hat.back().norm());
  }

  const GroupFunction phi_hat = induce_multiplier(k, phi);
  const GroupPtr& g = c.gamma();
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      const Complex ip = InducedWitnesses::inner(out.xi_hat[a], out.eta_hat[b]);
      out.identity_residual =
          std::max(out.identity_residual, std::abs(ip - phi_hat(g->mul(g->inv(b), a))));
    }
  return out;
}

double koopman_coefficient_residual(const InductionKernel& k, const GroupFunction& phi) {
  const CouplingRecord& c = k.coupling;
  const GroupFunction phi_hat = induce_multiplier(k, phi);
  const KoopmanMatrix km = koopman(c.gamma_action);
  const Eigen::VectorXcd theta = l2_coordinates(theta_embedding(c.lambda_action, c.p, phi));
  const Eigen::VectorXcd p = l2_coordinates(c.p);
  const double trace_p = trace(c.p).real();
  double worst = 0.0;
  for (Element gamma = 0; gamma < c.gamma()->order(); ++gamma) {
    // <a, b> = b^* a in orthonormal coordinates.
    const Complex coef = p.dot(km(gamma) * theta) / trace_p;
    worst = std::max(worst, std::abs(coef - phi_hat(gamma)));
  }
  return worst;
}

bool LemmaReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

void add_check(LemmaReport& r, std::string name, double value,
               std::optional<double> threshold) {
  const bool pass = !threshold || (std::isfinite(value) && value <= *threshold);
  r.checks.push_back({std::move(name), value, threshold, pass});
}

void add_failure(LemmaReport& r, std::string name, const std::string& why) {
  r.checks.push_back({name, std::nan(""), 0.0, false});
  r.notes.push_back(name + ": " + why);
}

}  // namespace

LemmaReport verify_lemma(const InductionKernel& k, const GroupFunction& phi, double tol,
                         const NormOptions& opts) {
  if (!(tol > 0.0)) throw InvalidArgument("verify_lemma: tolerance must be positive");
  require_same_group(*k.lambda(), *phi.group, "verify_lemma");
  const CouplingRecord& c = k.coupling;
  const GroupFunction phi_hat = induce_multiplier(k, phi);

  LemmaReport r;
  r.coupling = c.name;
  r.pairing = c.pairing;
  r.phi = phi.values;
  r.phi_hat = phi_hat.values;

  add_check(r, "kernel_trace_form_defect", k.trace_form_defect, kTraceFormTol);
  add_check(r, "kernel_row_sum_defect", k.row_sum_defect(), kRowSumTol);

  // One solve gives both the norm of phi and its witness pair.
  std::optional<WitnessPair> witnesses;
  try {
    witnesses = extract_witnesses(phi, opts, &r.b2_phi);
  } catch (const SolverFailure& e) {
    add_failure(r, "b2_norm_phi", e.what());
  }
  r.b2_phi_hat = b2_norm_certified(phi_hat, opts);
  if (!r.b2_phi_hat.optimal())
    add_failure(r, "b2_norm_phi_hat", r.b2_phi_hat.message);

  if (witnesses && r.b2_phi_hat.optimal()) {
    add_check(r, "b2_norm_phi", r.b2_phi.value, std::nullopt);
    add_check(r, "b2_norm_phi_hat", r.b2_phi_hat.value, std::nullopt);
    r.contractivity_margin = r.b2_phi.value - r.b2_phi_hat.value;
    add_check(r, "b2_contractivity_excess", -r.contractivity_margin, tol);
  }

  add_check(r, "identity_value_deviation", std::abs(phi_hat(0) - phi(0)), tol);
  add_check(r, "sup_norm_excess", phi_hat.sup_norm() - phi.sup_norm(), 1e-12);

  r.phi_positive_definite = is_positive_definite(phi, 1e-10);
  r.phi_hat_min_eigenvalue = gram_min_eigenvalue(phi_hat);
  if (r.phi_positive_definite)
    add_check(r, "positive_definite_deficit", -r.phi_hat_min_eigenvalue, tol);
  else
    add_check(r, "phi_hat_gram_min_eigenvalue", r.phi_hat_min_eigenvalue, std::nullopt);

  r.koopman_residual = koopman_coefficient_residual(k, phi);
  add_check(r, "koopman_coefficient_residual", r.koopman_residual, tol);

  // ||Phi^* delta_gamma||_Q <= ||delta_gamma||_Q for every basis vector.
  double worst_q = -std::numeric_limits<double>::infinity();
  bool q_ok = true;
  for (Element gamma = 0; gamma < k.gamma()->order() && q_ok; ++gamma) {
    const GroupFunction delta = GroupFunction::delta(k.gamma(), gamma);
    const NormCertificate lhs = q_norm_certified(adjoint_on_l1(k, delta), opts);
    const NormCertificate rhs = q_norm_certified(delta, opts);
    if (!lhs.optimal() || !rhs.optimal()) {
      add_failure(r, "q_adjoint_excess",
                  std::string("Q-norm solve failed: ") +
                      (lhs.optimal() ? rhs.message : lhs.message));
      q_ok = false;
      break;
    }
    worst_q = std::max(worst_q, lhs.value - rhs.value);
  }
  if (q_ok) {
    r.q_adjoint_margin = -worst_q;
    add_check(r, "q_adjoint_excess", worst_q, tol);
  }

  if (witnesses) {
    const InducedWitnesses iw = induce_witnesses(k, phi, *witnesses);
    r.witness_residual = iw.identity_residual;
    add_check(r, "witness_identity_residual", iw.identity_residual, kWitnessTol);
    add_check(r, "witness_sup_xi_excess", iw.sup_xi_hat - witnesses->sup_xi, kWitnessTol);
    add_check(r, "witness_sup_eta_excess", iw.sup_eta_hat - witnesses->sup_eta,
              kWitnessTol);
  }
  return r;
}

}  // namespace vnelab
