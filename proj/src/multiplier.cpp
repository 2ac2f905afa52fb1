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

#include "vnelab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vnelab/error.hpp"

namespace vnelab {
namespace {

// Sparse Hermitian matrix; only a <= b is stored, the (b, a) entry is the
// conjugate.
struct HermEntry {
  int a;
  int b;
  Complex v;
};
using Herm = std::vector<HermEntry>;

// Linear matrix inequality in the dual form of the solver:
//
//   maximize  sum_k obj_k y_k
//   s.t.      Z(y) = Z0 + sum_k y_k Z_k >= 0   (N x N Hermitian)
//             w(y) = w0 + sum_k y_k w_k >= 0   (orthant)
//
// The Hermitian block is realified as [[Re, -Im], [Im, Re]].
class LmiBuilder {
 public:
  LmiBuilder(int n_complex, int n_orthant)
      : n_(n_complex), m_(n_orthant), w0_(n_orthant, 0.0) {}

  int add_variable(double objective) {
    vars_.push_back({{}, {}, objective});
    return static_cast<int>(vars_.size()) - 1;
  }
  void add_term(int var, const Herm& h) {
    auto& t = vars_[var].herm;
    t.insert(t.end(), h.begin(), h.end());
  }
  void add_orthant_term(int var, int row, double c) {
    vars_[var].orth.push_back({row, c});
  }
  void add_constant(const Herm& h) { z0_.insert(z0_.end(), h.begin(), h.end()); }
  void set_orthant_constant(int row, double c) { w0_[row] = c; }

  // C = (Z0, w0); A_k = -(Z_k, w_k); b = obj.
  sdp::SdpProblem build() const {
    sdp::SdpProblem prob;
    prob.block_sizes = {2 * n_, -m_};
    prob.objective = realify(z0_, 1.0);
    for (int r = 0; r < m_; ++r)
      if (w0_[r] != 0.0) prob.objective.push_back({1, r, r, w0_[r]});
    for (const auto& v : vars_) {
      sdp::Constraint c;
      c.entries = realify(v.herm, -1.0);
      for (auto [row, coef] : v.orth) c.entries.push_back({1, row, row, -coef});
      c.rhs = v.objective;
      prob.constraints.push_back(std::move(c));
    }
    return prob;
  }

  // Z from the solver's slack block, symmetrizing the realification.
  Eigen::MatrixXcd complex_slack(const sdp::SdpSolution& sol) const {
    const Eigen::MatrixXd& y = sol.s.blocks[0];
    Eigen::MatrixXd re = 0.5 * (y.topLeftCorner(n_, n_) + y.bottomRightCorner(n_, n_));
    Eigen::MatrixXd im = 0.5 * (y.bottomLeftCorner(n_, n_) - y.topRightCorner(n_, n_));
    Eigen::MatrixXcd z(n_, n_);
    z.real() = re;
    z.imag() = im;
    return z;
  }

 private:
  struct Var {
    Herm herm;
    std::vector<std::pair<int, double>> orth;
    double objective;
  };

  std::vector<sdp::Entry> realify(const Herm& h, double scale) const {
    std::vector<sdp::Entry> out;
    out.reserve(4 * h.size());
    for (const auto& e : h) {
      const double re = scale * e.v.real(), im = scale * e.v.imag();
      if (e.a == e.b) {
        if (re != 0.0) {
          out.push_back({0, e.a, e.a, re});
          out.push_back({0, n_ + e.a, n_ + e.a, re});
        }
        continue;
      }
      if (re != 0.0) {
        out.push_back({0, e.a, e.b, re});
        out.push_back({0, n_ + e.a, n_ + e.b, re});
      }
      if (im != 0.0) {
        out.push_back({0, e.a, n_ + e.b, -im});
        out.push_back({0, e.b, n_ + e.a, im});
      }
    }
    return out;
  }

  int n_;
  int m_;
  std::vector<Var> vars_;
  Herm z0_;
  std::vector<double> w0_;
};

// Entries (s, t) with t^-1 s = g, shifted to (row0 + s, col0 + t). Kept only
// when the shifted position is in the upper triangle; callers guarantee the
// blocks they pass are Hermitian so nothing is lost.
Herm group_matrix_entries(const FiniteGroup& g, Element x, Complex c, int row0,
                          int col0) {
  Herm h;
  for (int t = 0; t < g.order(); ++t) {
    const int s = g.mul(t, x);
    const int r = row0 + s, k = col0 + t;
    if (r <= k) h.push_back({r, k, c});
  }
  return h;
}

// Adds n real variables parametrizing the Hermitian group matrices
// sum_g c(g) M_g placed at diagonal offset `off`. Returns the variable index
// of the coefficient at the identity.
int add_invariant_block(LmiBuilder& lmi, const FiniteGroup& g, int off) {
  int identity_var = -1;
  for (Element x = 0; x < g.order(); ++x) {
    const Element xi = g.inv(x);
    if (xi < x) continue;
    if (xi == x) {
      const int v = lmi.add_variable(0.0);
      lmi.add_term(v, group_matrix_entries(g, x, 1.0, off, off));
      if (x == g.identity()) identity_var = v;
      continue;
    }
    const Complex i(0.0, 1.0);
    const int a = lmi.add_variable(0.0);
    lmi.add_term(a, group_matrix_entries(g, x, 1.0, off, off));
    lmi.add_term(a, group_matrix_entries(g, xi, 1.0, off, off));
    const int b = lmi.add_variable(0.0);
    lmi.add_term(b, group_matrix_entries(g, x, i, off, off));
    lmi.add_term(b, group_matrix_entries(g, xi, -i, off, off));
  }
  return identity_var;
}

NormCertificate certificate(const sdp::SdpSolution& sol, double value) {
  NormCertificate c;
  c.value = value;
  c.status = sol.status;
  c.gap = sol.gap;
  c.primal_residual = sol.primal_residual;
  c.dual_residual = sol.dual_residual;
  c.iterations = sol.iterations;
  c.message = sol.message;
  return c;
}

void require_optimal(const NormCertificate& c, const char* what) {
  if (c.optimal()) return;
  std::ostringstream os;
  os << what << ": solver status " << sdp::to_string(c.status) << " after "
     << c.iterations << " iterations (gap " << c.gap << ", primal residual "
     << c.primal_residual << ", dual residual " << c.dual_residual << ")";
  if (!c.message.empty()) os << ": " << c.message;
  throw SolverFailure(os.str());
}

void check_options(const NormOptions& o) {
  if (!(o.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (o.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
}

sdp::Options solver_options(const NormOptions& o) {
  sdp::Options s;
  s.tol = o.tol;
  s.max_iter = o.max_iter;
  return s;
}

// The symmetry-reduced B2 program. Variable 0 is t.
struct B2Program {
  LmiBuilder lmi;
  sdp::SdpProblem problem;
};

B2Program b2_program(const GroupFunction& phi) {
  const FiniteGroup& g = *phi.group;
  const int n = g.order();
  LmiBuilder lmi(2 * n, 2);
  const int t = lmi.add_variable(-1.0);
  lmi.add_orthant_term(t, 0, 1.0);
  lmi.add_orthant_term(t, 1, 1.0);
  const int se = add_invariant_block(lmi, g, 0);
  const int te = add_invariant_block(lmi, g, n);
  lmi.add_orthant_term(se, 0, -1.0);
  lmi.add_orthant_term(te, 1, -1.0);
  Herm a;
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < n; ++u) a.push_back({s, n + u, phi(g.mul(g.inv(u), s))});
  lmi.add_constant(a);
  auto prob = lmi.build();
  return {std::move(lmi), std::move(prob)};
}

}  // namespace

Eigen::MatrixXcd group_matrix(const GroupFunction& phi) {
  const FiniteGroup& g = *phi.group;
  const int n = g.order();
  Eigen::MatrixXcd m(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) m(s, t) = phi(g.mul(g.inv(t), s));
  return m;
}

NormCertificate b2_norm_certified(const GroupFunction& phi, const NormOptions& opts) {
  check_options(opts);
  auto prog = b2_program(phi);
  auto sol = sdp::solve(prog.problem, solver_options(opts));
  // -b^T y = t: a feasible t is an upper bound for the norm.
  return certificate(sol, -sol.dual_objective);
}

double b2_norm(const GroupFunction& phi, double tol) {
  auto c = b2_norm_certified(phi, {tol, 200});
  require_optimal(c, "b2_norm");
  return c.value;
}

NormCertificate b2_norm_full_program(const GroupFunction& phi, const NormOptions& opts) {
  check_options(opts);
  const FiniteGroup& g = *phi.group;
  const int n = g.order();
  LmiBuilder lmi(2 * n, 2 * n);
  const int t = lmi.add_variable(-1.0);
  for (int r = 0; r < 2 * n; ++r) lmi.add_orthant_term(t, r, 1.0);
  const Complex i(0.0, 1.0);
  for (int off : {0, n}) {
    for (int a = 0; a < n; ++a) {
      const int d = lmi.add_variable(0.0);
      lmi.add_term(d, {{off + a, off + a, 1.0}});
      lmi.add_orthant_term(d, off + a, -1.0);
      for (int b = a + 1; b < n; ++b) {
        lmi.add_term(lmi.add_variable(0.0), {{off + a, off + b, 1.0}});
        lmi.add_term(lmi.add_variable(0.0), {{off + a, off + b, i}});
      }
    }
  }
  Herm a;
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < n; ++u) a.push_back({s, n + u, phi(g.mul(g.inv(u), s))});
  lmi.add_constant(a);
  auto sol = sdp::solve(lmi.build(), solver_options(opts));
  return certificate(sol, -sol.dual_objective);
}

NormCertificate q_norm_certified(const GroupFunction& psi, const NormOptions& opts) {
  check_options(opts);
  const FiniteGroup& g = *psi.group;
  const int n = g.order();
  LmiBuilder lmi(2 * n, 2);
  const Complex i(0.0, 1.0);
  // u(x) = a + ib enters the off-diagonal block as u(x) M_x; the objective is
  // Re sum psi(x) u(x) = Re psi * a - Im psi * b.
  for (Element x = 0; x < n; ++x) {
    const int a = lmi.add_variable(psi(x).real());
    lmi.add_term(a, group_matrix_entries(g, x, 1.0, 0, n));
    const int b = lmi.add_variable(-psi(x).imag());
    lmi.add_term(b, group_matrix_entries(g, x, i, 0, n));
  }
  const int se = add_invariant_block(lmi, g, 0);
  const int te = add_invariant_block(lmi, g, n);
  lmi.set_orthant_constant(0, 1.0);
  lmi.set_orthant_constant(1, 1.0);
  lmi.add_orthant_term(se, 0, -1.0);
  lmi.add_orthant_term(te, 1, -1.0);
  auto sol = sdp::solve(lmi.build(), solver_options(opts));
  return certificate(sol, sol.dual_objective);
}

double q_norm(const GroupFunction& psi, double tol) {
  auto c = q_norm_certified(psi, {tol, 200});
  require_optimal(c, "q_norm");
  return c.value;
}

double abelian_b2_oracle(const GroupFunction& phi) {
  auto ct = character_table(phi.group);
  const double n = phi.group->order();
  // f^(chi) = (1/n) sum_s phi(s) conj(chi(s)).
  Eigen::VectorXcd hat = ct.chars.conjugate() * phi.values / n;
  return hat.cwiseAbs().sum();
}

double abelian_q_oracle(const GroupFunction& psi) {
  auto ct = character_table(psi.group);
  Eigen::VectorXcd pair = ct.chars * psi.values;
  return pair.cwiseAbs().maxCoeff();
}

double gram_min_eigenvalue(const GroupFunction& phi) {
  Eigen::MatrixXcd g = group_matrix(phi);
  Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_positive_definite(const GroupFunction& phi, double tol) {
  if (tol < 0.0) throw InvalidArgument("tolerance must be nonnegative");
  Eigen::MatrixXcd g = group_matrix(phi);
  const double herm = (g - g.adjoint()).cwiseAbs().maxCoeff();
  if (herm > std::max(tol, 1e-12)) return false;
  return gram_min_eigenvalue(phi) >= -tol;
}

double WitnessPair::reproduction_error(const GroupFunction& phi) const {
  if (xi.rows() != phi.size() || eta.rows() != phi.size())
    throw ShapeMismatch("witness family size differs from group order");
  // <xi(s), eta(t)> = sum_i xi(s)_i conj(eta(t)_i).
  Eigen::MatrixXcd ip = xi * eta.adjoint();
  return (group_matrix(phi) - ip).cwiseAbs().maxCoeff();
}

std::pair<double, double> WitnessPair::recompute_sup_norms() const {
  return {xi.rowwise().norm().maxCoeff(), eta.rowwise().norm().maxCoeff()};
}

namespace {

constexpr double kClamp = 1e-10;

Eigen::MatrixXcd factor_psd(const Eigen::MatrixXcd& z) {
  Eigen::MatrixXcd h = 0.5 * (z + z.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd& ev = es.eigenvalues();
  // Keep the numerical rank only. Eigenvalues at rounding level would put
  // sqrt(eps) noise into every witness vector.
  const double cut = ev.size() * std::numeric_limits<double>::epsilon() *
                     std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  int first = 0;
  while (first < ev.size() && ev[first] <= cut) ++first;
  if (first == ev.size()) return Eigen::MatrixXcd::Zero(h.rows(), 1);
  const int r = static_cast<int>(ev.size()) - first;
  return es.eigenvectors().rightCols(r) * ev.tail(r).cwiseSqrt().asDiagonal();
}

WitnessPair make_pair(Eigen::MatrixXcd xi, Eigen::MatrixXcd eta) {
  WitnessPair w;
  w.xi = std::move(xi);
  w.eta = std::move(eta);
  std::tie(w.sup_xi, w.sup_eta) = w.recompute_sup_norms();
  return w;
}

}  // namespace

WitnessPair gns_witnesses(const GroupFunction& phi) {
  if (!is_positive_definite(phi, kClamp))
    throw InvalidArgument("gns_witnesses: function is not positive definite");
  Eigen::MatrixXcd f = factor_psd(group_matrix(phi));
  return make_pair(f, f);
}

WitnessPair extract_witnesses(const GroupFunction& phi, const NormOptions& opts,
                              NormCertificate* cert) {
  check_options(opts);
  auto prog = b2_program(phi);
  auto sol = sdp::solve(prog.problem, solver_options(opts));
  const NormCertificate c = certificate(sol, -sol.dual_objective);
  if (cert) *cert = c;
  require_optimal(c, "extract_witnesses");
  const int n = phi.size();
  Eigen::MatrixXcd f = factor_psd(prog.lmi.complex_slack(sol));
  Eigen::MatrixXcd xi = f.topRows(n), eta = f.bottomRows(n);
  const double sx = xi.rowwise().norm().maxCoeff();
  const double se = eta.rowwise().norm().maxCoeff();
  if (sx > 0.0 && se > 0.0) {
    const double c = std::sqrt(se / sx);
    xi *= c;
    eta /= c;
  }
  return make_pair(std::move(xi), std::move(eta));
}

GroupFunction random_multiplier(const GroupPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(g->order());
  for (int i = 0; i < g->order(); ++i) v[i] = Complex(nd(rng), nd(rng));
  return GroupFunction(g, std::move(v));
}

GroupFunction random_positive_definite(const GroupPtr& g, std::mt19937_64& rng) {
  const int n = g->order();
  Eigen::VectorXcd v = random_multiplier(g, rng).values;
  v.normalize();
  // phi(x) = <lambda_x v, v> = sum_y v(x^-1 y) conj(v(y)).
  Eigen::VectorXcd phi(n);
  for (Element x = 0; x < n; ++x) {
    Complex acc = 0.0;
    const Element xi = g->inv(x);
    for (Element y = 0; y < n; ++y) acc += v[g->mul(xi, y)] * std::conj(v[y]);
    phi[x] = acc;
  }
  phi /= phi[0].real();
  return GroupFunction(g, std::move(phi));
}

const NormCertificate& Multiplier::b2() const {
  std::call_once(b2_once_, [&] { b2_ = b2_norm_certified(function_, opts_); });
  return *b2_;
}

const NormCertificate& Multiplier::q() const {
  std::call_once(q_once_, [&] { q_ = q_norm_certified(function_, opts_); });
  return *q_;
}

const WitnessPair& Multiplier::witnesses() const {
  std::call_once(witness_once_,
                 [&] { witnesses_ = extract_witnesses(function_, opts_); });
  return *witnesses_;
}

}  // namespace vnelab
