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

#include "vnelab/action.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "vnelab/error.hpp"

namespace vnelab {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

TraceAction::TraceAction(GroupPtr group, ShapePtr shape,
                         std::vector<std::vector<int>> perms,
                         std::vector<std::vector<Eigen::MatrixXcd>> unitaries)
    : group_(std::move(group)),
      shape_(std::move(shape)),
      perms_(std::move(perms)),
      unitaries_(std::move(unitaries)) {
  validate();
}

TraceAction TraceAction::permutation(GroupPtr group, ShapePtr shape,
                                     std::vector<std::vector<int>> perms) {
  std::vector<std::vector<Eigen::MatrixXcd>> us(group->order());
  for (auto& per_g : us)
    for (const auto& blk : shape->blocks)
      per_g.push_back(Eigen::MatrixXcd::Identity(blk.dim, blk.dim));
  return {std::move(group), std::move(shape), std::move(perms), std::move(us)};
}

TraceAction TraceAction::inner(GroupPtr group, ShapePtr shape,
                               std::vector<Eigen::MatrixXcd> unitaries) {
  if (shape->num_blocks() != 1)
    throw InvalidArgument("inner action needs a single-block algebra");
  std::vector<std::vector<int>> perms(group->order(), std::vector<int>{0});
  std::vector<std::vector<Eigen::MatrixXcd>> us;
  for (auto& u : unitaries) us.push_back({std::move(u)});
  return {std::move(group), std::move(shape), std::move(perms), std::move(us)};
}

void TraceAction::validate() const {
  if (!group_ || !shape_) throw ValidationError("action needs a group and a shape");
  const int order = group_->order();
  const int nb = shape_->num_blocks();
  if (static_cast<int>(perms_.size()) != order ||
      static_cast<int>(unitaries_.size()) != order)
    throw ValidationError("action data must have one entry per group element");

  for (int g = 0; g < order; ++g) {
    const auto& perm = perms_[g];
    if (static_cast<int>(perm.size()) != nb ||
        static_cast<int>(unitaries_[g].size()) != nb)
      throw ValidationError("action data must have one entry per block");
    std::vector<char> hit(nb, 0);
    for (int j = 0; j < nb; ++j) {
      const int k = perm[j];
      if (k < 0 || k >= nb || hit[k])
        throw ValidationError("block map of element " + std::to_string(g) +
                              " is not a permutation");
      hit[k] = 1;
      if (!(shape_->blocks[j] == shape_->blocks[k]))
        throw ValidationError("block map of element " + std::to_string(g) +
                              " does not preserve dimensions and weights");
    }
    for (int k = 0; k < nb; ++k) {
      const auto& u = unitaries_[g][k];
      const int d = shape_->blocks[k].dim;
      if (u.rows() != d || u.cols() != d)
        throw ValidationError("unitary has the wrong size");
      const double defect =
          max_abs(u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d));
      if (defect > kStructureTol)
        throw ValidationError("element " + std::to_string(g) + " block " +
                              std::to_string(k) + " is not unitary (defect " +
                              fmt(defect) + ")");
    }
  }

  // sigma_g o sigma_h = sigma_gh as automorphisms: block maps compose and the
  // implementing unitaries agree up to a phase.
  for (int g = 0; g < order; ++g) {
    for (int h = 0; h < order; ++h) {
      const int gh = group_->mul(g, h);
      for (int j = 0; j < nb; ++j) {
        const int m = perms_[h][j];
        const int k = perms_[g][m];
        if (k != perms_[gh][j])
          throw ValidationError("block maps are not a group action");
        const Eigen::MatrixXcd w =
            unitaries_[g][k] * unitaries_[h][m] * unitaries_[gh][k].adjoint();
        const int d = shape_->blocks[k].dim;
        const Complex c = w.trace() / static_cast<double>(d);
        const double defect = max_abs(w - c * Eigen::MatrixXcd::Identity(d, d));
        if (defect > kStructureTol)
          throw ValidationError("sigma_" + std::to_string(g) + " o sigma_" +
                                std::to_string(h) + " != sigma_" +
                                std::to_string(gh) + " (defect " + fmt(defect) +
                                ")");
      }
    }
  }
  // Identity acts trivially: follows from the homomorphism check once perm_e is
  // the identity, which the check above forces (perm_e o perm_e = perm_e).
}

AlgebraElement TraceAction::apply(Element g, const AlgebraElement& x) const {
  require_same_shape(*shape_, *x.shape(), "action");
  AlgebraElement r = AlgebraElement::zero(shape_);
  for (int j = 0; j < shape_->num_blocks(); ++j) {
    const int k = perms_[g][j];
    const auto& u = unitaries_[g][k];
    r.block(k) = u * x.block(j) * u.adjoint();
  }
  return r;
}

Eigen::MatrixXcd TraceAction::koopman_matrix(Element g) const {
  const int dim = shape_->l2_dimension();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < shape_->num_blocks(); ++j) {
    const int k = perms_[g][j];
    const int d = shape_->blocks[j].dim;
    const auto& u = unitaries_[g][k];
    // vec(U X U^*) = (conj(U) (x) U) vec(X); equal weights cancel the scaling.
    m.block(shape_->l2_offset(k), shape_->l2_offset(j), d * d, d * d) =
        kron(u.conjugate(), u);
  }
  return m;
}

KoopmanMatrix koopman(const TraceAction& action) {
  KoopmanMatrix k{action.group(), {}};
  for (int g = 0; g < action.group()->order(); ++g)
    k.matrices.push_back(action.koopman_matrix(g));
  return k;
}

KoopmanDefects koopman_defects(const TraceAction& action, const KoopmanMatrix& k) {
  const FiniteGroup& grp = *action.group();
  const ShapePtr& shape = action.shape();
  const int dim = shape->l2_dimension();
  KoopmanDefects d;
  for (int g = 0; g < grp.order(); ++g) {
    d.unitarity = std::max(
        d.unitarity,
        max_abs(k(g).adjoint() * k(g) - Eigen::MatrixXcd::Identity(dim, dim)));
    for (int h = 0; h < grp.order(); ++h)
      d.multiplicativity = std::max(
          d.multiplicativity, max_abs(k(g) * k(h) - k(grp.mul(g, h))));
  }
  // sigma_g(x) acting on L^2 by left multiplication equals K_g L_x K_{g^-1}.
  for (int b = 0; b < shape->num_blocks(); ++b) {
    const int n = shape->blocks[b].dim;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto e = AlgebraElement::matrix_unit(shape, b, i, j);
        const Eigen::MatrixXcd lx = left_multiplication(e);
        for (int g = 0; g < grp.order(); ++g) {
          const Eigen::MatrixXcd lhs = left_multiplication(action.apply(g, e));
          const Eigen::MatrixXcd rhs = k(g) * lx * k(grp.inv(g));
          d.implements_action = std::max(d.implements_action, max_abs(lhs - rhs));
        }
      }
  }
  return d;
}

Eigen::VectorXcd koopman_character(const KoopmanMatrix& k) {
  Eigen::VectorXcd chi(k.matrices.size());
  for (std::size_t g = 0; g < k.matrices.size(); ++g) chi[g] = k.matrices[g].trace();
  return chi;
}

double partition_defect(const TraceAction& action, const AlgebraElement& p) {
  require_same_shape(*action.shape(), *p.shape(), "partition_defect");
  AlgebraElement sum = AlgebraElement::zero(action.shape());
  for (int s = 0; s < action.group()->order(); ++s) sum += action.apply(s, p);
  return operator_norm(sum - AlgebraElement::identity(action.shape()));
}

bool is_fundamental_domain(const TraceAction& action, const AlgebraElement& p,
                           double tol) {
  require_same_shape(*action.shape(), *p.shape(), "is_fundamental_domain");
  return is_projection(p, tol) && partition_defect(action, p) <= tol;
}

AlgebraElement theta_embedding(const TraceAction& action, const AlgebraElement& p,
                               const GroupFunction& f) {
  require_same_group(*action.group(), *f.group, "theta_embedding");
  if (!is_fundamental_domain(action, p, kStructureTol))
    throw ValidationError("theta_embedding: p is not a fundamental domain");
  AlgebraElement r = AlgebraElement::zero(action.shape());
  for (int s = 0; s < action.group()->order(); ++s)
    if (f(s) != Complex(0.0)) r += f(s) * action.apply(s, p);
  return r;
}

double equivariance_defect(const TraceAction& action, const AlgebraElement& p) {
  const GroupPtr& g = action.group();
  double defect = 0.0;
  for (int t = 0; t < g->order(); ++t) {
    const AlgebraElement base = theta_embedding(action, p, GroupFunction::delta(g, t));
    for (int lam = 0; lam < g->order(); ++lam) {
      const AlgebraElement moved = theta_embedding(
          action, p, GroupFunction::delta(g, g->mul(lam, t)));
      defect = std::max(defect, operator_norm(action.apply(lam, base) - moved));
    }
  }
  return defect;
}

double commutation_defect(const TraceAction& a, const TraceAction& b) {
  require_same_shape(*a.shape(), *b.shape(), "commutation_defect");
  const KoopmanMatrix ka = koopman(a);
  const KoopmanMatrix kb = koopman(b);
  double defect = 0.0;
  for (const auto& x : ka.matrices)
    for (const auto& y : kb.matrices) defect = std::max(defect, max_abs(x * y - y * x));
  return defect;
}

CouplingRecord CouplingRecord::make(std::string name, TraceAction gamma,
                                    TraceAction lambda, AlgebraElement q,
                                    AlgebraElement p,
                                    std::optional<std::vector<int>> pairing) {
  require_same_shape(*gamma.shape(), *lambda.shape(), "coupling actions");
  require_same_shape(*gamma.shape(), *q.shape(), "coupling domain q");
  require_same_shape(*gamma.shape(), *p.shape(), "coupling domain p");
  CouplingRecord c{std::move(name),  std::move(gamma), std::move(lambda),
                   std::move(q),     std::move(p),     std::move(pairing)};
  const CouplingDiagnostics d = diagnose(c);
  if (d.commutation > kStructureTol)
    throw ValidationError(c.name + ": actions do not commute (defect " +
                          fmt(d.commutation) + ")");
  if (!d.q_projection) throw ValidationError(c.name + ": q is not a projection");
  if (!d.p_projection) throw ValidationError(c.name + ": p is not a projection");
  if (d.q_partition > kStructureTol)
    throw ValidationError(c.name + ": gamma-translates of q are not a partition "
                          "of unity (defect " + fmt(d.q_partition) + ")");
  if (d.p_partition > kStructureTol)
    throw ValidationError(c.name + ": lambda-translates of p are not a partition "
                          "of unity (defect " + fmt(d.p_partition) + ")");
  if (!(d.trace_q > 0.0) || !(d.trace_p > 0.0) || !std::isfinite(d.trace_q) ||
      !std::isfinite(d.trace_p))
    throw ValidationError(c.name + ": fundamental domains need finite positive trace");
  return c;
}

CouplingRecord with_lambda_domain(const CouplingRecord& c, AlgebraElement p) {
  return CouplingRecord::make(c.name, c.gamma_action, c.lambda_action, c.q,
                              std::move(p), c.pairing);
}

CouplingDiagnostics diagnose(const CouplingRecord& c) {
  CouplingDiagnostics d;
  d.commutation = commutation_defect(c.gamma_action, c.lambda_action);
  d.q_projection = is_projection(c.q, kStructureTol);
  d.p_projection = is_projection(c.p, kStructureTol);
  d.q_partition = partition_defect(c.gamma_action, c.q);
  d.p_partition = partition_defect(c.lambda_action, c.p);
  d.trace_q = trace(c.q).real();
  d.trace_p = trace(c.p).real();
  return d;
}

double coupling_index(const CouplingRecord& c) {
  return trace(c.q).real() / trace(c.p).real();
}

std::optional<std::pair<long long, long long>> exact_coupling_index(
    const CouplingRecord& c) {
  const AlgebraShape& shape = *c.shape();
  for (const auto& b : shape.blocks)
    if (b.weight != shape.blocks.front().weight) return std::nullopt;

  auto count_ones = [](const AlgebraElement& x) -> std::optional<long long> {
    long long n = 0;
    for (const auto& b : x.blocks()) {
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
          const Complex v = b(i, j);
          if (i != j) {
            if (v != Complex(0.0)) return std::nullopt;
          } else if (v == Complex(1.0)) {
            ++n;
          } else if (v != Complex(0.0)) {
            return std::nullopt;
          }
        }
    }
    return n;
  };
  const auto nq = count_ones(c.q);
  const auto np = count_ones(c.p);
  if (!nq || !np || *np == 0) return std::nullopt;
  const long long g = std::gcd(*nq, *np);
  return std::make_pair(*nq / g, *np / g);
}

CouplingRecord build_me_product_coupling(const GroupPtr& g, const GroupPtr& h) {
  const int ng = g->order(), nh = h->order();
  ShapePtr shape = make_shape(AlgebraShape::diagonal(ng * nh));
  std::vector<std::vector<int>> gperm(ng, std::vector<int>(ng * nh));
  std::vector<std::vector<int>> hperm(nh, std::vector<int>(ng * nh));
  for (int x = 0; x < ng * nh; ++x) {
    const int a = x / nh, b = x % nh;
    for (int gam = 0; gam < ng; ++gam) gperm[gam][x] = g->mul(gam, a) * nh + b;
    for (int s = 0; s < nh; ++s) hperm[s][x] = a * nh + h->mul(s, b);
  }
  AlgebraElement q = AlgebraElement::zero(shape);
  AlgebraElement p = AlgebraElement::zero(shape);
  for (int b = 0; b < nh; ++b) q.block(b)(0, 0) = 1.0;       // {e} x H
  for (int a = 0; a < ng; ++a) p.block(a * nh)(0, 0) = 1.0;  // G x {e}
  return CouplingRecord::make(
      "me_product(" + g->name() + ", " + h->name() + ")",
      TraceAction::permutation(g, shape, std::move(gperm)),
      TraceAction::permutation(h, shape, std::move(hperm)), std::move(q),
      std::move(p));
}

CouplingRecord build_diagonal_coupling(const GroupPtr& g) {
  const int n = g->order();
  ShapePtr shape = make_shape(AlgebraShape::diagonal(n));
  std::vector<std::vector<int>> left(n, std::vector<int>(n));
  std::vector<std::vector<int>> right(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int t = 0; t < n; ++t) {
      left[t][x] = g->mul(t, x);
      right[t][x] = g->mul(x, g->inv(t));
    }
  AlgebraElement q = AlgebraElement::matrix_unit(shape, 0, 0, 0);
  AlgebraElement p = q;
  return CouplingRecord::make("diagonal(" + g->name() + ")",
                              TraceAction::permutation(g, shape, std::move(left)),
                              TraceAction::permutation(g, shape, std::move(right)),
                              std::move(q), std::move(p));
}

std::vector<Eigen::MatrixXcd> wstar_gamma_unitaries(const GroupPtr& g,
                                                    const GroupPtr& h,
                                                    const std::vector<int>& pairing) {
  const int n = h->order();
  const CharacterTable gchars = character_table(g);
  const CharacterTable hchars = character_table(h);

  std::vector<Eigen::MatrixXcd> rho;
  for (int t = 0; t < n; ++t) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
    for (int x = 0; x < n; ++x) r(h->mul(x, h->inv(t)), x) = 1.0;
    rho.push_back(std::move(r));
  }
  std::vector<Eigen::MatrixXcd> spectral;
  for (int eta = 0; eta < n; ++eta) {
    Eigen::MatrixXcd pm = Eigen::MatrixXcd::Zero(n, n);
    for (int t = 0; t < n; ++t) pm += hchars.chars(eta, t) * rho[t];
    spectral.push_back(pm / static_cast<double>(n));
  }
  std::vector<Eigen::MatrixXcd> us;
  for (int gam = 0; gam < g->order(); ++gam) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) u += gchars.chars(j, gam) * spectral[pairing[j]];
    us.push_back(std::move(u));
  }
  return us;
}

CouplingRecord build_wstar_coupling(const GroupPtr& g, const GroupPtr& h,
                                    std::vector<int> pairing) {
  if (!g->is_abelian() || !h->is_abelian())
    throw NonAbelianGroup("W*-coupling constructor needs abelian groups");
  if (g->order() != h->order())
    throw InvalidArgument("W*-coupling needs groups of equal order");
  const int n = h->order();
  if (pairing.empty()) {
    pairing.resize(n);
    std::iota(pairing.begin(), pairing.end(), 0);
  }
  if (static_cast<int>(pairing.size()) != n)
    throw InvalidArgument("character pairing must have one entry per character");
  {
    std::vector<int> sorted = pairing;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
      if (sorted[i] != i)
        throw InvalidArgument("character pairing is not a bijection");
  }

  ShapePtr shape = make_shape(AlgebraShape::full_matrix(n));
  std::vector<Eigen::MatrixXcd> rho;
  for (int t = 0; t < n; ++t) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
    for (int x = 0; x < n; ++x) r(h->mul(x, h->inv(t)), x) = 1.0;
    rho.push_back(std::move(r));
  }
  AlgebraElement dom = AlgebraElement::matrix_unit(shape, 0, 0, 0);
  TraceAction gamma = TraceAction::inner(g, shape, wstar_gamma_unitaries(g, h, pairing));
  TraceAction lambda = TraceAction::inner(h, shape, std::move(rho));
  return CouplingRecord::make("wstar(" + g->name() + ", " + h->name() + ")",
                              std::move(gamma), std::move(lambda), dom, dom,
                              std::move(pairing));
}

}  // namespace vnelab
