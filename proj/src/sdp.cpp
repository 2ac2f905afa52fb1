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

#include "vnelab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "vnelab/error.hpp"

namespace vnelab::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fraction of the distance to the cone boundary taken per step.
constexpr double kStepFraction = 0.98;
// Consecutive tiny steps before the solve is declared stuck.
constexpr int kMaxStalls = 5;

using Eigen::MatrixXd;
using Eigen::VectorXd;

double inner(const BlockMatrix& a, const BlockMatrix& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    s += (a.blocks[k].array() * b.blocks[k].array()).sum();
  return s;
}

double max_abs(const BlockMatrix& a) {
  double m = 0.0;
  for (const auto& b : a.blocks)
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

void axpy(double alpha, const BlockMatrix& x, BlockMatrix& y) {
  for (std::size_t k = 0; k < y.blocks.size(); ++k) y.blocks[k] += alpha * x.blocks[k];
}

BlockMatrix operator-(const BlockMatrix& a, const BlockMatrix& b) {
  BlockMatrix r = a;
  axpy(-1.0, b, r);
  return r;
}

// Scaling data for one block. PSD: W = G G^T with G^T S G = G^{-1} X G^{-T}
// = diag(lambda). Orthant: the same with diagonal G = sqrt(x / s).
struct BlockScaling {
  MatrixXd g;
  MatrixXd g_inv;
  MatrixXd w;
  VectorXd lambda;
  Eigen::LLT<MatrixXd> chol_x;
};

class Solver {
 public:
  Solver(const SdpProblem& p, const Options& o) : problem_(p), options_(o) {
    problem_.validate();
    nb_ = static_cast<int>(p.block_sizes.size());
    m_ = p.num_constraints();
    for (int k = 0; k < nb_; ++k) {
      const int sz = p.block_sizes[k];
      psd_.push_back(sz > 0);
      dim_.push_back(std::abs(sz));
      cone_dim_ += std::abs(sz);
    }
    c_ = zeros();
    add_entries(p.objective, 1.0, c_);
    b_.resize(m_);
    by_block_.assign(m_, std::vector<std::vector<Entry>>(nb_));
    for (int i = 0; i < m_; ++i) {
      b_[i] = p.constraints[i].rhs;
      for (const auto& e : p.constraints[i].entries) by_block_[i][e.block].push_back(e);
    }
    for (int k = 0; k < nb_; ++k) {
      MatrixXd a = MatrixXd::Zero(psd_[k] ? 0 : m_, psd_[k] ? 0 : dim_[k]);
      if (!psd_[k])
        for (int i = 0; i < m_; ++i)
          for (const auto& e : by_block_[i][k]) a(i, e.row) += e.value;
      orthant_a_.push_back(std::move(a));
    }
  }

  SdpSolution run();

 private:
  BlockMatrix zeros() const {
    BlockMatrix z;
    for (int k = 0; k < nb_; ++k)
      z.blocks.push_back(psd_[k] ? MatrixXd::Zero(dim_[k], dim_[k])
                                 : MatrixXd::Zero(dim_[k], 1));
    return z;
  }

  BlockMatrix scaled_identity(const std::vector<double>& per_block) const {
    BlockMatrix z = zeros();
    for (int k = 0; k < nb_; ++k) {
      if (psd_[k])
        z.blocks[k].diagonal().setConstant(per_block[k]);
      else
        z.blocks[k].setConstant(per_block[k]);
    }
    return z;
  }

  void add_entries(const std::vector<Entry>& entries, double scale,
                   BlockMatrix& m) const {
    for (const auto& e : entries) {
      if (psd_[e.block]) {
        m.blocks[e.block](e.row, e.col) += scale * e.value;
        if (e.row != e.col) m.blocks[e.block](e.col, e.row) += scale * e.value;
      } else {
        m.blocks[e.block](e.row, 0) += scale * e.value;
      }
    }
  }

  VectorXd apply_a(const BlockMatrix& x) const {
    VectorXd r(m_);
    for (int i = 0; i < m_; ++i) r[i] = sparse_inner(problem_.constraints[i].entries, x);
    return r;
  }

  BlockMatrix apply_at(const VectorXd& y) const {
    BlockMatrix r = zeros();
    for (int i = 0; i < m_; ++i)
      if (y[i] != 0.0) add_entries(problem_.constraints[i].entries, y[i], r);
    return r;
  }

  // Strictly inside the cone, in the sense that every PSD block has a
  // Cholesky factor and every orthant entry is positive.
  bool interior(const BlockMatrix& m) const {
    for (int k = 0; k < nb_; ++k) {
      if (!psd_[k]) {
        if ((m.blocks[k].array() <= 0.0).any()) return false;
        continue;
      }
      Eigen::LLT<MatrixXd> llt(m.blocks[k]);
      if (llt.info() != Eigen::Success) return false;
    }
    return true;
  }

  // Shrinks alpha until m + alpha d factors. Rounding can push a step that is
  // admissible in exact arithmetic just outside the cone.
  double backtrack(const BlockMatrix& m, const BlockMatrix& d, double alpha) const {
    for (int tries = 0; tries < 40; ++tries, alpha *= 0.8) {
      BlockMatrix trial = m;
      axpy(alpha, d, trial);
      if (interior(trial)) return alpha;
    }
    return 0.0;
  }

  // W M W per block (M symmetric).
  BlockMatrix scale_by_w(const BlockMatrix& m) const {
    BlockMatrix r = m;
    for (int k = 0; k < nb_; ++k) {
      const auto& w = scaling_[k].w;
      if (psd_[k])
        r.blocks[k] = w * m.blocks[k] * w;
      else
        r.blocks[k] = w.array() * m.blocks[k].array();
    }
    return r;
  }

  std::optional<std::string> compute_scaling(const BlockMatrix& x,
                                             const BlockMatrix& s);
  void build_schur();
  struct Direction {
    BlockMatrix dx;
    VectorXd dy;
    BlockMatrix ds;
  };
  Direction direction(const BlockMatrix& rc, const VectorXd& rp,
                      const BlockMatrix& rd) const;
  double max_step(const BlockMatrix& x, const BlockMatrix& dx,
                  bool use_cached_chol) const;

  SdpProblem problem_;
  Options options_;
  int nb_ = 0;
  int m_ = 0;
  int cone_dim_ = 0;
  std::vector<bool> psd_;
  std::vector<int> dim_;
  BlockMatrix c_;
  VectorXd b_;
  std::vector<std::vector<std::vector<Entry>>> by_block_;
  std::vector<MatrixXd> orthant_a_;
  std::vector<BlockScaling> scaling_;
  MatrixXd schur_;
  Eigen::LLT<MatrixXd> schur_chol_;
};

std::optional<std::string> Solver::compute_scaling(const BlockMatrix& x,
                                                   const BlockMatrix& s) {
  scaling_.assign(nb_, {});
  for (int k = 0; k < nb_; ++k) {
    BlockScaling& sc = scaling_[k];
    if (!psd_[k]) {
      const VectorXd xv = x.blocks[k].col(0), sv = s.blocks[k].col(0);
      if ((xv.array() <= 0.0).any() || (sv.array() <= 0.0).any())
        return "orthant iterate left the cone";
      sc.g = (xv.array() / sv.array()).sqrt().matrix();
      sc.g_inv = sc.g.cwiseInverse();
      sc.w = (xv.array() / sv.array()).matrix();
      sc.lambda = (xv.array() * sv.array()).sqrt().matrix();
      continue;
    }
    sc.chol_x.compute(x.blocks[k]);
    Eigen::LLT<MatrixXd> chol_s(s.blocks[k]);
    if (sc.chol_x.info() != Eigen::Success || chol_s.info() != Eigen::Success)
      return "iterate lost positive definiteness";
    const MatrixXd l = sc.chol_x.matrixL();
    const MatrixXd r = chol_s.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(r.transpose() * l,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd sv = svd.singularValues();
    if (sv.minCoeff() <= 0.0) return "degenerate scaling";
    const VectorXd inv_sqrt = sv.cwiseSqrt().cwiseInverse();
    sc.g = l * svd.matrixV() * inv_sqrt.asDiagonal();
    sc.g_inv = inv_sqrt.asDiagonal() * svd.matrixU().transpose() * r.transpose();
    sc.w = sc.g * sc.g.transpose();
    sc.lambda = sv;
  }
  return std::nullopt;
}

void Solver::build_schur() {
  schur_ = MatrixXd::Zero(m_, m_);
  for (int k = 0; k < nb_; ++k) {
    if (!psd_[k]) {
      schur_ += orthant_a_[k] * scaling_[k].w.col(0).asDiagonal() *
                orthant_a_[k].transpose();
      continue;
    }
    const MatrixXd& w = scaling_[k].w;
    const int n = dim_[k];
    MatrixXd wa(n, n), t(n, n);
    for (int j = 0; j < m_; ++j) {
      const auto& ej = by_block_[j][k];
      if (ej.empty()) continue;
      // T = (W A_j) W with W A_j accumulated column by column from the
      // sparse entries of A_j.
      wa.setZero();
      for (const auto& e : ej) {
        wa.col(e.col) += e.value * w.col(e.row);
        if (e.row != e.col) wa.col(e.row) += e.value * w.col(e.col);
      }
      t.noalias() = wa * w;
      for (int i = 0; i <= j; ++i) {
        double v = 0.0;
        for (const auto& e : by_block_[i][k])
          v += e.value * (e.row == e.col ? t(e.row, e.col) : 2.0 * t(e.row, e.col));
        schur_(i, j) += v;
        if (i != j) schur_(j, i) += v;
      }
    }
  }
  schur_chol_.compute(schur_);
  if (schur_chol_.info() != Eigen::Success) {
    const double shift = 1e-14 * std::max(1.0, schur_.diagonal().cwiseAbs().maxCoeff());
    schur_chol_.compute(schur_ + shift * MatrixXd::Identity(m_, m_));
  }
}

Solver::Direction Solver::direction(const BlockMatrix& rc, const VectorXd& rp,
                                    const BlockMatrix& rd) const {
  Direction d;
  const VectorXd rhs = rp - apply_a(rc - scale_by_w(rd));
  d.dy = schur_chol_.solve(rhs);
  d.ds = rd - apply_at(d.dy);
  d.dx = rc - scale_by_w(d.ds);
  for (int k = 0; k < nb_; ++k)
    if (psd_[k]) d.dx.blocks[k] = 0.5 * (d.dx.blocks[k] + d.dx.blocks[k].transpose());
  return d;
}

double Solver::max_step(const BlockMatrix& x, const BlockMatrix& dx,
                        bool use_cached_chol) const {
  double alpha = kInf;
  for (int k = 0; k < nb_; ++k) {
    if (!psd_[k]) {
      for (int i = 0; i < dim_[k]; ++i)
        if (dx.blocks[k](i, 0) < 0.0)
          alpha = std::min(alpha, -x.blocks[k](i, 0) / dx.blocks[k](i, 0));
      continue;
    }
    Eigen::LLT<MatrixXd> local;
    const Eigen::LLT<MatrixXd>* chol = &scaling_[k].chol_x;
    if (!use_cached_chol) {
      local.compute(x.blocks[k]);
      chol = &local;
    }
    const MatrixXd l = chol->matrixL();
    MatrixXd z = l.triangularView<Eigen::Lower>().solve(dx.blocks[k]);
    z = l.triangularView<Eigen::Lower>().solve(z.transpose().eval());
    z = 0.5 * (z + z.transpose());
    const double lmin =
        Eigen::SelfAdjointEigenSolver<MatrixXd>(z, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
  }
  return alpha;
}

SdpSolution Solver::run() {
  SdpSolution sol;

  // Infeasible starting point X = xi I, S = eta I, y = 0 with per-block
  // magnitudes from the data norms.
  std::vector<double> xi(nb_), eta(nb_);
  for (int k = 0; k < nb_; ++k) {
    const double n = dim_[k];
    double ratio = 0.0, norm_a = 0.0;
    for (int i = 0; i < m_; ++i) {
      double fro = 0.0;
      for (const auto& e : by_block_[i][k])
        fro += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
      fro = std::sqrt(fro);
      norm_a = std::max(norm_a, fro);
      ratio = std::max(ratio, (1.0 + std::abs(b_[i])) / (1.0 + fro));
    }
    const double norm_c = c_.blocks[k].norm();
    xi[k] = std::max({10.0, std::sqrt(n), n * ratio});
    eta[k] = std::max({10.0, std::sqrt(n), norm_a, norm_c});
  }
  BlockMatrix x = scaled_identity(xi);
  BlockMatrix s = scaled_identity(eta);
  VectorXd y = VectorXd::Zero(m_);

  int stalls = 0;
  auto finish = [&](Status st, std::string msg) {
    sol.status = st;
    sol.message = std::move(msg);
    sol.x = x;
    sol.s = s;
    sol.y = y;
    return sol;
  };

  for (int iter = 0;; ++iter) {
    const VectorXd rp = b_ - apply_a(x);
    const BlockMatrix rd = c_ - s - apply_at(y);
    sol.primal_objective = inner(c_, x);
    sol.dual_objective = b_.dot(y);
    const double complementarity = inner(x, s);
    sol.gap = std::max(std::abs(sol.primal_objective - sol.dual_objective),
                       complementarity);
    sol.primal_residual = m_ > 0 ? rp.cwiseAbs().maxCoeff() : 0.0;
    sol.dual_residual = max_abs(rd);
    sol.iterations = iter;
    sol.gap_history.push_back(sol.gap);

    if (sol.gap <= options_.tol && sol.primal_residual <= options_.tol &&
        sol.dual_residual <= options_.tol)
      return finish(Status::kOptimal, "optimal");
    if (sol.dual_objective > options_.infeasibility_bound &&
        sol.dual_residual <= options_.tol)
      return finish(Status::kInfeasible, "primal infeasible: dual objective diverged");
    if (sol.primal_objective < -options_.infeasibility_bound &&
        sol.primal_residual <= options_.tol)
      return finish(Status::kInfeasible, "dual infeasible: primal objective diverged");
    if (iter >= options_.max_iter) {
      std::ostringstream os;
      os << "no convergence after " << iter << " iterations: gap " << sol.gap
         << ", primal residual " << sol.primal_residual << ", dual residual "
         << sol.dual_residual;
      return finish(Status::kNumericalFailure, os.str());
    }

    if (auto err = compute_scaling(x, s)) return finish(Status::kNumericalFailure, *err);
    build_schur();
    const double mu = complementarity / cone_dim_;

    // Predictor: affine-scaling direction, X + W dS W = -X.
    BlockMatrix rc = x;
    for (auto& blk : rc.blocks) blk = -blk;
    const Direction aff = direction(rc, rp, rd);
    const double ap = std::min(1.0, max_step(x, aff.dx, true));
    const double ad = std::min(1.0, max_step(s, aff.ds, false));

    BlockMatrix x_aff = x, s_aff = s;
    axpy(ap, aff.dx, x_aff);
    axpy(ad, aff.ds, s_aff);
    const double ratio = std::clamp(inner(x_aff, s_aff) / complementarity, 0.0, 1.0);
    // Short predictor steps mean poor centrality; fall back toward a linear
    // reduction so the corrector recenters instead of jamming on the boundary.
    const double expon = std::max(1.0, 3.0 * std::min(ap, ad) * std::min(ap, ad));
    const double sigma = std::pow(ratio, expon);

    // Corrector: Lambda H + H Lambda = 2 sigma mu I - 2 Lambda^2 - (dX~ dS~ + dS~ dX~)
    // in the scaled space, mapped back through G.
    for (int k = 0; k < nb_; ++k) {
      const BlockScaling& sc = scaling_[k];
      const VectorXd& lam = sc.lambda;
      if (!psd_[k]) {
        // s dx + x ds = sigma mu - x s - dx_aff ds_aff, and direction() solves
        // dx + (x / s) ds = rc.
        const auto xv = x.blocks[k].col(0).array();
        const auto sv = s.blocks[k].col(0).array();
        const auto cross = aff.dx.blocks[k].col(0).array() * aff.ds.blocks[k].col(0).array();
        rc.blocks[k] = ((sigma * mu - xv * sv - cross) / sv).matrix();
        continue;
      }
      const MatrixXd dxs = sc.g_inv * aff.dx.blocks[k] * sc.g_inv.transpose();
      const MatrixXd dss = sc.g.transpose() * aff.ds.blocks[k] * sc.g;
      MatrixXd r = -(dxs * dss + dss * dxs);
      for (int i = 0; i < dim_[k]; ++i) r(i, i) += 2.0 * sigma * mu - 2.0 * lam[i] * lam[i];
      MatrixXd h(dim_[k], dim_[k]);
      for (int i = 0; i < dim_[k]; ++i)
        for (int j = 0; j < dim_[k]; ++j) h(i, j) = r(i, j) / (lam[i] + lam[j]);
      rc.blocks[k] = sc.g * h * sc.g.transpose();
    }
    const Direction dir = direction(rc, rp, rd);
    const double step_p =
        backtrack(x, dir.dx, std::min(1.0, kStepFraction * max_step(x, dir.dx, true)));
    const double step_d =
        backtrack(s, dir.ds, std::min(1.0, kStepFraction * max_step(s, dir.ds, false)));

    axpy(step_p, dir.dx, x);
    axpy(step_d, dir.ds, s);
    y += step_d * dir.dy;

    stalls = (step_p < 1e-10 && step_d < 1e-10) ? stalls + 1 : 0;
    if (stalls >= kMaxStalls)
      return finish(Status::kNumericalFailure, "step lengths collapsed");
  }
}

}  // namespace

SdpProblem SdpProblem::dense(const Eigen::MatrixXd& c,
                             const std::vector<Eigen::MatrixXd>& a,
                             const Eigen::VectorXd& b) {
  const int n = static_cast<int>(c.rows());
  auto to_entries = [n](const Eigen::MatrixXd& m) {
    std::vector<Entry> out;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i)
        if (m(i, j) != 0.0) out.push_back({0, i, j, m(i, j)});
    return out;
  };
  SdpProblem p;
  p.block_sizes = {n};
  p.objective = to_entries(c);
  if (static_cast<Eigen::Index>(a.size()) != b.size())
    throw InvalidArgument("one right-hand side per constraint required");
  for (std::size_t i = 0; i < a.size(); ++i)
    p.constraints.push_back({to_entries(a[i]), b[static_cast<Eigen::Index>(i)]});
  return p;
}

void SdpProblem::validate() const {
  if (block_sizes.empty()) throw InvalidArgument("SDP needs at least one block");
  for (int sz : block_sizes)
    if (sz == 0) throw InvalidArgument("SDP block of size zero");
  if (constraints.empty()) throw InvalidArgument("SDP needs at least one constraint");
  auto check = [this](const std::vector<Entry>& es) {
    for (const auto& e : es) {
      if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size()))
        throw InvalidArgument("SDP entry references a missing block");
      const int n = std::abs(block_sizes[e.block]);
      if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n)
        throw InvalidArgument("SDP entry index out of range");
      if (e.row > e.col) throw InvalidArgument("SDP entries must satisfy row <= col");
      if (block_sizes[e.block] < 0 && e.row != e.col)
        throw InvalidArgument("orthant block entries must be diagonal");
      if (!std::isfinite(e.value)) throw InvalidArgument("SDP entry is not finite");
    }
  };
  check(objective);
  for (const auto& c : constraints) {
    check(c.entries);
    if (!std::isfinite(c.rhs)) throw InvalidArgument("SDP right-hand side is not finite");
  }
}

const char* to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kNumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

double sparse_inner(const std::vector<Entry>& a, const BlockMatrix& x) {
  double s = 0.0;
  for (const auto& e : a) {
    const auto& blk = x.blocks[e.block];
    if (blk.cols() == 1)  // orthant block, or a 1x1 PSD block
      s += e.value * blk(e.row, 0);
    else
      s += (e.row == e.col ? 1.0 : 2.0) * e.value * blk(e.row, e.col);
  }
  return s;
}

double min_eigenvalue(const BlockMatrix& m) {
  double lmin = kInf;
  for (const auto& b : m.blocks) {
    if (b.cols() == 1) {
      lmin = std::min(lmin, b.minCoeff());
    } else {
      lmin = std::min(lmin, Eigen::SelfAdjointEigenSolver<MatrixXd>(
                                b, Eigen::EigenvaluesOnly)
                                .eigenvalues()
                                .minCoeff());
    }
  }
  return lmin;
}

SdpSolution solve(const SdpProblem& problem, const Options& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("SDP tolerance must be > 0");
  if (options.max_iter < 1) throw InvalidArgument("SDP max_iter must be >= 1");
  Solver solver(problem, options);
  return solver.run();
}

}  // namespace vnelab::sdp
