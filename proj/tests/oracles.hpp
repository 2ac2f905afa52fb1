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

// Brute-force references for the tests. Nothing here calls the code under
// test for the quantity being checked.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "vnelab/action.hpp"
#include "vnelab/group.hpp"

namespace vnelab::testing {

/// Invariant factors of every abelian group of order at most 16 (25 groups).
inline std::vector<std::vector<int>> abelian_groups_up_to_16() {
  return {{1},     {2},     {3},       {4},        {2, 2},  {5},  {6},
          {7},     {8},     {2, 4},    {2, 2, 2},  {9},     {3, 3},
          {10},    {11},    {12},      {2, 6},     {13},    {14}, {15},
          {16},    {2, 8},  {4, 4},    {2, 2, 4},  {2, 2, 2, 2}};
}

inline GroupPtr abelian_group(const std::vector<int>& factors) {
  if (factors.size() == 1) return build_group(GroupSpec::cyclic(factors[0]));
  std::vector<GroupSpec> fs;
  for (int n : factors) fs.push_back(GroupSpec::cyclic(n));
  return build_group(GroupSpec::direct_product(std::move(fs)));
}

/// Characters of Z/n1 x ... x Z/nk written out from mixed-radix digits.
/// Element x and character j both enumerate lexicographically.
inline Eigen::MatrixXcd naive_characters(const std::vector<int>& factors) {
  int n = 1;
  for (int f : factors) n *= f;
  auto digits = [&](int x) {
    std::vector<int> d(factors.size());
    for (int m = static_cast<int>(factors.size()) - 1; m >= 0; --m) {
      d[m] = x % factors[m];
      x /= factors[m];
    }
    return d;
  };
  Eigen::MatrixXcd chi(n, n);
  for (int j = 0; j < n; ++j)
    for (int x = 0; x < n; ++x) {
      const auto a = digits(x), b = digits(j);
      double angle = 0.0;
      for (std::size_t m = 0; m < factors.size(); ++m)
        angle += 2.0 * std::numbers::pi * a[m] * b[m] / factors[m];
      chi(j, x) = std::polar(1.0, angle);
    }
  return chi;
}

/// sum over characters of |Fourier coefficient|.
inline double naive_b2(const Eigen::VectorXcd& phi, const std::vector<int>& factors) {
  const Eigen::MatrixXcd chi = naive_characters(factors);
  const double n = static_cast<double>(phi.size());
  double s = 0.0;
  for (Eigen::Index j = 0; j < chi.rows(); ++j)
    s += std::abs((chi.row(j).transpose().conjugate().array() * phi.array()).sum()) / n;
  return s;
}

/// max over characters of |sum_x psi(x) chi(x)|.
inline double naive_q(const Eigen::VectorXcd& psi, const std::vector<int>& factors) {
  const Eigen::MatrixXcd chi = naive_characters(factors);
  double m = 0.0;
  for (Eigen::Index j = 0; j < chi.rows(); ++j)
    m = std::max(m, std::abs((chi.row(j).transpose().array() * psi.array()).sum()));
  return m;
}

/// The trace formula evaluated element by element with the algebra
/// arithmetic, bypassing the induction code.
inline Eigen::MatrixXd brute_force_kernel(const CouplingRecord& c) {
  const int ng = c.gamma()->order(), nl = c.lambda()->order();
  const double tp = trace(c.p).real();
  Eigen::MatrixXd k(ng, nl);
  for (int g = 0; g < ng; ++g) {
    const AlgebraElement b = c.gamma_action.apply(c.gamma()->inv(g), c.p);
    for (int s = 0; s < nl; ++s)
      k(g, s) = trace(c.lambda_action.apply(s, c.p) * b).real() / tp;
  }
  return k;
}

/// Smallest eigenvalue of [phi(t^-1 s)]_{s,t}, assembled from the table.
inline double naive_gram_min(const GroupFunction& phi) {
  const FiniteGroup& g = *phi.group;
  Eigen::MatrixXcd m(g.order(), g.order());
  for (int s = 0; s < g.order(); ++s)
    for (int t = 0; t < g.order(); ++t) m(s, t) = phi(g.mul(g.inv(t), s));
  const Eigen::MatrixXcd h = (m + m.adjoint()) / 2.0;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues().minCoeff();
}

}  // namespace vnelab::testing
