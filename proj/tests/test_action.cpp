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

#include <doctest.h>

#include "oracles.hpp"
#include "vnelab/action.hpp"
#include "vnelab/error.hpp"

using namespace vnelab;

namespace {

// Z/n translating the points of l^inf(Z/n).
TraceAction translation(const GroupPtr& g, const ShapePtr& s) {
  const int n = g->order();
  std::vector<std::vector<int>> perms(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < n; ++x) perms[a][x] = g->mul(a, x);
  return TraceAction::permutation(g, s, std::move(perms));
}

AlgebraElement indicator(const ShapePtr& s, std::initializer_list<int> points) {
  auto p = AlgebraElement::zero(s);
  for (int x : points) p.block(x)(0, 0) = 1.0;
  return p;
}

GroupPtr klein() {
  return build_group(GroupSpec::direct_product({GroupSpec::cyclic(2), GroupSpec::cyclic(2)}));
}

}  // namespace

TEST_CASE("fundamental domains") {
  const GroupPtr triv = build_group(GroupSpec::cyclic(1));
  const ShapePtr one = make_shape(AlgebraShape::diagonal(1));
  CHECK(is_fundamental_domain(translation(triv, one), AlgebraElement::identity(one), 1e-10));

  const GroupPtr z5 = build_group(GroupSpec::cyclic(5));
  const ShapePtr s = make_shape(AlgebraShape::diagonal(5));
  const TraceAction a = translation(z5, s);
  CHECK(is_fundamental_domain(a, indicator(s, {0}), 1e-10));
  CHECK_FALSE(is_fundamental_domain(a, indicator(s, {0, 1}), 1e-10));
  CHECK(partition_defect(a, indicator(s, {0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("theta embedding") {
  const GroupPtr z4 = build_group(GroupSpec::cyclic(4));
  const ShapePtr s = make_shape(AlgebraShape::diagonal(4));
  const TraceAction a = translation(z4, s);
  const auto p = indicator(s, {0});
  const auto tp = theta_embedding(a, p, GroupFunction::delta(z4, 0));
  for (int x = 0; x < 4; ++x) CHECK(tp.block(x)(0, 0) == p.block(x)(0, 0));
  const auto one = theta_embedding(a, p, GroupFunction::constant(z4, 1.0));
  for (int x = 0; x < 4; ++x) CHECK(one.block(x)(0, 0) == Complex(1.0));
  CHECK_THROWS_AS(theta_embedding(a, indicator(s, {0, 1}), GroupFunction::delta(z4, 0)),
                  ValidationError);
}

TEST_CASE("theta embedding for the diagonal coupling is f(x^-1)") {
  const GroupPtr s3 = build_group(GroupSpec::symmetric(3));
  const CouplingRecord c = build_diagonal_coupling(s3);
  Eigen::VectorXcd v(6);
  for (int i = 0; i < 6; ++i) v[i] = Complex(i + 1, -i);
  const GroupFunction f(s3, v);
  const auto th = theta_embedding(c.lambda_action, c.p, f);
  for (int x = 0; x < 6; ++x) CHECK(std::abs(th.block(x)(0, 0) - f(s3->inv(x))) < 1e-15);
}

TEST_CASE("equivariance") {
  const GroupPtr s3 = build_group(GroupSpec::symmetric(3));
  const CouplingRecord c = build_diagonal_coupling(s3);
  CHECK(equivariance_defect(c.lambda_action, c.p) <= 1e-10);
  CHECK(equivariance_defect(c.gamma_action, c.q) <= 1e-10);

  const GroupPtr triv = build_group(GroupSpec::cyclic(1));
  const ShapePtr one = make_shape(AlgebraShape::diagonal(1));
  CHECK(equivariance_defect(translation(triv, one), AlgebraElement::identity(one)) == 0.0);

  for (const auto& cr : {build_me_product_coupling(build_group(GroupSpec::cyclic(3)),
                                                   build_group(GroupSpec::cyclic(5))),
                         build_wstar_coupling(build_group(GroupSpec::cyclic(4)), klein())}) {
    CHECK(equivariance_defect(cr.lambda_action, cr.p) <= 1e-10);
    CHECK(equivariance_defect(cr.gamma_action, cr.q) <= 1e-10);
  }
}

TEST_CASE("koopman matrices") {
  const GroupPtr z3 = build_group(GroupSpec::cyclic(3));
  const ShapePtr s = make_shape(AlgebraShape::full_matrix(2));
  const TraceAction trivial = TraceAction::inner(z3, s, std::vector<Eigen::MatrixXcd>(3, Eigen::MatrixXcd::Identity(2, 2)));
  const KoopmanMatrix kt = koopman(trivial);
  for (int g = 0; g < 3; ++g) CHECK(kt(g).isApprox(Eigen::MatrixXcd::Identity(4, 4)));

  const GroupPtr z2 = build_group(GroupSpec::cyclic(2));
  const ShapePtr two = make_shape(AlgebraShape::diagonal(2, 0.7));
  const KoopmanMatrix ks = koopman(translation(z2, two));
  Eigen::MatrixXcd swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK((ks(1) - swap).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("koopman representation is a multiple of the regular one") {
  for (const auto& c : {build_diagonal_coupling(build_group(GroupSpec::symmetric(3))),
                        build_me_product_coupling(build_group(GroupSpec::cyclic(3)),
                                                  build_group(GroupSpec::cyclic(5))),
                        build_wstar_coupling(build_group(GroupSpec::cyclic(4)), klein())}) {
    for (const TraceAction* a : {&c.gamma_action, &c.lambda_action}) {
      const KoopmanMatrix k = koopman(*a);
      const KoopmanDefects d = koopman_defects(*a, k);
      CHECK(d.unitarity < 1e-10);
      CHECK(d.multiplicativity < 1e-10);
      CHECK(d.implements_action < 1e-10);
      const Eigen::VectorXcd chi = koopman_character(k);
      CHECK(std::abs(chi[0] - double(c.shape()->l2_dimension())) < 1e-10);
      for (Eigen::Index g = 1; g < chi.size(); ++g) CHECK(std::abs(chi[g]) <= 1e-8);
    }
    CHECK(commutation_defect(c.gamma_action, c.lambda_action) <= 1e-10);
  }
}

TEST_CASE("coupling index") {
  const auto me = build_me_product_coupling(build_group(GroupSpec::cyclic(3)),
                                            build_group(GroupSpec::cyclic(5)));
  CHECK(coupling_index(me) == doctest::Approx(5.0 / 3.0));
  REQUIRE(exact_coupling_index(me));
  CHECK(*exact_coupling_index(me) == std::pair<long long, long long>{5, 3});
  CHECK(me.shape()->num_blocks() == 15);

  const auto ws = build_wstar_coupling(build_group(GroupSpec::cyclic(4)), klein());
  CHECK(coupling_index(ws) == doctest::Approx(1.0));
  const auto diag = build_diagonal_coupling(build_group(GroupSpec::dihedral(4)));
  REQUIRE(exact_coupling_index(diag));
  CHECK(*exact_coupling_index(diag) == std::pair<long long, long long>{1, 1});
}

TEST_CASE("trivial measure-equivalence coupling") {
  const GroupPtr triv = build_group(GroupSpec::cyclic(1));
  const auto c = build_me_product_coupling(triv, triv);
  CHECK(c.shape()->num_blocks() == 1);
  CHECK(c.q.block(0)(0, 0) == Complex(1.0));
  CHECK(c.p.block(0)(0, 0) == Complex(1.0));
}

TEST_CASE("diagonal coupling") {
  const auto c = build_diagonal_coupling(build_group(GroupSpec::symmetric(3)));
  CHECK(commutation_defect(c.gamma_action, c.lambda_action) <= 1e-12);
  CHECK(is_fundamental_domain(c.gamma_action, c.q, 1e-12));
  CHECK(is_fundamental_domain(c.lambda_action, c.p, 1e-12));
}

TEST_CASE("wstar couplings") {
  const GroupPtr z2 = build_group(GroupSpec::cyclic(2));
  const auto c2 = build_wstar_coupling(z2, z2);
  CHECK(coupling_index(c2) == doctest::Approx(1.0));
  // Same group, identity pairing: the two actions agree up to relabeling, so
  // each Koopman operator of one is that of the other for some element.
  const KoopmanMatrix kg = koopman(c2.gamma_action), kl = koopman(c2.lambda_action);
  for (int g = 0; g < 2; ++g) {
    double best = 1e9;
    for (int h = 0; h < 2; ++h) best = std::min(best, (kg(g) - kl(h)).cwiseAbs().maxCoeff());
    CHECK(best < 1e-12);
  }

  const GroupPtr z4 = build_group(GroupSpec::cyclic(4));
  const auto c = build_wstar_coupling(z4, klein());
  CHECK(c.shape()->num_blocks() == 1);
  CHECK(c.shape()->blocks[0].dim == 4);
  const auto d = diagnose(c);
  CHECK(d.commutation <= 1e-10);
  CHECK(d.q_partition <= 1e-10);
  CHECK(d.p_partition <= 1e-10);
  CHECK(d.q_projection);
  CHECK(d.p_projection);
  CHECK(c.pairing == std::vector<int>{0, 1, 2, 3});

  const auto u = wstar_gamma_unitaries(z4, klein(), {0, 1, 2, 3});
  for (int a = 0; a < 4; ++a) {
    CHECK((u[a] * u[a].adjoint() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    for (int b = 0; b < 4; ++b)
      CHECK((u[a] * u[b] - u[z4->mul(a, b)]).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("wstar coupling rejects bad input") {
  const GroupPtr z4 = build_group(GroupSpec::cyclic(4));
  CHECK_THROWS_AS(build_wstar_coupling(z4, build_group(GroupSpec::cyclic(3))), InvalidArgument);
  CHECK_THROWS_AS(build_wstar_coupling(z4, klein(), {0, 1, 1, 3}), InvalidArgument);
  CHECK_THROWS_AS(build_wstar_coupling(z4, klein(), {0, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(build_wstar_coupling(build_group(GroupSpec::symmetric(3)),
                                       build_group(GroupSpec::cyclic(6))),
                  NonAbelianGroup);
}

TEST_CASE("coupling validation catches non-commuting actions") {
  const GroupPtr z3 = build_group(GroupSpec::cyclic(3));
  const GroupPtr s3 = build_group(GroupSpec::symmetric(3));
  const auto c = build_diagonal_coupling(s3);
  // Left translation against itself does not commute on a nonabelian group.
  CHECK_THROWS_AS(CouplingRecord::make("bad", c.gamma_action, c.gamma_action, c.q, c.p),
                  ValidationError);
  (void)z3;
}

TEST_CASE("different lambda domain") {
  const GroupPtr z3 = build_group(GroupSpec::cyclic(3));
  const GroupPtr z5 = build_group(GroupSpec::cyclic(5));
  const auto c = build_me_product_coupling(z3, z5);
  // Graph of a function G -> H is another H-fundamental domain.
  auto p = AlgebraElement::zero(c.shape());
  for (int a = 0; a < 3; ++a) p.block(a * 5 + (2 * a) % 5)(0, 0) = 1.0;
  const auto c2 = with_lambda_domain(c, p);
  CHECK(coupling_index(c2) == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(with_lambda_domain(c, c.q), ValidationError);
}

TEST_CASE("brute-force kernel oracle reproduces the hand values") {
  const auto c = build_wstar_coupling(build_group(GroupSpec::cyclic(4)), klein());
  const Eigen::MatrixXd k = testing::brute_force_kernel(c);
  // K(gamma, t) = |(1/4) sum_j i^{j gamma} eta_j(t)|^2 with real eta_j.
  const Eigen::MatrixXcd eta = testing::naive_characters({2, 2});
  for (int g = 0; g < 4; ++g)
    for (int t = 0; t < 4; ++t) {
      Complex s = 0.0;
      for (int j = 0; j < 4; ++j) s += std::pow(Complex(0, 1), j * g) * eta(j, t);
      CHECK(k(g, t) == doctest::Approx(std::norm(s / 4.0)).epsilon(1e-12));
    }
}
